"""
Run pool: independent (method, params, seed) jobs executed across worker processes.

Jobs carry the generator config instead of the problem; each worker builds
the instance and its reference optimum once and reuses them. Results come
back in submission order, and all files are written by the parent process
after the pool has drained.
"""

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

from algorithms import RecordOptions, RunTrace, run_method
from diagnostics.reference import distance_fn, reference_optimum
from problem.finite_sum import FiniteSumProblem
from synthetic.generator import GeneratorConfig, generate_instance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunJob:
    """One run; every field is picklable"""

    method: str
    generator: GeneratorConfig
    run_index: int
    master_seed: int = 0
    params: Dict[str, Any] = field(default_factory=dict)
    target_gap: Optional[float] = None
    record_every: Optional[int] = None
    record_offset: int = 0
    refine_near_target: Optional[float] = None
    track_distance: bool = False
    tag: Dict[str, Any] = field(default_factory=dict)


@dataclass
class RunResult:
    job: RunJob
    trace: RunTrace


@lru_cache(maxsize=8)
def problem_for(generator: GeneratorConfig) -> FiniteSumProblem:
    """Instance for a generator config, built once per process"""
    return generate_instance(generator)


def execute(job: RunJob) -> RunResult:
    problem = problem_for(job.generator)
    fstar = reference_optimum(problem).fstar
    options = RecordOptions(
        fstar=fstar,
        distance=distance_fn(problem) if job.track_distance else None,
        record_every=job.record_every,
        record_offset=job.record_offset,
        keep_iterates=False,
        target_gap=job.target_gap,
        refine_near_target=job.refine_near_target,
    )
    args = dict(job.params)
    args.update({'seed': job.run_index, 'master_seed': job.master_seed, 'options': options})
    trace = run_method(job.method, problem, args)
    logger.debug('%s run %d finished: %s after %d oracle calls', job.method, job.run_index,
                 trace.status.value, trace.final.oracle_calls)
    return RunResult(job, trace)


def run_jobs(jobs: Sequence[RunJob], workers: int = 1) -> List[RunResult]:
    """Execute jobs, in-process for workers == 1; results keep the job order"""
    if workers < 1:
        raise ValueError(f'workers must be >= 1, got {workers}')
    logger.info('running %d jobs on %d worker(s)', len(jobs), workers)
    if workers == 1 or len(jobs) <= 1:
        return [execute(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(execute, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def format_value(value: Any) -> str:
    """C-locale text with 17 significant digits for floats"""
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return f'{value:.17g}'
    return str(value)


def write_csv(path: Union[str, Path], header: Sequence[str],
              rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    logger.debug('wrote %s', path)
    return path
