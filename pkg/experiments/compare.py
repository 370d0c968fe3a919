"""
compare-prox: SPPA, SVRP and SAPA on a common budget, seed-averaged per stage.

With N = S (m + n + 1) oracle calls, SVRP runs S stages, SAPA runs N - n
steps and SPPA runs N steps. The abscissa is the stage s = calls / (m + n + 1);
SAPA records are shifted by its n-call table set-up so that every method is
recorded at exactly s (m + n + 1) calls.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence

import numpy as np

from algorithms import RunTrace, StepSchedule
from experiments.base_experiment import BaseExperiment, ExperimentOutcome
from experiments.config import ExperimentConfig
from experiments.manifest import ExperimentManifest
from experiments.runner import RunJob, RunResult, problem_for, run_jobs, write_csv

logger = logging.getLogger(__name__)

METHODS = ('sppa', 'svrp', 'sapa')
CURVE_HEADER = ('stage', 'method', 'mean_gap', 'dev_gap', 'min_gap', 'max_gap')
RUN_HEADER = ('method', 'seed', 'status', 'oracle_calls', 'final_gap', 'fingerprint')


def gap_at_stage(trace: RunTrace, calls: int) -> float:
    """fgap of the first record at or past `calls` oracle calls (last record if none)"""
    for record in trace.records:
        if record.oracle_calls >= calls:
            return record.fgap
    return trace.final.fgap


def stage_rows(results: Sequence[RunResult], S: int, unit: int) -> List[List[Any]]:
    """One row per (stage, method): mean, sample deviation, min and max over seeds"""
    rows = []
    for method in METHODS:
        traces = [r.trace for r in results if r.job.method == method]
        if not traces:
            continue
        for s in range(1, S + 1):
            gaps = np.array([gap_at_stage(t, s * unit) for t in traces], dtype=np.float64)
            dev = float(np.std(gaps, ddof=1)) if gaps.size > 1 else 0.0
            rows.append([s, method, float(gaps.mean()), dev, float(gaps.min()),
                         float(gaps.max())])
    return rows


def build_jobs(config: ExperimentConfig, generator, L: float) -> List[RunJob]:
    n = config.n
    m = config.inner_count()
    unit = m + n + 1
    budget = config.S * unit
    alpha = config.alpha if config.alpha is not None else 1.0 / (5.0 * L)
    schedule = StepSchedule.polynomial(config.sppa_c, config.sppa_exponent)
    record_every = config.record_every or unit

    jobs = []
    for run_index in range(config.seeds):
        common = dict(generator=generator, run_index=run_index, master_seed=config.master_seed)
        jobs.append(RunJob('sppa', params={'schedule': schedule, 'K': budget},
                           record_every=record_every, **common))
        jobs.append(RunJob('svrp', params={'alpha': alpha, 'm': m, 'S': config.S,
                                           'outer_mode': config.outer}, **common))
        jobs.append(RunJob('sapa', params={'alpha': alpha, 'K': budget - n},
                           record_every=record_every, record_offset=n, **common))
    return jobs


def compare_prox(config: ExperimentConfig, out_dir: Path,
                 manifest: ExperimentManifest) -> ExperimentOutcome:
    generator = BaseExperiment.generator_config(config)
    problem = problem_for(generator)
    L = problem.smoothness_constant()
    unit = config.inner_count() + config.n + 1
    manifest.data = problem.describe()

    jobs = build_jobs(config, generator, L)
    results = run_jobs(jobs, config.workers)

    outcome = ExperimentOutcome(out_dir=out_dir)
    curves = write_csv(out_dir / 'curves.csv', CURVE_HEADER, stage_rows(results, config.S, unit))
    manifest.add_artifact(curves)
    outcome.artifacts.append(curves)

    run_rows = []
    for result in results:
        trace = result.trace
        run_rows.append([result.job.method, result.job.run_index, trace.status.value,
                         trace.final.oracle_calls, trace.final.fgap, trace.fingerprint()])
        manifest.runs.append({
            'method': result.job.method,
            'run_index': result.job.run_index,
            'master_seed': result.job.master_seed,
            'status': trace.status.value,
            'flags': trace.flags,
        })
    runs = write_csv(out_dir / 'runs.csv', RUN_HEADER, run_rows)
    manifest.add_artifact(runs)
    outcome.artifacts.append(runs)

    outcome.summary = {'budget': config.S * unit, 'stage_unit': unit,
                       'alpha': config.alpha if config.alpha is not None else 1.0 / (5.0 * L)}
    return outcome


class CompareExperiment(BaseExperiment):
    """Handler for compare-prox"""

    def get_commands(self) -> List[Dict[str, Any]]:
        return [{'name': 'compare-prox',
                 'description': 'SPPA vs SVRP vs SAPA, seed-averaged gaps per stage'}]

    def has_command(self, name: str) -> bool:
        return name == 'compare-prox'

    def run(self, name, config, out_dir, manifest):
        if name == 'compare-prox':
            return compare_prox(config, out_dir, manifest)
        raise ValueError(f'Unknown command: {name}')
