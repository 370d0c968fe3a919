"""
Stepsize sweeps: cost to reach F(x) - F_* <= eps for every (stepsize, method, seed).

SAPA/SAGA count iterations against an iteration cap; SVRP/SVRG count oracle
calls against the budget N = S (m + n + 1). Divergent runs are recorded as cap.
SAPA/SAGA record once per pass until the gap is within a factor
REFINE_NEAR_TARGET of eps and every step after that.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from diagnostics.empirical import iterations_to_accuracy
from experiments.base_experiment import BaseExperiment, ExperimentOutcome
from experiments.config import ExperimentConfig
from experiments.manifest import ExperimentManifest
from experiments.runner import RunJob, RunResult, problem_for, run_jobs, write_csv

logger = logging.getLogger(__name__)

SWEEP_HEADER = ('stepsize', 'method', 'seed', 'iters_or_cap', 'converged')
SUMMARY_HEADER = ('stepsize', 'method', 'runs', 'converged', 'median_cost', 'min_cost',
                  'max_cost')
CAP = 'cap'
REFINE_NEAR_TARGET = 100.0


def default_grid(L: float, per_decade: int = 20) -> List[float]:
    """Log grid over [1e-3/L, 10/L]"""
    if not L > 0.0:
        raise ValueError(f'L must be positive, got {L}')
    points = 4 * per_decade + 1
    return [float(a) for a in np.logspace(np.log10(1e-3 / L), np.log10(10.0 / L), points)]


def sweep_rows(results: Sequence[RunResult], eps: float, by: str) -> List[List[Any]]:
    rows = []
    for result in results:
        cost = iterations_to_accuracy(result.trace, eps, by=by)
        rows.append([result.job.tag['stepsize'], result.job.method, result.job.run_index,
                     CAP if cost is None else cost, cost is not None])
    return rows


def summarize(rows: Sequence[Sequence[Any]], cap_cost: int) -> List[List[Any]]:
    """Per (stepsize, method) statistics; capped runs count at cap_cost"""
    groups: Dict[Tuple[float, str], List[Any]] = {}
    for stepsize, method, _, cost, _ in rows:
        groups.setdefault((stepsize, method), []).append(cost)

    summary = []
    for (stepsize, method), costs in groups.items():
        values = np.array([cap_cost if c == CAP else c for c in costs], dtype=np.float64)
        converged = sum(1 for c in costs if c != CAP)
        summary.append([stepsize, method, len(costs), converged, float(np.median(values)),
                        float(values.min()), float(values.max())])
    return summary


def best_tuned(summary: Sequence[Sequence[Any]], method: str) -> Optional[Dict[str, Any]]:
    """Stepsize with the smallest median cost among those where most runs converged"""
    best = None
    for stepsize, name, runs, converged, median, _, _ in summary:
        if name != method or 2 * converged <= runs:
            continue
        if best is None or median < best['median_cost']:
            best = {'stepsize': stepsize, 'median_cost': median}
    return best


def _grid(config: ExperimentConfig, L: float) -> List[float]:
    return list(config.alpha_grid) if config.alpha_grid else default_grid(L, config.grid_per_decade)


def _write(out_dir: Path, manifest: ExperimentManifest, outcome: ExperimentOutcome,
           results: Sequence[RunResult], rows, summary):
    for name, header, body in (('sweep.csv', SWEEP_HEADER, rows),
                               ('sweep_summary.csv', SUMMARY_HEADER, summary)):
        path = write_csv(out_dir / name, header, body)
        manifest.add_artifact(path)
        outcome.artifacts.append(path)
    for result in results:
        manifest.runs.append({
            'method': result.job.method,
            'stepsize': result.job.tag['stepsize'],
            'run_index': result.job.run_index,
            'master_seed': result.job.master_seed,
            'status': result.trace.status.value,
        })


def sweep_sapa_saga(config: ExperimentConfig, out_dir: Path,
                    manifest: ExperimentManifest) -> ExperimentOutcome:
    generator = BaseExperiment.generator_config(config)
    problem = problem_for(generator)
    L = problem.smoothness_constant()
    manifest.data = problem.describe()
    cap = config.iteration_cap()
    grid = _grid(config, L)
    logger.info('sapa/saga sweep over %d stepsizes, %d seeds, cap %d', len(grid),
                config.seeds, cap)

    jobs = []
    for alpha in grid:
        for method in ('sapa', 'saga'):
            for run_index in range(config.seeds):
                jobs.append(RunJob(method, generator, run_index, config.master_seed,
                                   params={'alpha': alpha, 'K': cap}, target_gap=config.eps,
                                   record_every=config.record_every or config.n,
                                   refine_near_target=REFINE_NEAR_TARGET,
                                   tag={'stepsize': alpha}))
    results = run_jobs(jobs, config.workers)

    rows = sweep_rows(results, config.eps, by='counter')
    summary = summarize(rows, cap)
    outcome = ExperimentOutcome(out_dir=out_dir)
    _write(out_dir, manifest, outcome, results, rows, summary)
    outcome.summary = {
        'grid': grid,
        'cap': cap,
        'best': {m: best_tuned(summary, m) for m in ('sapa', 'saga')},
        'table': summary,
    }
    return outcome


def sweep_svrp_svrg(config: ExperimentConfig, out_dir: Path,
                    manifest: ExperimentManifest) -> ExperimentOutcome:
    generator = BaseExperiment.generator_config(config)
    problem = problem_for(generator)
    L = problem.smoothness_constant()
    manifest.data = problem.describe()
    m = config.inner_count()
    budget = config.S * (m + config.n + 1)
    grid = _grid(config, L)
    logger.info('svrp/svrg sweep over %d stepsizes, %d seeds, budget %d oracle calls',
                len(grid), config.seeds, budget)

    jobs = []
    for alpha in grid:
        for method in ('svrp', 'svrg'):
            for run_index in range(config.seeds):
                jobs.append(RunJob(method, generator, run_index, config.master_seed,
                                   params={'alpha': alpha, 'm': m, 'S': config.S,
                                           'outer_mode': config.outer},
                                   target_gap=config.eps, tag={'stepsize': alpha}))
    results = run_jobs(jobs, config.workers)

    rows = sweep_rows(results, config.eps, by='oracle_calls')
    summary = summarize(rows, budget)
    outcome = ExperimentOutcome(out_dir=out_dir)
    _write(out_dir, manifest, outcome, results, rows, summary)
    outcome.summary = {
        'grid': grid,
        'budget': budget,
        'best': {name: best_tuned(summary, name) for name in ('svrp', 'svrg')},
        'table': summary,
    }
    return outcome


class SweepExperiments(BaseExperiment):
    """Handler for the two stepsize sweeps"""

    def get_commands(self) -> List[Dict[str, Any]]:
        return [
            {'name': 'sweep-sapa-saga',
             'description': 'iterations to accuracy for SAPA and SAGA over a stepsize grid'},
            {'name': 'sweep-svrp-svrg',
             'description': 'oracle calls to accuracy for SVRP and SVRG over a stepsize grid'},
        ]

    def has_command(self, name: str) -> bool:
        return name in ('sweep-sapa-saga', 'sweep-svrp-svrg')

    def run(self, name, config, out_dir, manifest):
        if name == 'sweep-sapa-saga':
            return sweep_sapa_saga(config, out_dir, manifest)
        elif name == 'sweep-svrp-svrg':
            return sweep_svrp_svrg(config, out_dir, manifest)
        raise ValueError(f'Unknown command: {name}')
