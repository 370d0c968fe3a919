"""
Explicit-gradient baselines: SGD, SVRG and SAGA.

They share the loops, trace schema and oracle accounting of the proximal
methods; only the step differs.
"""

import logging
from typing import Any, Dict, List, Optional, Union

import numpy as np

from algorithms.base_methods import BaseMethods, OuterMode, check_positive, start_point
from algorithms.loops import Observer, method_params, plain_loop, stage_loop, table_loop
from algorithms.proximal import UNCERTIFIED_FLAG, as_schedule
from algorithms.rng import RunRng
from algorithms.schedule import StepSchedule
from algorithms.steps import explicit_step
from algorithms.trace import RecordOptions, RunTrace, TraceRecorder
from problem.finite_sum import FiniteSumProblem

logger = logging.getLogger(__name__)


def run_sgd(problem: FiniteSumProblem, schedule: Union[StepSchedule, float],
            x0: np.ndarray, K: int, seed: int, master_seed: int = 0,
            options: Optional[RecordOptions] = None,
            observer: Optional[Observer] = None) -> RunTrace:
    if K < 1:
        raise ValueError(f'K must be >= 1, got {K}')
    schedule = as_schedule(schedule)
    x = start_point(problem, x0)
    params = method_params(K=K, seed=seed, master_seed=master_seed, **schedule.describe())
    recorder = TraceRecorder(problem, 'sgd', options, params)
    return plain_loop(problem, explicit_step, schedule, x, K, RunRng(master_seed, seed),
                      recorder, observer)


def run_svrg(problem: FiniteSumProblem, alpha: float, m: int, S: int, x0: np.ndarray,
             seed: int, outer_mode: Union[OuterMode, str] = OuterMode.RANDOM_INNER,
             master_seed: int = 0, options: Optional[RecordOptions] = None,
             observer: Optional[Observer] = None) -> RunTrace:
    check_positive('alpha', alpha)
    if m < 1 or S < 1:
        raise ValueError(f'm and S must be >= 1, got m={m}, S={S}')
    mode = OuterMode.parse(outer_mode)
    x = start_point(problem, x0)
    params = method_params(alpha=alpha, m=m, S=S, seed=seed, master_seed=master_seed,
                           outer_mode=mode)
    recorder = TraceRecorder(problem, 'svrg', options, params, record_every=1)
    if mode is OuterMode.LAST_INNER:
        recorder.flags.append(UNCERTIFIED_FLAG)
    return stage_loop(problem, explicit_step, alpha, m, S, x, mode,
                      RunRng(master_seed, seed), recorder, observer)


def run_saga(problem: FiniteSumProblem, alpha: float, x0: np.ndarray, K: int, seed: int,
             master_seed: int = 0, options: Optional[RecordOptions] = None,
             observer: Optional[Observer] = None) -> RunTrace:
    check_positive('alpha', alpha)
    if K < 1:
        raise ValueError(f'K must be >= 1, got {K}')
    x = start_point(problem, x0)
    params = method_params(alpha=alpha, K=K, seed=seed, master_seed=master_seed)
    recorder = TraceRecorder(problem, 'saga', options, params)
    return table_loop(problem, explicit_step, alpha, x, K, RunRng(master_seed, seed),
                      recorder, observer)


class GradientMethods(BaseMethods):
    """Dispatches the explicit-gradient baselines by name"""

    def get_methods(self) -> List[Dict[str, Any]]:
        return [
            {'name': 'sgd', 'params': ['schedule', 'K', 'seed']},
            {'name': 'svrg', 'params': ['alpha', 'm', 'S', 'seed', 'outer_mode']},
            {'name': 'saga', 'params': ['alpha', 'K', 'seed']},
        ]

    def has_method(self, name: str) -> bool:
        return name in ('sgd', 'svrg', 'saga')

    def handle_method(self, name: str, problem: FiniteSumProblem,
                      args: Dict[str, Any]) -> RunTrace:
        x0 = self._x0(problem, args)
        options = self._options(args)
        seed = args.get('seed', 0)
        master_seed = args.get('master_seed', 0)

        if name == 'sgd':
            schedule = args.get('schedule', args.get('alpha'))
            return run_sgd(problem, schedule, x0, args['K'], seed, master_seed, options)
        elif name == 'svrg':
            return run_svrg(problem, args['alpha'], args['m'], args['S'], x0, seed,
                            args.get('outer_mode', OuterMode.RANDOM_INNER), master_seed,
                            options)
        elif name == 'saga':
            return run_saga(problem, args['alpha'], x0, args['K'], seed, master_seed, options)
        else:
            raise ValueError(f'Unknown method: {name}')
