"""
Stochastic proximal point methods: SPPA, SVRP, L-SVRP and SAPA
"""

import logging
from typing import Any, Dict, List, Optional, Union

import numpy as np

from algorithms.base_methods import BaseMethods, OuterMode, check_positive, start_point
from algorithms.loops import (Observer, anchor_loop, method_params, plain_loop,
                              stage_loop, table_loop)
from algorithms.rng import RunRng
from algorithms.schedule import StepSchedule
from algorithms.steps import unified_step
from algorithms.trace import RecordOptions, RunTrace, TraceRecorder
from problem.finite_sum import FiniteSumProblem

logger = logging.getLogger(__name__)

UNCERTIFIED_FLAG = 'uncertified'


def as_schedule(schedule: Union[StepSchedule, float]) -> StepSchedule:
    if isinstance(schedule, StepSchedule):
        return schedule
    return StepSchedule.constant(float(schedule))


def run_sppa(problem: FiniteSumProblem, schedule: Union[StepSchedule, float],
             x0: np.ndarray, K: int, seed: int, master_seed: int = 0,
             options: Optional[RecordOptions] = None,
             observer: Optional[Observer] = None) -> RunTrace:
    """x^{k+1} = prox_{alpha_k f_{i_k}}(x^k) with i_k uniform, K iterations"""
    if K < 1:
        raise ValueError(f'K must be >= 1, got {K}')
    schedule = as_schedule(schedule)
    x = start_point(problem, x0)
    params = method_params(K=K, seed=seed, master_seed=master_seed, **schedule.describe())
    recorder = TraceRecorder(problem, 'sppa', options, params)
    logger.debug('sppa run seed=%d K=%d %s', seed, K, schedule.describe())
    return plain_loop(problem, unified_step, schedule, x, K, RunRng(master_seed, seed),
                      recorder, observer)


def run_svrp(problem: FiniteSumProblem, alpha: float, m: int, S: int, x0: np.ndarray,
             seed: int, outer_mode: Union[OuterMode, str] = OuterMode.RANDOM_INNER,
             master_seed: int = 0, options: Optional[RecordOptions] = None,
             observer: Optional[Observer] = None) -> RunTrace:
    """Outer stages around an anchor with its full gradient, m unified steps each"""
    check_positive('alpha', alpha)
    if m < 1 or S < 1:
        raise ValueError(f'm and S must be >= 1, got m={m}, S={S}')
    mode = OuterMode.parse(outer_mode)
    x = start_point(problem, x0)
    params = method_params(alpha=alpha, m=m, S=S, seed=seed, master_seed=master_seed,
                           outer_mode=mode)
    recorder = TraceRecorder(problem, 'svrp', options, params, record_every=1)
    if mode is OuterMode.LAST_INNER:
        recorder.flags.append(UNCERTIFIED_FLAG)
        logger.warning('svrp with the last inner iterate as anchor has no convergence '
                       'guarantee; trace flagged %s', UNCERTIFIED_FLAG)
    return stage_loop(problem, unified_step, alpha, m, S, x, mode,
                      RunRng(master_seed, seed), recorder, observer)


def run_lsvrp(problem: FiniteSumProblem, alpha: float, p: float, x0: np.ndarray, K: int,
              seed: int, master_seed: int = 0, options: Optional[RecordOptions] = None,
              observer: Optional[Observer] = None) -> RunTrace:
    check_positive('alpha', alpha)
    if not 0.0 < p <= 1.0:
        raise ValueError(f'p must lie in (0, 1], got {p}')
    if K < 1:
        raise ValueError(f'K must be >= 1, got {K}')
    x = start_point(problem, x0)
    params = method_params(alpha=alpha, p=p, K=K, seed=seed, master_seed=master_seed)
    recorder = TraceRecorder(problem, 'lsvrp', options, params)
    return anchor_loop(problem, unified_step, alpha, p, x, K, RunRng(master_seed, seed),
                       recorder, observer)


def run_sapa(problem: FiniteSumProblem, alpha: float, x0: np.ndarray, K: int, seed: int,
             master_seed: int = 0, options: Optional[RecordOptions] = None,
             observer: Optional[Observer] = None) -> RunTrace:
    check_positive('alpha', alpha)
    if K < 1:
        raise ValueError(f'K must be >= 1, got {K}')
    x = start_point(problem, x0)
    params = method_params(alpha=alpha, K=K, seed=seed, master_seed=master_seed)
    recorder = TraceRecorder(problem, 'sapa', options, params)
    return table_loop(problem, unified_step, alpha, x, K, RunRng(master_seed, seed),
                      recorder, observer)


class ProximalMethods(BaseMethods):
    """Dispatches the proximal methods by name"""

    def get_methods(self) -> List[Dict[str, Any]]:
        return [
            {'name': 'sppa', 'params': ['schedule', 'K', 'seed']},
            {'name': 'svrp', 'params': ['alpha', 'm', 'S', 'seed', 'outer_mode']},
            {'name': 'lsvrp', 'params': ['alpha', 'p', 'K', 'seed']},
            {'name': 'sapa', 'params': ['alpha', 'K', 'seed']},
        ]

    def has_method(self, name: str) -> bool:
        return name in ('sppa', 'svrp', 'lsvrp', 'sapa')

    def handle_method(self, name: str, problem: FiniteSumProblem,
                      args: Dict[str, Any]) -> RunTrace:
        x0 = self._x0(problem, args)
        options = self._options(args)
        seed = args.get('seed', 0)
        master_seed = args.get('master_seed', 0)

        if name == 'sppa':
            schedule = args.get('schedule', args.get('alpha'))
            return run_sppa(problem, schedule, x0, args['K'], seed, master_seed, options)
        elif name == 'svrp':
            return run_svrp(problem, args['alpha'], args['m'], args['S'], x0, seed,
                            args.get('outer_mode', OuterMode.RANDOM_INNER), master_seed,
                            options)
        elif name == 'lsvrp':
            return run_lsvrp(problem, args['alpha'], args['p'], x0, args['K'], seed,
                             master_seed, options)
        elif name == 'sapa':
            return run_sapa(problem, args['alpha'], x0, args['K'], seed, master_seed, options)
        else:
            raise ValueError(f'Unknown method: {name}')
