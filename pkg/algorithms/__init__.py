"""Package initialization"""

from typing import Any, Dict, List

from algorithms.base_methods import BaseMethods, OuterMode
from algorithms.gradient import GradientMethods, run_saga, run_sgd, run_svrg
from algorithms.proximal import ProximalMethods, run_lsvrp, run_sapa, run_sppa, run_svrp
from algorithms.rates import (RateConstants, ergodic_bound, function_value_envelope,
                              generic_rate_q, linear_envelope, lsvrp_rate_q, sapa_rate_q,
                              sppa_ergodic_bound, svrp_rate_q)
from algorithms.reducers import LsvrpAnchor, NoCorrection, ReducerState, SapaTable, SvrpAnchor
from algorithms.rng import RunRng
from algorithms.schedule import StepSchedule
from algorithms.steps import explicit_step, implicit_gradient, unified_step
from algorithms.trace import (RecordOptions, RunStatus, RunTrace, TraceRecord,
                              weighted_average_iterate)

METHOD_HANDLERS: List[BaseMethods] = [ProximalMethods(), GradientMethods()]


def list_methods() -> List[Dict[str, Any]]:
    methods = []
    for handler in METHOD_HANDLERS:
        methods.extend(handler.get_methods())
    return methods


def run_method(name: str, problem, args: Dict[str, Any]) -> RunTrace:
    """Route a run to the handler that owns the method name"""
    for handler in METHOD_HANDLERS:
        if handler.has_method(name):
            return handler.handle_method(name, problem, args)
    raise ValueError(f'Unknown method: {name}')


__all__ = [
    'BaseMethods', 'OuterMode', 'GradientMethods', 'ProximalMethods',
    'run_sppa', 'run_svrp', 'run_lsvrp', 'run_sapa', 'run_sgd', 'run_svrg', 'run_saga',
    'RateConstants', 'svrp_rate_q', 'lsvrp_rate_q', 'sapa_rate_q', 'generic_rate_q',
    'ergodic_bound', 'sppa_ergodic_bound', 'linear_envelope', 'function_value_envelope',
    'ReducerState', 'NoCorrection', 'SvrpAnchor', 'LsvrpAnchor', 'SapaTable',
    'RunRng', 'StepSchedule', 'unified_step', 'explicit_step', 'implicit_gradient',
    'RecordOptions', 'RunStatus', 'RunTrace', 'TraceRecord', 'weighted_average_iterate',
    'METHOD_HANDLERS', 'list_methods', 'run_method',
]
