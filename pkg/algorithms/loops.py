"""
Iteration loops shared by the proximal methods and their explicit counterparts.

Each loop takes a step function with the signature of unified_step or
explicit_step, so SVRP and SVRG (or SAPA and SAGA) run the same loop with
the same oracle accounting and differ only in the step.
"""

import logging
from enum import Enum
from typing import Any, Callable, Dict, Optional

import numpy as np

from algorithms.base_methods import OuterMode
from algorithms.reducers import LsvrpAnchor, NoCorrection, ReducerState, SapaTable, SvrpAnchor
from algorithms.rng import RunRng
from algorithms.schedule import StepSchedule
from algorithms.steps import unified_step
from algorithms.trace import RunTrace, TraceRecorder
from problem.finite_sum import FiniteSumProblem

logger = logging.getLogger(__name__)

StepFn = Callable[[np.ndarray, FiniteSumProblem, float, int, np.ndarray], np.ndarray]
Observer = Callable[[int, np.ndarray, ReducerState], None]


def plain_loop(problem: FiniteSumProblem, step: StepFn, schedule: StepSchedule,
               x: np.ndarray, K: int, rng: RunRng, recorder: TraceRecorder,
               observer: Optional[Observer] = None) -> RunTrace:
    """K steps with e = 0 and stepsize schedule(k); one oracle call per step"""
    state = NoCorrection()
    e = np.zeros(problem.d)
    calls = 0
    k = 0
    with np.errstate(over='ignore', invalid='ignore'):
        status = recorder.start(x, calls)
        while status is None and k < K:
            if observer is not None:
                observer(k, x, state)
            i = rng.index(problem.n)
            x = step(x, problem, schedule(k), i, e)
            k += 1
            calls += 1
            if recorder.due(k):
                status = recorder.record(k, x, calls)
        return recorder.finish(status, k, x, calls)


def stage_loop(problem: FiniteSumProblem, step: StepFn, alpha: float, m: int, S: int,
               x: np.ndarray, outer_mode: OuterMode, rng: RunRng, recorder: TraceRecorder,
               observer: Optional[Observer] = None) -> RunTrace:
    """S outer stages of m inner steps around a fixed anchor; one record per stage.

    Each stage costs n (anchor gradient) + m (inner steps) + 1 oracle calls.
    The next anchor comes from the inner iterates x^0..x^{m-1}
    (RANDOM_INNER, AVERAGE_INNER) or from x^m (LAST_INNER).
    """
    n = problem.n
    anchor = x
    calls = 0
    s = 0
    k = 0
    with np.errstate(over='ignore', invalid='ignore'):
        status = recorder.start(anchor, calls)
        while status is None and s < S:
            state = SvrpAnchor.at(problem, anchor)
            calls += n

            pick = rng.inner_index(m) if outer_mode is OuterMode.RANDOM_INNER else -1
            running = np.zeros(problem.d) if outer_mode is OuterMode.AVERAGE_INNER else None
            chosen = None
            x = anchor
            for t in range(m):
                if t == pick:
                    chosen = x
                if running is not None:
                    running += x
                if observer is not None:
                    observer(k, x, state)
                i = rng.index(n)
                x = step(x, problem, alpha, i, state.correction(problem, i))
                calls += 1
                k += 1
            calls += 1

            if outer_mode is OuterMode.RANDOM_INNER:
                anchor = chosen
            elif outer_mode is OuterMode.AVERAGE_INNER:
                anchor = running / m
            else:
                anchor = x
            s += 1
            status = recorder.record(s, anchor, calls)
        return recorder.finish(status, s, anchor, calls)


def anchor_loop(problem: FiniteSumProblem, step: StepFn, alpha: float, p: float,
                x: np.ndarray, K: int, rng: RunRng, recorder: TraceRecorder,
                observer: Optional[Observer] = None) -> RunTrace:
    """Loopless anchor: after each step u <- x^k with probability p (n oracle calls)"""
    n = problem.n
    with np.errstate(over='ignore', invalid='ignore'):
        state = LsvrpAnchor.at(problem, x, p)
        calls = n
        k = 0
        status = recorder.start(x, calls)
        while status is None and k < K:
            if observer is not None:
                observer(k, x, state)
            i = rng.index(n)
            x_next = step(x, problem, alpha, i, state.correction(problem, i))
            calls += 1
            if rng.bernoulli(p):
                state.refresh(problem, x)
                calls += n
            x = x_next
            k += 1
            if recorder.due(k):
                status = recorder.record(k, x, calls)
        return recorder.finish(status, k, x, calls)


def table_loop(problem: FiniteSumProblem, step: StepFn, alpha: float, x: np.ndarray,
               K: int, rng: RunRng, recorder: TraceRecorder,
               observer: Optional[Observer] = None) -> RunTrace:
    """Gradient table: after each step slot i_k stores grad f_i(x^k), the previous iterate.

    Initialisation phi_i = x^0 costs n oracle calls, every step one more.
    """
    n = problem.n
    with np.errstate(over='ignore', invalid='ignore'):
        table = SapaTable.at(problem, x)
        calls = n
        k = 0
        status = recorder.start(x, calls)
        while status is None and k < K:
            if observer is not None:
                observer(k, x, table)
            i = rng.index(n)
            e = table.correction(problem, i)
            grad = problem.component_gradient(i, x, validate=False)
            if step is unified_step:
                x_next = unified_step(x, problem, alpha, i, e)
            else:
                x_next = x - alpha * (grad - e)
            table.replace(i, grad)
            calls += 1
            x = x_next
            k += 1
            if recorder.due(k):
                status = recorder.record(k, x, calls)
        drift = table.drift(problem)
        if drift > 1e-10:
            logger.debug('gradient table drift %.3e after %d steps', drift, k)
        return recorder.finish(status, k, x, calls)


def method_params(**kwargs) -> Dict[str, Any]:
    """Trace params with enums flattened to their values"""
    params = {}
    for key, value in kwargs.items():
        if isinstance(value, Enum):
            value = value.value
        params[key] = value
    return params
