"""
Exact certificates of the variance assumptions at one algorithm state.

Every expectation over the component index (and over L-SVRP's refresh coin)
is computed by enumerating all branches, so the results are deterministic.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np

from algorithms.rates import abc_constants
from algorithms.reducers import (LsvrpAnchor, NoCorrection, ReducerState,
                                 SapaTable, SvrpAnchor)
from algorithms.steps import unified_step
from diagnostics.reference import distance_to_argmin, project_to_argmin
from errors import UnsupportedProblemError
from problem.finite_sum import FiniteSumProblem
from problem.losses import LossKind

logger = logging.getLogger(__name__)


@dataclass
class AssumptionReport:
    """Slacks (right side minus left side) of the checked inequalities; >= 0 means satisfied"""

    method: str
    unbiased_residual: float
    abc_margin: float
    sigma_recursion_margin: float
    D_value: float
    sigma_sq: float
    expected_v_sq: float
    expected_next_sigma_sq: float
    fgap: float
    branches: int
    descent_margin: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _check_method(method: str, state: ReducerState):
    expected = {
        'sppa': NoCorrection,
        'svrp': SvrpAnchor,
        'lsvrp': LsvrpAnchor,
        'sapa': SapaTable,
    }
    if method not in expected:
        raise ValueError(f'Unknown method: {method}')
    if not isinstance(state, expected[method]):
        raise ValueError(f'{method} needs a {expected[method].__name__} state, '
                         f'got {type(state).__name__}')


def _require_ols(problem: FiniteSumProblem):
    if problem.loss_kind is not LossKind.SQUARED_RESIDUAL:
        raise UnsupportedProblemError('sigma-based checks need a computable solution set '
                                      '(least-squares problems only)')


def correction_mean(problem: FiniteSumProblem, state: ReducerState) -> np.ndarray:
    """(1/n) sum_i e_i; zero for every unbiased correction"""
    return state.mean_correction(problem)


def _anchor_sigma_sq(problem: FiniteSumProblem, anchor: np.ndarray) -> float:
    """(1/n) sum_i ||grad f_i(anchor) - grad f_i(y)||^2 with y the projection of the anchor"""
    nearest = project_to_argmin(problem, anchor)
    diff = problem.component_gradients(anchor) - problem.component_gradients(nearest)
    return float(np.mean(np.sum(diff ** 2, axis=1)))


def sigma_squared(problem: FiniteSumProblem, method: str, state: ReducerState,
                  x_star: np.ndarray) -> float:
    """The method's sigma_k^2"""
    _require_ols(problem)
    _check_method(method, state)
    if method == 'sppa':
        grads = problem.component_gradients(x_star)
        return float(np.mean(np.sum(grads ** 2, axis=1)))
    if method in ('svrp', 'lsvrp'):
        return _anchor_sigma_sq(problem, state.anchor)
    diff = state.phi_grads - problem.component_gradients(x_star)
    return float(np.mean(np.sum(diff ** 2, axis=1)))


def sapa_sigma_closed_form(problem: FiniteSumProblem, state: SapaTable, x: np.ndarray,
                           x_star: np.ndarray) -> float:
    """E[sigma_{k+1}^2] = (1 - 1/n) sigma_k^2 + (1/n)(1/n) sum_i ||grad f_i(x) - grad f_i(x*)||^2"""
    n = problem.n
    sigma_sq = sigma_squared(problem, 'sapa', state, x_star)
    diff = problem.component_gradients(x) - problem.component_gradients(x_star)
    fresh = float(np.mean(np.sum(diff ** 2, axis=1)))
    return (1.0 - 1.0 / n) * sigma_sq + fresh / n


def _next_sigma_sq(problem: FiniteSumProblem, method: str, state: ReducerState,
                   x: np.ndarray, x_star: np.ndarray) -> np.ndarray:
    """sigma_{k+1}^2 on every branch, with the branch probabilities.

    Returns an array of (probability, value) rows.
    """
    n = problem.n
    sigma_sq = sigma_squared(problem, method, state, x_star)
    if method in ('sppa', 'svrp'):
        return np.array([[1.0, sigma_sq]])

    if method == 'lsvrp':
        p = state.p
        refreshed = _anchor_sigma_sq(problem, x)
        rows = [[(1.0 - p) / n, sigma_sq]] * n + [[p / n, refreshed]] * n
        return np.array(rows)

    # sapa: slot i takes grad f_i(x)
    at_star = problem.component_gradients(x_star)
    old = np.sum((state.phi_grads - at_star) ** 2, axis=1)
    new = np.sum((problem.component_gradients(x) - at_star) ** 2, axis=1)
    values = sigma_sq + (new - old) / n
    return np.column_stack([np.full(n, 1.0 / n), values])


def check_assumptions(problem: FiniteSumProblem, method: str, state: ReducerState,
                      x: np.ndarray, x_star: np.ndarray) -> AssumptionReport:
    """Enumerated unbiasedness, ABC bound and sigma recursion at the state (state, x)"""
    _require_ols(problem)
    _check_method(method, state)
    n = problem.n
    L = problem.smoothness_constant()
    p = state.p if isinstance(state, LsvrpAnchor) else None
    A, B, C, rho = abc_constants(method, L, n=n, p=p)

    corrections = state.corrections(problem)
    scale = max(1.0, float(np.max(np.linalg.norm(corrections, axis=1))))
    unbiased = float(np.linalg.norm(corrections.mean(axis=0))) / scale

    fgap = problem.full_value(x) - problem.full_value(x_star)
    v = problem.component_gradients(x) - corrections
    expected_v_sq = float(np.mean(np.sum(v ** 2, axis=1)))
    sigma_sq = sigma_squared(problem, method, state, x_star)
    D = -2.0 * float(state.gbar @ state.gbar) if method == 'svrp' else 0.0
    abc_margin = 2.0 * A * fgap + B * sigma_sq + D - expected_v_sq

    branches = _next_sigma_sq(problem, method, state, x, x_star)
    expected_next = float(branches[:, 0] @ branches[:, 1])
    recursion_margin = (1.0 - rho) * sigma_sq + 2.0 * C * fgap - expected_next

    return AssumptionReport(
        method=method,
        unbiased_residual=unbiased,
        abc_margin=abc_margin,
        sigma_recursion_margin=recursion_margin,
        D_value=D,
        sigma_sq=sigma_sq,
        expected_v_sq=expected_v_sq,
        expected_next_sigma_sq=expected_next,
        fgap=fgap,
        branches=n * (2 if method == 'lsvrp' else 1),
    )


def descent_margin(problem: FiniteSumProblem, method: str, state: ReducerState,
                   x: np.ndarray, alpha: float, M: float, x_star: np.ndarray) -> float:
    """Slack of the one-step Lyapunov descent inequality, enumerated over i (and the coin).

    E[dist(x+)^2 + alpha^2 M sigma_{k+1}^2] <= dist(x)^2 + alpha^2 (M + B - rho M) sigma_k^2
        - 2 alpha (1 - alpha (A + M C)) (F(x) - F_*) + alpha^2 D
    """
    _require_ols(problem)
    _check_method(method, state)
    if not alpha > 0.0 or not M > 0.0:
        raise ValueError(f'alpha and M must be positive, got alpha={alpha}, M={M}')
    n = problem.n
    L = problem.smoothness_constant()
    p = state.p if isinstance(state, LsvrpAnchor) else None
    A, B, C, rho = abc_constants(method, L, n=n, p=p)

    sigma_sq = sigma_squared(problem, method, state, x_star)
    fgap = problem.full_value(x) - problem.full_value(x_star)
    D = -2.0 * float(state.gbar @ state.gbar) if method == 'svrp' else 0.0

    corrections = state.corrections(problem)
    dist_next = np.array([
        distance_to_argmin(problem, unified_step(x, problem, alpha, i, corrections[i])) ** 2
        for i in range(n)
    ])
    branches = _next_sigma_sq(problem, method, state, x, x_star)
    expected_left = float(dist_next.mean()) + alpha ** 2 * M * float(branches[:, 0] @ branches[:, 1])

    right = (distance_to_argmin(problem, x) ** 2
             + alpha ** 2 * (M + B - rho * M) * sigma_sq
             - 2.0 * alpha * (1.0 - alpha * (A + M * C)) * fgap
             + alpha ** 2 * D)
    return right - expected_left
