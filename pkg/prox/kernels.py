"""
Exact proximity operators of the component losses.

Every component is phi(<a_i, x>; b_i), so its prox reduces to a 1-D prox of phi
with effective stepsize lambda = alpha * ||a_i||^2 followed by a move along a_i.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from errors import ProxConvergenceError
from problem.finite_sum import FiniteSumProblem
from problem.losses import LossKind, stable_sigmoid

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
MAX_ITERATIONS = 200


@dataclass(frozen=True)
class ScalarProxQuery:
    """One 1-D prox evaluation: argmin_t phi(t; b) + (t - s)^2 / (2 lambda)"""

    s: float
    lam: float
    b: float
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not self.lam > 0.0:
            raise ValueError(f'lambda must be positive, got {self.lam}')
        if not 0.0 < self.tol <= 1e-6:
            raise ValueError(f'tol must lie in (0, 1e-6], got {self.tol}')

    def solve(self, loss_kind: LossKind) -> float:
        if loss_kind is LossKind.SQUARED_RESIDUAL:
            return scalar_prox_square(self.s, self.lam, self.b)
        return scalar_prox_logistic(self.s, self.lam, self.b, self.tol)


def scalar_prox_square(s: float, lam: float, b: float) -> float:
    """(s + lambda b) / (1 + lambda), the prox of 0.5 (t - b)^2"""
    if not lam > 0.0:
        raise ValueError(f'lambda must be positive, got {lam}')
    return (s + lam * b) / (1.0 + lam)


def scalar_prox_logistic(s: float, lam: float, b: float, tol: float = DEFAULT_TOL) -> float:
    """Prox of log(1 + exp(-b t)) by safeguarded Newton on r(t) = t - s + lambda phi'(t).

    r is strictly increasing and |phi'| < 1, so [s - lambda, s + lambda]
    brackets the root. A Newton iterate leaving the bracket is replaced by
    the bisection midpoint.
    """
    if not lam > 0.0:
        raise ValueError(f'lambda must be positive, got {lam}')
    if b not in (-1.0, 1.0):
        raise ValueError(f'logistic label must be -1 or +1, got {b}')

    lo, hi = s - lam, s + lam
    t = s
    for _ in range(MAX_ITERATIONS):
        sig = stable_sigmoid(-b * t)
        r = t - s - lam * b * sig
        if abs(r) <= tol:
            return t
        if r > 0.0:
            hi = t
        else:
            lo = t
        # bracket collapsed to float resolution
        if hi - lo <= 4.0 * np.finfo(np.float64).eps * max(1.0, abs(t)):
            return t
        slope = 1.0 + lam * sig * (1.0 - sig)
        t_next = t - r / slope
        if not lo < t_next < hi:
            t_next = 0.5 * (lo + hi)
        t = t_next

    raise ProxConvergenceError(
        f'logistic prox did not converge in {MAX_ITERATIONS} iterations '
        f'(s={s!r}, lambda={lam!r}, b={b!r})'
    )


def prox_component(problem: FiniteSumProblem, i: int, alpha: float, x: np.ndarray,
                   tol: float = DEFAULT_TOL) -> np.ndarray:
    """prox_{alpha f_i}(x) through the rank-one composition rule

    Zero rows make f_i constant, so the prox is the identity.
    """
    if not alpha > 0.0:
        raise ValueError(f'alpha must be positive, got {alpha}')
    norm_sq = float(problem.row_norms_sq[i])
    if norm_sq == 0.0:
        return np.array(x, dtype=np.float64, copy=True)

    row = problem.design[i]
    query = ScalarProxQuery(float(row @ x), alpha * norm_sq, float(problem.labels[i]), tol)
    p = query.solve(problem.loss_kind)
    return x + ((p - query.s) / norm_sq) * row


def prox_residual(problem: FiniteSumProblem, i: int, alpha: float, x: np.ndarray,
                  y: np.ndarray) -> float:
    """|| (x - y) / alpha - grad f_i(y) ||, zero exactly when y = prox_{alpha f_i}(x)"""
    grad = problem.component_gradient(i, y, validate=False)
    return float(math.sqrt(np.sum(((x - y) / alpha - grad) ** 2)))
