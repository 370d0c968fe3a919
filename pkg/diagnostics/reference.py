"""
Reference optimum F_* and the distance to argmin F
"""

import logging
import threading
import weakref
from dataclasses import dataclass
from enum import Enum
from typing import Dict

import numpy as np
from scipy import linalg

from errors import ReferenceSolverError, UnsupportedProblemError
from problem.finite_sum import FiniteSumProblem
from problem.losses import LossKind

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
MAX_NEWTON_ITERATIONS = 200
ARMIJO = 1e-4


class ReferenceMethod(Enum):
    CLOSED_FORM_OLS = 'closed_form_ols'
    FULL_BATCH_SOLVE = 'full_batch_solve'


@dataclass(frozen=True)
class ReferenceSolution:
    fstar: float
    x_ref: np.ndarray
    grad_norm: float
    method: ReferenceMethod
    iterations: int = 0

    def to_dict(self) -> dict:
        return {
            'fstar': self.fstar,
            'grad_norm': self.grad_norm,
            'method': self.method.value,
            'iterations': self.iterations,
        }


@dataclass(frozen=True)
class RowSpace:
    """Minimum-norm solution x_hat and an orthonormal basis (rows) of range(A^T)"""

    x_hat: np.ndarray
    basis: np.ndarray


_lock = threading.Lock()
_solutions: 'weakref.WeakKeyDictionary[FiniteSumProblem, Dict[float, ReferenceSolution]]' = \
    weakref.WeakKeyDictionary()
_row_spaces: 'weakref.WeakKeyDictionary[FiniteSumProblem, RowSpace]' = weakref.WeakKeyDictionary()


def _require_ols(problem: FiniteSumProblem, what: str):
    if problem.loss_kind is not LossKind.SQUARED_RESIDUAL:
        raise UnsupportedProblemError(f'{what} is only available for least-squares problems')


def row_space(problem: FiniteSumProblem) -> RowSpace:
    """SVD of the design, cached per problem"""
    _require_ols(problem, 'the row-space decomposition')
    with _lock:
        cached = _row_spaces.get(problem)
    if cached is not None:
        return cached

    U, s, Vt = linalg.svd(problem.design, full_matrices=False)
    cutoff = max(problem.n, problem.d) * np.finfo(np.float64).eps * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    coefficients = (U[:, :rank].T @ problem.labels) / s[:rank]
    space = RowSpace(x_hat=Vt[:rank].T @ coefficients, basis=Vt[:rank])
    space.x_hat.setflags(write=False)
    space.basis.setflags(write=False)

    with _lock:
        _row_spaces[problem] = space
    logger.debug('row space of rank %d for n=%d d=%d', rank, problem.n, problem.d)
    return space


def _solve_ols(problem: FiniteSumProblem) -> ReferenceSolution:
    x_ref = np.array(row_space(problem).x_hat)
    return ReferenceSolution(
        fstar=problem.full_value(x_ref),
        x_ref=x_ref,
        grad_norm=float(np.linalg.norm(problem.full_gradient(x_ref))),
        method=ReferenceMethod.CLOSED_FORM_OLS,
    )


def _solve_logistic(problem: FiniteSumProblem, tol: float) -> ReferenceSolution:
    """Damped Newton with Armijo backtracking; minimum-norm directions keep x in range(A^T).

    Newton replaces backtracking gradient descent here: the stopping rule
    ||grad F|| <= tol (1 + ||grad F(0)||) is the same, and a non-descent
    Newton direction falls back to the plain gradient step.
    """
    x = np.zeros(problem.d)
    grad = problem.full_gradient(x)
    target = tol * (1.0 + float(np.linalg.norm(grad)))
    value = problem.full_value(x)

    for iteration in range(MAX_NEWTON_ITERATIONS):
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm <= target:
            logger.debug('logistic reference converged in %d iterations', iteration)
            return ReferenceSolution(value, x, grad_norm, ReferenceMethod.FULL_BATCH_SOLVE,
                                     iteration)

        weights = problem.loss_kind.second_derivative(problem.design @ x, problem.labels)
        hessian = (problem.design.T * weights) @ problem.design / problem.n
        direction = -linalg.lstsq(hessian, grad)[0]
        slope = float(grad @ direction)
        if not slope < 0.0:
            direction = -grad
            slope = -grad_norm ** 2

        step = 1.0
        while True:
            candidate = x + step * direction
            candidate_value = problem.full_value(candidate)
            if candidate_value <= value + ARMIJO * step * slope or step < 1e-16:
                break
            step *= 0.5
        x, value = candidate, candidate_value
        grad = problem.full_gradient(x)

    raise ReferenceSolverError(
        f'logistic reference solver stopped at gradient norm {np.linalg.norm(grad):.3e} '
        f'after {MAX_NEWTON_ITERATIONS} iterations; the instance may be (nearly) separable'
    )


def reference_optimum(problem: FiniteSumProblem, tol: float = DEFAULT_TOL) -> ReferenceSolution:
    """F_* and a minimizer; memoized per (problem, tol)"""
    if not tol > 0.0:
        raise ValueError(f'tol must be positive, got {tol}')
    with _lock:
        cached = _solutions.get(problem, {}).get(tol)
    if cached is not None:
        return cached

    if problem.loss_kind is LossKind.SQUARED_RESIDUAL:
        solution = _solve_ols(problem)
    else:
        solution = _solve_logistic(problem, tol)

    with _lock:
        _solutions.setdefault(problem, {})[tol] = solution
    return solution


def project_to_argmin(problem: FiniteSumProblem, x: np.ndarray) -> np.ndarray:
    """Nearest point of the affine solution set x_hat + null(A)"""
    space = row_space(problem)
    offset = np.asarray(x, dtype=np.float64) - space.x_hat
    return x - space.basis.T @ (space.basis @ offset)


def distance_to_argmin(problem: FiniteSumProblem, x: np.ndarray) -> float:
    space = row_space(problem)
    offset = np.asarray(x, dtype=np.float64) - space.x_hat
    return float(np.linalg.norm(space.basis @ offset))


def quadratic_growth_slack(problem: FiniteSumProblem, x: np.ndarray, mu: float) -> float:
    """F(x) - F_* - (mu/2) dist(x, argmin F)^2"""
    fstar = reference_optimum(problem).fstar
    return problem.full_value(x) - fstar - 0.5 * mu * distance_to_argmin(problem, x) ** 2


def distance_fn(problem: FiniteSumProblem):
    """Callable for RecordOptions.distance; None for problems without a computable argmin"""
    if problem.loss_kind is not LossKind.SQUARED_RESIDUAL:
        return None
    row_space(problem)
    return lambda x: distance_to_argmin(problem, x)
