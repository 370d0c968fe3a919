"""
Independent prox oracle: damped Newton on the full d-dimensional prox objective
"""

import logging

import numpy as np
from scipy import linalg

from errors import ProxConvergenceError
from problem.finite_sum import FiniteSumProblem

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 100


def prox_oracle(problem: FiniteSumProblem, i: int, alpha: float, x: np.ndarray,
                tol: float = 1e-13) -> np.ndarray:
    """argmin_y f_i(y) + ||y - x||^2 / (2 alpha), without the rank-one reduction"""
    if not alpha > 0.0:
        raise ValueError(f'alpha must be positive, got {alpha}')
    x = np.asarray(x, dtype=np.float64)
    row = problem.design[i]
    b = float(problem.labels[i])
    kind = problem.loss_kind

    def objective(y):
        return problem.component_value(i, y, validate=False) + float((y - x) @ (y - x)) / (2.0 * alpha)

    y = np.array(x, copy=True)
    value = objective(y)
    scale = 1.0 + float(np.linalg.norm(x)) / alpha
    identity = np.eye(problem.d) / alpha
    for _ in range(MAX_ITERATIONS):
        t = float(row @ y)
        grad = kind.scalar_derivative(t, b) * row + (y - x) / alpha
        if float(np.linalg.norm(grad)) <= tol * scale:
            return y
        curvature = float(kind.second_derivative(t, b))
        hessian = identity + curvature * np.outer(row, row)
        direction = -linalg.solve(hessian, grad, assume_a='pos')

        step = 1.0
        slope = float(grad @ direction)
        while True:
            candidate = y + step * direction
            candidate_value = objective(candidate)
            if candidate_value <= value + 1e-4 * step * slope or step < 1e-12:
                break
            step *= 0.5
        if np.array_equal(candidate, y):
            return y
        y, value = candidate, candidate_value

    raise ProxConvergenceError(f'prox oracle did not converge in {MAX_ITERATIONS} iterations '
                               f'(component {i}, alpha={alpha!r})')
