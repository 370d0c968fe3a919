"""
Single steps shared by every method: implicit (prox) and explicit (gradient)
"""

from typing import Optional

import numpy as np

from problem.finite_sum import FiniteSumProblem
from prox.kernels import prox_component


def unified_step(x: np.ndarray, problem: FiniteSumProblem, alpha: float, i: int,
                 e: np.ndarray) -> np.ndarray:
    """prox_{alpha f_i}(x + alpha e)

    Equivalently y = x - alpha (grad f_i(y) - e), an implicit stochastic
    gradient step with correction e.
    """
    return prox_component(problem, i, alpha, x + alpha * e)


def explicit_step(x: np.ndarray, problem: FiniteSumProblem, alpha: float, i: int,
                  e: np.ndarray) -> np.ndarray:
    """x - alpha (grad f_i(x) - e)"""
    return x - alpha * (problem.component_gradient(i, x, validate=False) - e)


def implicit_gradient(x: np.ndarray, x_next: np.ndarray, alpha: float,
                      e: Optional[np.ndarray] = None) -> np.ndarray:
    """(x - x_next) / alpha + e; equals grad f_i(x_next) when x_next came from a unified step"""
    w = (x - x_next) / alpha
    if e is None:
        return w
    return w + e
