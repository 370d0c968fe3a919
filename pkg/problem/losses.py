"""
Scalar losses phi(t; b) of the linear-composite components f_i(x) = phi(<a_i, x>; b_i)
"""

import math
from enum import Enum
from typing import Union

import numpy as np
from scipy.special import expit

ArrayOrFloat = Union[float, np.ndarray]


def stable_sigmoid(z: float) -> float:
    """1 / (1 + exp(-z)) without overflow for large |z|"""
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


class LossKind(Enum):
    """Component loss tag with its scalar value, derivative and curvature bound"""

    SQUARED_RESIDUAL = 'squared'
    LOGISTIC = 'logistic'

    @classmethod
    def parse(cls, name: str) -> 'LossKind':
        """Accept the CLI spellings ('ols', 'squared', 'logistic')"""
        key = str(name).strip().lower()
        if key in ('ols', 'squared', 'squared_residual', 'least_squares'):
            return cls.SQUARED_RESIDUAL
        if key in ('logistic', 'logreg'):
            return cls.LOGISTIC
        raise ValueError(f'Unknown loss kind: {name}')

    @property
    def curvature_bound(self) -> float:
        """Lipschitz constant of phi' in t"""
        return 1.0 if self is LossKind.SQUARED_RESIDUAL else 0.25

    def value(self, t: ArrayOrFloat, b: ArrayOrFloat) -> ArrayOrFloat:
        if self is LossKind.SQUARED_RESIDUAL:
            return 0.5 * (np.subtract(t, b)) ** 2
        return np.logaddexp(0.0, -np.multiply(b, t))

    def derivative(self, t: ArrayOrFloat, b: ArrayOrFloat) -> ArrayOrFloat:
        if self is LossKind.SQUARED_RESIDUAL:
            return np.subtract(t, b)
        return -np.multiply(b, expit(-np.multiply(b, t)))

    def second_derivative(self, t: ArrayOrFloat, b: ArrayOrFloat) -> ArrayOrFloat:
        if self is LossKind.SQUARED_RESIDUAL:
            return np.ones_like(np.asarray(t, dtype=np.float64))
        s = expit(np.multiply(b, t))
        return s * (1.0 - s)

    def scalar_derivative(self, t: float, b: float) -> float:
        """math-only phi'(t; b), used inside per-step kernels"""
        if self is LossKind.SQUARED_RESIDUAL:
            return t - b
        return -b * stable_sigmoid(-b * t)

    def scalar_value(self, t: float, b: float) -> float:
        if self is LossKind.SQUARED_RESIDUAL:
            return 0.5 * (t - b) ** 2
        z = -b * t
        # log(1 + e^z)
        if z > 0.0:
            return z + math.log1p(math.exp(-z))
        return math.log1p(math.exp(z))
