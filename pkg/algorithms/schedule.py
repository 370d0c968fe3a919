"""
Stepsize schedules
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StepSchedule:
    """Constant(alpha) or PolynomialDecay(c, exponent): alpha_k = c / (k + 1)^exponent"""

    scale: float
    exponent: float = 0.0

    def __post_init__(self):
        if not self.scale > 0.0:
            raise ValueError(f'stepsize must be positive, got {self.scale}')
        if self.exponent != 0.0 and not 0.5 < self.exponent <= 1.0:
            raise ValueError(f'decay exponent must lie in (0.5, 1], got {self.exponent}')

    @classmethod
    def constant(cls, alpha: float) -> 'StepSchedule':
        return cls(float(alpha), 0.0)

    @classmethod
    def polynomial(cls, c: float, exponent: float) -> 'StepSchedule':
        return cls(float(c), float(exponent))

    @property
    def is_constant(self) -> bool:
        return self.exponent == 0.0

    def __call__(self, k: int) -> float:
        if self.exponent == 0.0:
            return self.scale
        return self.scale / (k + 1) ** self.exponent

    def prefix(self, K: int) -> np.ndarray:
        """alpha_0, ..., alpha_{K-1}"""
        k = np.arange(K, dtype=np.float64)
        return self.scale / (k + 1.0) ** self.exponent

    def describe(self) -> dict:
        if self.is_constant:
            return {'schedule': 'constant', 'alpha': self.scale}
        return {'schedule': 'polynomial', 'c': self.scale, 'exponent': self.exponent}
