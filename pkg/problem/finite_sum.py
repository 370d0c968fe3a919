"""
Finite-sum problem F(x) = (1/n) sum_i phi(<a_i, x>; b_i) with dense row storage
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from errors import NonFiniteInputError
from problem.losses import LossKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FiniteSumProblem:
    """Immutable dense finite-sum problem with component value/gradient oracles.

    Components are indexed 0..n-1. Arrays are copied to float64 at
    construction and flagged read-only, so one instance can be shared by
    any number of concurrent runs.
    """

    design: np.ndarray
    labels: np.ndarray
    loss_kind: LossKind
    metadata: Dict[str, Any] = field(default_factory=dict)
    row_norms_sq: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        design = np.array(self.design, dtype=np.float64, order='C', copy=True)
        labels = np.array(self.labels, dtype=np.float64, copy=True).reshape(-1)
        loss_kind = self.loss_kind
        if not isinstance(loss_kind, LossKind):
            loss_kind = LossKind.parse(loss_kind)

        if design.ndim != 2:
            raise ValueError(f'design must be a 2-D matrix, got shape {design.shape}')
        n, d = design.shape
        if n < 1 or d < 1:
            raise ValueError(f'design must have n >= 1 and d >= 1, got {design.shape}')
        if labels.shape[0] != n:
            raise ValueError(f'labels length {labels.shape[0]} does not match n = {n}')
        if not np.all(np.isfinite(design)) or not np.all(np.isfinite(labels)):
            raise NonFiniteInputError('design and labels must be finite')
        if loss_kind is LossKind.LOGISTIC and not np.all(np.isin(labels, (-1.0, 1.0))):
            raise ValueError('logistic labels must all be -1 or +1')

        row_norms_sq = np.einsum('ij,ij->i', design, design)
        for array in (design, labels, row_norms_sq):
            array.setflags(write=False)

        object.__setattr__(self, 'design', design)
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'loss_kind', loss_kind)
        object.__setattr__(self, 'row_norms_sq', row_norms_sq)
        object.__setattr__(self, 'metadata', dict(self.metadata))

    @property
    def n(self) -> int:
        return self.design.shape[0]

    @property
    def d(self) -> int:
        return self.design.shape[1]

    def _check_index(self, i: int):
        if not 0 <= int(i) < self.n:
            raise IndexError(f'component index {i} out of range [0, {self.n})')

    def _check_point(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.d,):
            raise ValueError(f'point must have shape ({self.d},), got {x.shape}')
        if not np.all(np.isfinite(x)):
            raise NonFiniteInputError('point contains non-finite entries')
        return x

    def component_value(self, i: int, x: np.ndarray, validate: bool = True) -> float:
        """phi(<a_i, x>; b_i)"""
        if validate:
            self._check_index(i)
            x = self._check_point(x)
        t = float(self.design[i] @ x)
        return self.loss_kind.scalar_value(t, float(self.labels[i]))

    def component_gradient(self, i: int, x: np.ndarray, validate: bool = True) -> np.ndarray:
        """phi'(<a_i, x>; b_i) * a_i

        Inner loops pass validate=False; the index and point then come from
        the method itself.
        """
        if validate:
            self._check_index(i)
            x = self._check_point(x)
        row = self.design[i]
        t = float(row @ x)
        return self.loss_kind.scalar_derivative(t, float(self.labels[i])) * row

    def component_gradients(self, x: np.ndarray) -> np.ndarray:
        """All n component gradients at x, stacked as an n x d matrix"""
        x = self._check_point(x)
        scale = self.loss_kind.derivative(self.design @ x, self.labels)
        return scale[:, None] * self.design

    def full_value(self, x: np.ndarray) -> float:
        x = self._check_point(x)
        return float(np.mean(self.loss_kind.value(self.design @ x, self.labels)))

    def full_gradient(self, x: np.ndarray) -> np.ndarray:
        x = self._check_point(x)
        scale = self.loss_kind.derivative(self.design @ x, self.labels)
        return self.design.T @ scale / self.n

    def smoothness_constant(self) -> float:
        """L = curvature bound of phi times max_i ||a_i||^2"""
        return self.loss_kind.curvature_bound * float(np.max(self.row_norms_sq))

    def describe(self, extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Summary written into meta.json and experiment manifests"""
        info = {
            'loss_kind': self.loss_kind.value,
            'n': self.n,
            'd': self.d,
            'smoothness_constant': self.smoothness_constant(),
        }
        info.update(self.metadata)
        if extra:
            info.update(extra)
        return info
