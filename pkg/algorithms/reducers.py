"""
Variance-reduction state: the correction e built from component i
"""

import logging
from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from problem.finite_sum import FiniteSumProblem

logger = logging.getLogger(__name__)

RESYNC_EVERY = 100_000


class ReducerState(ABC):
    """Base class for per-method correction state, confined to a single run"""

    name = 'base'

    @abstractmethod
    def correction(self, problem: FiniteSumProblem, i: int) -> np.ndarray:
        """e built from component i"""
        pass

    @abstractmethod
    def corrections(self, problem: FiniteSumProblem) -> np.ndarray:
        """All n corrections as an n x d matrix"""
        pass

    def mean_correction(self, problem: FiniteSumProblem) -> np.ndarray:
        return self.corrections(problem).mean(axis=0)

    def drift(self, problem: FiniteSumProblem) -> float:
        """Relative error of the stored aggregate against a full recomputation"""
        return 0.0


class NoCorrection(ReducerState):
    """SPPA: e = 0"""

    name = 'sppa'

    def correction(self, problem, i):
        return np.zeros(problem.d)

    def corrections(self, problem):
        return np.zeros((problem.n, problem.d))


class AnchorState(ReducerState):
    """Anchor point with its stored full gradient.

    The scalar slopes phi'(<a_i, anchor>; b_i) are kept from the full-gradient
    pass, so grad f_i(anchor) costs one row scaling per step.
    """

    name = 'anchor'

    def __init__(self, anchor: np.ndarray, gbar: np.ndarray, slopes: np.ndarray):
        self.anchor = anchor
        self.gbar = gbar
        self.slopes = slopes

    @classmethod
    def at(cls, problem: FiniteSumProblem, x: np.ndarray) -> 'AnchorState':
        """Anchor at x (n oracle calls)"""
        return cls(*cls._anchor_terms(problem, x))

    @staticmethod
    def _anchor_terms(problem, x):
        anchor = np.array(x, dtype=np.float64, copy=True)
        slopes = problem.loss_kind.derivative(problem.design @ anchor, problem.labels)
        gbar = problem.design.T @ slopes / problem.n
        return anchor, gbar, slopes

    def anchor_gradient(self, problem: FiniteSumProblem, i: int) -> np.ndarray:
        return self.slopes[i] * problem.design[i]

    def correction(self, problem, i):
        return self.slopes[i] * problem.design[i] - self.gbar

    def corrections(self, problem):
        return self.slopes[:, None] * problem.design - self.gbar

    def drift(self, problem):
        exact = problem.full_gradient(self.anchor)
        scale = max(float(np.linalg.norm(exact)), 1.0)
        return float(np.linalg.norm(self.gbar - exact)) / scale


class SvrpAnchor(AnchorState):
    """SVRP/SVRG outer-stage anchor x~^s and grad F(x~^s)"""

    name = 'svrp'


class LsvrpAnchor(AnchorState):
    """L-SVRP/L-SVRG anchor u^k, refreshed with probability p"""

    name = 'lsvrp'

    def __init__(self, anchor, gbar, slopes, p: float = 1.0):
        super().__init__(anchor, gbar, slopes)
        if not 0.0 < p <= 1.0:
            raise ValueError(f'refresh probability must lie in (0, 1], got {p}')
        self.p = p

    @classmethod
    def at(cls, problem: FiniteSumProblem, x: np.ndarray, p: float = 1.0) -> 'LsvrpAnchor':
        return cls(*cls._anchor_terms(problem, x), p=p)

    def refresh(self, problem: FiniteSumProblem, x: np.ndarray):
        """Move the anchor to x and recompute the full gradient (n oracle calls)"""
        self.anchor, self.gbar, self.slopes = self._anchor_terms(problem, x)


class SapaTable(ReducerState):
    """Gradient table grad f_i(phi_i) with its running column sum"""

    name = 'sapa'

    def __init__(self, phi_grads: np.ndarray, gsum: Optional[np.ndarray] = None):
        self.phi_grads = phi_grads
        self.gsum = phi_grads.sum(axis=0) if gsum is None else gsum
        self.updates = 0

    @classmethod
    def at(cls, problem: FiniteSumProblem, x0: np.ndarray) -> 'SapaTable':
        """phi_i = x0 for every i (n oracle calls)"""
        return cls(problem.component_gradients(x0))

    def correction(self, problem, i):
        return self.phi_grads[i] - self.gsum / problem.n

    def corrections(self, problem):
        return self.phi_grads - self.gsum / problem.n

    def replace(self, i: int, grad: np.ndarray):
        """Store grad as the new slot i; O(d)"""
        self.gsum += grad - self.phi_grads[i]
        self.phi_grads[i] = grad
        self.updates += 1
        if self.updates % RESYNC_EVERY == 0:
            self.resync()

    def resync(self):
        self.gsum = self.phi_grads.sum(axis=0)

    def drift(self, problem):
        exact = self.phi_grads.sum(axis=0)
        scale = max(float(np.linalg.norm(exact)), float(np.abs(self.phi_grads).sum()), 1e-300)
        return float(np.linalg.norm(self.gsum - exact)) / scale
