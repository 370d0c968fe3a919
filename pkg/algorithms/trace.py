"""
Run traces: per-record iterate, objective gap, distance, oracle count and wall time
"""

import hashlib
import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from problem.finite_sum import FiniteSumProblem

logger = logging.getLogger(__name__)

DIVERGENCE_FACTOR = 1e12


class RunStatus(Enum):
    COMPLETED = 'completed'
    CAP_REACHED = 'cap_reached'
    DIVERGED = 'diverged'


@dataclass
class TraceRecord:
    counter: int
    fgap: float
    oracle_calls: int
    wall_ns: int
    x: Optional[np.ndarray] = None
    dist2: Optional[float] = None


@dataclass
class RunTrace:
    """Records of one run plus its terminal status"""

    method: str
    records: List[TraceRecord]
    status: RunStatus
    flags: List[str] = field(default_factory=list)
    params: Dict[str, Any] = field(default_factory=dict)

    def counters(self) -> np.ndarray:
        return np.array([r.counter for r in self.records], dtype=np.int64)

    def fgaps(self) -> np.ndarray:
        return np.array([r.fgap for r in self.records], dtype=np.float64)

    def oracle_calls(self) -> np.ndarray:
        return np.array([r.oracle_calls for r in self.records], dtype=np.int64)

    def dist2s(self) -> np.ndarray:
        return np.array([np.nan if r.dist2 is None else r.dist2 for r in self.records],
                        dtype=np.float64)

    def iterates(self) -> List[np.ndarray]:
        return [r.x for r in self.records if r.x is not None]

    @property
    def final(self) -> TraceRecord:
        return self.records[-1]

    def fingerprint(self) -> str:
        """sha256 over everything except wall time"""
        digest = hashlib.sha256()
        digest.update(self.method.encode())
        digest.update(self.status.value.encode())
        for r in self.records:
            digest.update(np.array([r.counter, r.oracle_calls], dtype=np.int64).tobytes())
            digest.update(np.array([r.fgap, np.nan if r.dist2 is None else r.dist2],
                                   dtype=np.float64).tobytes())
            if r.x is not None:
                digest.update(np.ascontiguousarray(r.x, dtype=np.float64).tobytes())
        return digest.hexdigest()


@dataclass
class RecordOptions:
    """What a run measures and when it stops early.

    Args:
        fstar: optimal value subtracted from F(x)
        distance: callable x -> dist(x, argmin F); squared into dist2
        record_every: record cadence in steps (default: one effective pass, n)
        record_offset: records fall where counter + record_offset is a multiple of
            record_every; methods with an n-call warm-up pass n to align on oracle calls
        keep_iterates: store x with each record
        target_gap: stop with Completed once fgap <= target_gap
        refine_near_target: record every step once fgap <= refine_near_target * target_gap
    """

    fstar: float = 0.0
    distance: Optional[Callable[[np.ndarray], float]] = None
    record_every: Optional[int] = None
    record_offset: int = 0
    keep_iterates: bool = True
    target_gap: Optional[float] = None
    refine_near_target: Optional[float] = None
    divergence_factor: float = DIVERGENCE_FACTOR


class TraceRecorder:
    """Builds a RunTrace and decides when a run has diverged or reached its target"""

    def __init__(self, problem: FiniteSumProblem, method: str,
                 options: Optional[RecordOptions] = None,
                 params: Optional[Dict[str, Any]] = None,
                 record_every: Optional[int] = None):
        self.problem = problem
        self.method = method
        self.options = options or RecordOptions()
        self.params = dict(params or {})
        self.record_every = int(record_every or self.options.record_every or problem.n)
        if self.record_every < 1:
            raise ValueError(f'record_every must be >= 1, got {self.record_every}')
        self.records: List[TraceRecord] = []
        self.flags: List[str] = []
        self._initial_gap = None
        self._refining = False
        self._start = time.perf_counter_ns()

    def due(self, counter: int) -> bool:
        if self._refining:
            return True
        return (counter + self.options.record_offset) % self.record_every == 0

    def record(self, counter: int, x: np.ndarray, oracle_calls: int) -> Optional[RunStatus]:
        """Append a record; return a terminal status if the run must stop"""
        wall_ns = time.perf_counter_ns() - self._start
        keep = np.array(x, dtype=np.float64, copy=True) if self.options.keep_iterates else None

        if not np.all(np.isfinite(x)):
            self.records.append(TraceRecord(counter, float('inf'), oracle_calls, wall_ns, keep))
            logger.debug('%s diverged at counter %d (non-finite iterate)', self.method, counter)
            return RunStatus.DIVERGED

        fgap = self.problem.full_value(x) - self.options.fstar
        dist2 = None
        if self.options.distance is not None:
            dist2 = float(self.options.distance(x)) ** 2
        self.records.append(TraceRecord(counter, fgap, oracle_calls, wall_ns, keep, dist2))
        target = self.options.target_gap
        if target is not None and self.options.refine_near_target is not None \
                and fgap <= self.options.refine_near_target * target:
            self._refining = True

        if self._initial_gap is None:
            self._initial_gap = fgap
            return None
        if self._initial_gap > 0.0 and fgap > self.options.divergence_factor * self._initial_gap:
            logger.debug('%s diverged at counter %d (gap %.3e)', self.method, counter, fgap)
            return RunStatus.DIVERGED
        if self.options.target_gap is not None and fgap <= self.options.target_gap:
            return RunStatus.COMPLETED
        return None

    def start(self, x: np.ndarray, oracle_calls: int) -> Optional[RunStatus]:
        status = self.record(0, x, oracle_calls)
        if status is None and self.options.target_gap is not None \
                and self.records[-1].fgap <= self.options.target_gap:
            return RunStatus.COMPLETED
        return status

    def finish(self, status: Optional[RunStatus], counter: int, x: np.ndarray,
               oracle_calls: int) -> RunTrace:
        """Close the trace, recording the final state if it is not recorded yet"""
        if status is None and self.records and self.records[-1].counter != counter:
            status = self.record(counter, x, oracle_calls)
        if status is None:
            status = RunStatus.CAP_REACHED if self.options.target_gap is not None \
                else RunStatus.COMPLETED
        if status is RunStatus.DIVERGED:
            logger.info('%s run diverged (params=%s)', self.method, self.params)
        return RunTrace(self.method, self.records, status, list(self.flags), self.params)


def weighted_average_iterate(trace: RunTrace, weights: Sequence[float]) -> np.ndarray:
    """Convex combination sum_t w_t x^t / sum_t w_t of the stored iterates"""
    iterates = trace.iterates()
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (len(iterates),):
        raise ValueError(f'{weights.shape[0] if weights.ndim else 1} weights for '
                         f'{len(iterates)} stored iterates')
    if np.any(weights < 0.0) or not np.all(np.isfinite(weights)):
        raise ValueError('weights must be finite and non-negative')
    total = float(weights.sum())
    if total <= 0.0:
        raise ValueError('weights must not all be zero')
    return np.tensordot(weights, np.stack(iterates), axes=1) / total
