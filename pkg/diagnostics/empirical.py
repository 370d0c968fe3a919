"""
Rates and iteration counts measured on traces
"""

import logging
from typing import Optional, Sequence

import numpy as np

from algorithms.trace import RunTrace

logger = logging.getLogger(__name__)

MIN_POINTS = 10


def empirical_rate(gaps: Sequence[float], burn_in: Optional[int] = None) -> float:
    """exp of the least-squares slope of log(gap) against the index, after burn_in points

    burn_in defaults to 10% of the series.
    """
    gaps = np.asarray(gaps, dtype=np.float64)
    if burn_in is None:
        burn_in = gaps.size // 10
    if burn_in < 0:
        raise ValueError(f'burn_in must be non-negative, got {burn_in}')
    if gaps.size < burn_in + MIN_POINTS:
        raise ValueError(f'need at least {burn_in + MIN_POINTS} gaps, got {gaps.size}')
    tail = gaps[burn_in:]
    if not np.all(tail > 0.0) or not np.all(np.isfinite(tail)):
        raise ValueError('rate undefined: gaps after burn_in must be positive and finite')

    index = np.arange(burn_in, gaps.size, dtype=np.float64)
    slope, _ = np.polyfit(index, np.log(tail), 1)
    return float(np.exp(slope))


def iterations_to_accuracy(trace: RunTrace, eps: float, by: str = 'oracle_calls') -> Optional[int]:
    """First recorded count with fgap <= eps; None when the run never got there (cap)"""
    if by not in ('oracle_calls', 'counter'):
        raise ValueError(f"by must be 'oracle_calls' or 'counter', got {by}")
    for record in trace.records:
        if record.fgap <= eps:
            return record.oracle_calls if by == 'oracle_calls' else record.counter
    return None
