"""
Base class for all method handlers
"""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from algorithms.trace import RecordOptions, RunTrace
from problem.finite_sum import FiniteSumProblem


class OuterMode(Enum):
    """How SVRP/SVRG pick the next anchor from the inner iterates"""

    RANDOM_INNER = 'random'
    AVERAGE_INNER = 'average'
    LAST_INNER = 'last'

    @classmethod
    def parse(cls, value) -> 'OuterMode':
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for mode in cls:
            if key in (mode.value, mode.name.lower()):
                return mode
        raise ValueError(f'Unknown outer mode: {value}')


class BaseMethods(ABC):
    """Base class for a family of methods dispatched by name"""

    @abstractmethod
    def get_methods(self) -> List[Dict[str, Any]]:
        """Get list of available methods with their parameters"""
        pass

    @abstractmethod
    def has_method(self, name: str) -> bool:
        """Check if this class handles a specific method"""
        pass

    @abstractmethod
    def handle_method(self, name: str, problem: FiniteSumProblem,
                      args: Dict[str, Any]) -> RunTrace:
        """Run a method with keyword arguments taken from args"""
        pass

    @staticmethod
    def _options(args: Dict[str, Any]) -> Optional[RecordOptions]:
        return args.get('options')

    @staticmethod
    def _x0(problem: FiniteSumProblem, args: Dict[str, Any]) -> np.ndarray:
        x0 = args.get('x0')
        if x0 is None:
            return np.zeros(problem.d)
        return np.asarray(x0, dtype=np.float64)


def start_point(problem: FiniteSumProblem, x0: np.ndarray) -> np.ndarray:
    """Validated float64 copy of the initial point"""
    x = np.array(x0, dtype=np.float64, copy=True)
    if x.shape != (problem.d,):
        raise ValueError(f'x0 must have shape ({problem.d},), got {x.shape}')
    if not np.all(np.isfinite(x)):
        raise ValueError('x0 must be finite')
    return x


def check_positive(name: str, value) -> None:
    if not value > 0:
        raise ValueError(f'{name} must be positive, got {value}')
