"""
Problem package initialization
"""

from .losses import LossKind
from .finite_sum import FiniteSumProblem
from .storage import save_problem, load_problem

__all__ = ['LossKind', 'FiniteSumProblem', 'save_problem', 'load_problem']
