"""
Prox kernels package initialization
"""

from .kernels import (
    ScalarProxQuery,
    scalar_prox_square,
    scalar_prox_logistic,
    prox_component,
    prox_residual,
)

__all__ = [
    'ScalarProxQuery',
    'scalar_prox_square',
    'scalar_prox_logistic',
    'prox_component',
    'prox_residual',
]
