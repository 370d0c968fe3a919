"""
Closed-form contraction factors and convergence bounds.

Violated preconditions never raise here: the result comes back with
valid=False and a reason naming the condition. Only values outside the
parameter domain (mu <= 0, alpha <= 0, ...) raise ValueError.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RateConstants:
    """Constants of one rate statement and its contraction factor q"""

    mu: float
    alpha: float
    A: float
    B: float
    C: float
    rho: float
    q: float
    valid: bool
    reason: str = ''
    L: Optional[float] = None
    M: Optional[float] = None
    m: Optional[int] = None
    p: Optional[float] = None
    n: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def abc_constants(method: str, L: float, n: Optional[int] = None,
                  p: Optional[float] = None) -> Tuple[float, float, float, float]:
    """(A, B, C, rho) of the ABC condition for one method"""
    if method in ('sppa', 'svrp'):
        return 2.0 * L, 2.0, 0.0, 0.0
    if method == 'lsvrp':
        if p is None:
            raise ValueError('lsvrp constants need p')
        return 2.0 * L, 2.0, p * L, p
    if method == 'sapa':
        if n is None:
            raise ValueError('sapa constants need n')
        return 2.0 * L, 2.0, L / n, 1.0 / n
    raise ValueError(f'No ABC constants for method: {method}')


def default_M(B: float, rho: float) -> float:
    """M = 2B/rho, twice the smallest admissible value"""
    if not rho > 0.0:
        raise ValueError(f'rho must be positive, got {rho}')
    return 2.0 * B / rho


def corollary_alpha(A: float, C: float, M: float, fraction: float = 0.5) -> float:
    """fraction / (A + M C), inside the admissible range when 0 < fraction < 1"""
    if not 0.0 < fraction < 1.0:
        raise ValueError(f'fraction must lie in (0, 1), got {fraction}')
    return fraction / (A + M * C)


def _check_domain(mu: float, alpha: float, L: Optional[float] = None):
    if not mu > 0.0:
        raise ValueError(f'mu must be positive, got {mu}')
    if not alpha > 0.0:
        raise ValueError(f'alpha must be positive, got {alpha}')
    if L is not None and not mu <= L:
        raise ValueError(f'need mu <= L, got mu={mu}, L={L}')


def _abc_rate(mu: float, alpha: float, A: float, B: float, C: float, rho: float, M: float,
              min_M_exceeded: Optional[bool] = None, **extra) -> RateConstants:
    """q = max{1 - alpha mu (1 - alpha (A + M C)), 1 + B/M - rho}"""
    _check_domain(mu, alpha, extra.get('L'))
    if min(A, B, C) < 0.0:
        raise ValueError(f'A, B and C must be non-negative, got {A}, {B}, {C}')
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f'rho must lie in [0, 1], got {rho}')
    if not M > 0.0:
        raise ValueError(f'M must be positive, got {M}')

    reasons = []
    if not rho > 0.0:
        reasons.append('rho must be positive')
    elif min_M_exceeded is False or (min_M_exceeded is None and not M > B / rho):
        reasons.append(f'need M > B/rho = {B / rho:g}, got M = {M:g}')
    if not alpha * (A + M * C) < 1.0:
        reasons.append(f'need alpha < 1/(A + M C) = {1.0 / (A + M * C):g}, got alpha = {alpha:g}')

    q = max(1.0 - alpha * mu * (1.0 - alpha * (A + M * C)), 1.0 + B / M - rho)
    if not reasons and not 0.0 < q < 1.0:
        reasons.append(f'q = {q:g} outside (0, 1)')
    return RateConstants(mu=mu, alpha=alpha, A=A, B=B, C=C, rho=rho, q=q,
                         valid=not reasons, reason='; '.join(reasons), M=M, **extra)


def generic_rate_q(mu: float, alpha: float, A: float, B: float, C: float, rho: float,
                   M: float) -> RateConstants:
    return _abc_rate(mu, alpha, A, B, C, rho, M)


def lsvrp_rate_q(mu: float, L: float, alpha: float, p: float, M: float) -> RateConstants:
    """L-SVRP: A = 2L, B = 2, C = pL, rho = p; needs M > 2/p"""
    if not 0.0 < p <= 1.0:
        raise ValueError(f'p must lie in (0, 1], got {p}')
    A, B, C, rho = abc_constants('lsvrp', L, p=p)
    return _abc_rate(mu, alpha, A, B, C, rho, M, min_M_exceeded=M * p > 2.0, L=L, p=p)


def sapa_rate_q(mu: float, L: float, alpha: float, n: int, M: float) -> RateConstants:
    """SAPA: A = 2L, B = 2, C = L/n, rho = 1/n; needs M > 2n"""
    if n < 1:
        raise ValueError(f'n must be >= 1, got {n}')
    A, B, C, rho = abc_constants('sapa', L, n=n)
    return _abc_rate(mu, alpha, A, B, C, rho, M, min_M_exceeded=M > 2 * n, L=L, n=n)


def svrp_rate_q(mu: float, L: float, alpha: float, m: int) -> RateConstants:
    """q = 1/(mu alpha (1 - 2 L alpha) m) + 2 alpha (L - mu) / (1 - 2 L alpha)

    Valid iff alpha < 1/(2(2L - mu)) and m > 1/(mu alpha (1 - 2 alpha (2L - mu))).
    """
    _check_domain(mu, alpha, L)
    if m < 1:
        raise ValueError(f'm must be >= 1, got {m}')

    reasons = []
    alpha_max = 1.0 / (2.0 * (2.0 * L - mu))
    if not alpha < alpha_max:
        reasons.append(f'need alpha < 1/(2(2L - mu)) = {alpha_max:g}, got alpha = {alpha:g}')
        threshold = math.inf
    else:
        threshold = 1.0 / (mu * alpha * (1.0 - 2.0 * alpha * (2.0 * L - mu)))
        if not m > threshold:
            reasons.append(f'need m > {threshold:g}, got m = {m}')

    shrink = 1.0 - 2.0 * L * alpha
    if shrink > 0.0:
        q = 1.0 / (mu * alpha * shrink * m) + 2.0 * alpha * (L - mu) / shrink
    else:
        q = math.inf
    if not reasons and not 0.0 < q < 1.0:
        reasons.append(f'q = {q:g} outside (0, 1)')

    A, B, C, rho = abc_constants('svrp', L)
    return RateConstants(mu=mu, alpha=alpha, A=A, B=B, C=C, rho=rho, q=q,
                         valid=not reasons, reason='; '.join(reasons), L=L, m=m)


def svrp_min_inner(mu: float, L: float, alpha: float) -> float:
    """Threshold on m; inf when alpha is out of range"""
    _check_domain(mu, alpha, L)
    slack = 1.0 - 2.0 * alpha * (2.0 * L - mu)
    if slack <= 0.0:
        return math.inf
    return 1.0 / (mu * alpha * slack)


def ergodic_bound(rate: RateConstants, dist0_sq: float, sigma0_sq: float, k: int) -> float:
    """Bound on F(x_bar^k) - F_* for the uniform average of k iterates, convex case.

    Needs M >= B/rho and alpha < 1/(A + M C); returns inf otherwise.
    """
    if k < 1:
        raise ValueError(f'k must be >= 1, got {k}')
    if rate.M is None:
        raise ValueError('ergodic bound needs M')
    A, B, C, rho, M, alpha = rate.A, rate.B, rate.C, rate.rho, rate.M, rate.alpha
    if rho > 0.0 and M < B / rho:
        logger.warning('ergodic bound: M = %g below B/rho = %g', M, B / rho)
        return math.inf
    slack = 1.0 - alpha * (A + M * C)
    if slack <= 0.0:
        logger.warning('ergodic bound: alpha = %g too large', alpha)
        return math.inf
    return (dist0_sq + alpha ** 2 * M * sigma0_sq) / (2.0 * alpha * k * slack)


def sppa_ergodic_bound(dist0_sq: float, sigma_sq: float, alphas: Sequence[float],
                       L: Optional[float] = None) -> np.ndarray:
    """dist^2 / sum alpha_t + 2 sigma^2 sum alpha_t^2 / sum alpha_t for every prefix"""
    alphas = np.asarray(alphas, dtype=np.float64)
    if alphas.ndim != 1 or alphas.size == 0 or np.any(alphas <= 0.0):
        raise ValueError('alphas must be a non-empty sequence of positive stepsizes')
    if L is not None and np.any(alphas > 1.0 / (4.0 * L)):
        raise ValueError(f'stepsizes must not exceed 1/(4L) = {1.0 / (4.0 * L):g}')
    total = np.cumsum(alphas)
    total_sq = np.cumsum(alphas ** 2)
    return dist0_sq / total + 2.0 * sigma_sq * total_sq / total


def linear_envelope(rate: RateConstants, v0: float, ks: Sequence[int]) -> np.ndarray:
    """v0 q^k"""
    if not rate.valid:
        raise ValueError(f'envelope of an invalid rate: {rate.reason}')
    return v0 * rate.q ** np.asarray(ks, dtype=np.float64)


def function_value_envelope(rate: RateConstants, v0: float, ks: Sequence[int]) -> np.ndarray:
    """(L/2) q^k v0, the bound on F(x^k) - F_*"""
    if rate.L is None:
        raise ValueError('function value envelope needs L')
    return 0.5 * rate.L * linear_envelope(rate, v0, ks)
