"""
Synthetic instances with a prescribed singular spectrum.

The design is drawn Gaussian, its smallest singular value is zeroed and the
remaining ones are mapped affinely onto [1, cond], so the problem is
rank-deficient with a known smallest nonzero singular value of 1.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Tuple, Union

import numpy as np
from scipy import linalg

from problem.finite_sum import FiniteSumProblem
from problem.losses import LossKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of one synthetic instance.

    Args:
        n: number of components (rows)
        d: dimension (columns)
        cond: ratio of the largest to the smallest nonzero singular value
        loss_kind: squared residual (OLS) or logistic
        label_noise: flip probability of the logistic labels
        seed: seed of the instance draw
        full_rank: keep the smallest singular value and map all of them onto [1, cond]
    """

    n: int
    d: int
    cond: float
    loss_kind: Union[LossKind, str] = LossKind.SQUARED_RESIDUAL
    label_noise: float = 0.1
    seed: int = 0
    full_rank: bool = False

    def __post_init__(self):
        if not isinstance(self.loss_kind, LossKind):
            object.__setattr__(self, 'loss_kind', LossKind.parse(self.loss_kind))
        if self.n < 2 or self.d < 2:
            raise ValueError(f'need n >= 2 and d >= 2, got n={self.n}, d={self.d}')
        if not self.cond > 1.0:
            raise ValueError(f'cond must exceed 1, got {self.cond}')
        if not 0.0 <= self.label_noise < 1.0:
            raise ValueError(f'label_noise must lie in [0, 1), got {self.label_noise}')

    def to_dict(self) -> Dict[str, Any]:
        info = asdict(self)
        info['loss_kind'] = self.loss_kind.value
        return info


def _rescale(values: np.ndarray, cond: float) -> np.ndarray:
    """Affine map of descending values so the first becomes cond and the last 1"""
    if values.size == 1:
        logger.warning('only one nonzero singular value left; set to 1, cond not attainable')
        return np.ones(1)
    spread = values[0] - values[-1]
    if spread == 0.0:
        logger.warning('repeated singular values in the draw; spectrum set to {cond, 1, ..., 1}')
        out = np.ones_like(values)
        out[0] = cond
        return out
    return 1.0 + (values - values[-1]) * (cond - 1.0) / spread


def conditioned_spectrum(n: int, d: int, cond: float, rng: np.random.Generator,
                         full_rank: bool = False) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """U, rescaled singular values and Vt of a Gaussian n x d draw"""
    if min(n, d) < 2:
        raise ValueError(f'need min(n, d) >= 2, got n={n}, d={d}')
    if not cond > 1.0:
        raise ValueError(f'cond must exceed 1, got {cond}')

    draw = rng.standard_normal((n, d))
    U, s, Vt = linalg.svd(draw, full_matrices=False)
    if full_rank:
        return U, _rescale(s, cond), Vt

    spectrum = np.zeros_like(s)
    spectrum[:-1] = _rescale(s[:-1], cond)
    return U, spectrum, Vt


def generate_conditioned_matrix(n: int, d: int, cond: float, seed: int,
                                full_rank: bool = False) -> np.ndarray:
    """Rank min(n, d) - 1 matrix whose nonzero singular values span [1, cond]"""
    rng = np.random.Generator(np.random.Philox(seed))
    U, spectrum, Vt = conditioned_spectrum(n, d, cond, rng, full_rank)
    return (U * spectrum) @ Vt


def _draw(config: GeneratorConfig):
    rng = np.random.Generator(np.random.Philox(config.seed))
    U, spectrum, Vt = conditioned_spectrum(config.n, config.d, config.cond, rng,
                                           config.full_rank)
    design = (U * spectrum) @ Vt
    x_true = rng.standard_normal(config.d)
    nonzero = spectrum[spectrum > 0.0]
    meta = {
        'generator': config.to_dict(),
        'kappa': config.cond,
        'kappa_sq': config.cond ** 2,
        'sigma_max': float(nonzero.max()),
        'sigma_min_nonzero': float(nonzero.min()),
        'rank': int(nonzero.size),
        'x_true_seed': config.seed,
    }
    return rng, design, x_true, meta


def generate_ols_instance(config: GeneratorConfig) -> FiniteSumProblem:
    """b = A x_true, so b lies in range(A) and F_* = 0"""
    _, design, x_true, meta = _draw(config)
    labels = design @ x_true
    # quadratic growth constant sigma_min_nonzero^2 / n
    meta['mu'] = meta['sigma_min_nonzero'] ** 2 / config.n
    logger.debug('OLS instance n=%d d=%d cond=%g seed=%d', config.n, config.d, config.cond,
                 config.seed)
    return FiniteSumProblem(design, labels, LossKind.SQUARED_RESIDUAL, metadata=meta)


def generate_logistic_instance(config: GeneratorConfig) -> FiniteSumProblem:
    """Planted labels sign(<a_i, x_true>) with each one flipped with probability label_noise"""
    rng, design, x_true, meta = _draw(config)
    labels = np.where(design @ x_true >= 0.0, 1.0, -1.0)
    flips = rng.random(config.n) < config.label_noise
    labels[flips] *= -1.0
    meta['flipped'] = int(flips.sum())
    logger.debug('logistic instance n=%d d=%d cond=%g seed=%d flipped=%d', config.n, config.d,
                 config.cond, config.seed, meta['flipped'])
    return FiniteSumProblem(design, labels, LossKind.LOGISTIC, metadata=meta)


def generate_instance(config: GeneratorConfig) -> FiniteSumProblem:
    if config.loss_kind is LossKind.SQUARED_RESIDUAL:
        return generate_ols_instance(config)
    return generate_logistic_instance(config)
