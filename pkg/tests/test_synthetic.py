"""Conditioned synthetic instances"""

import numpy as np
import pytest
from scipy import linalg

from diagnostics.reference import reference_optimum
from problem.losses import LossKind
from synthetic.generator import GeneratorConfig, generate_conditioned_matrix, generate_instance


class TestConditionedMatrix:

    @pytest.mark.parametrize('n,d', [(40, 10), (10, 40)])
    def test_rank_deficient_spectrum(self, n, d):
        s = linalg.svdvals(generate_conditioned_matrix(n, d, 5.0, seed=1))
        nonzero = s[:-1]
        assert nonzero.max() == pytest.approx(5.0)
        assert nonzero.min() == pytest.approx(1.0)
        assert s[-1] < 1e-10
        assert np.linalg.matrix_rank(generate_conditioned_matrix(n, d, 5.0, seed=1)) == min(n, d) - 1

    def test_full_rank_spectrum(self):
        s = linalg.svdvals(generate_conditioned_matrix(40, 10, 5.0, seed=1, full_rank=True))
        assert s.max() == pytest.approx(5.0)
        assert s.min() == pytest.approx(1.0)

    def test_seeded(self):
        first = generate_conditioned_matrix(20, 6, 3.0, seed=4)
        np.testing.assert_array_equal(first, generate_conditioned_matrix(20, 6, 3.0, seed=4))
        assert not np.array_equal(first, generate_conditioned_matrix(20, 6, 3.0, seed=5))


class TestInstances:

    def test_ols_metadata(self):
        problem = generate_instance(GeneratorConfig(n=30, d=8, cond=4.0, seed=2))
        meta = problem.metadata
        assert meta['kappa'] == 4.0
        assert meta['kappa_sq'] == 16.0
        assert meta['rank'] == 7
        assert meta['sigma_min_nonzero'] == pytest.approx(1.0)
        assert meta['mu'] == pytest.approx(1.0 / 30)
        assert meta['generator']['loss_kind'] == 'squared'

    def test_ols_is_interpolating(self):
        problem = generate_instance(GeneratorConfig(n=30, d=8, cond=4.0, seed=2))
        assert reference_optimum(problem).fstar < 1e-20

    def test_logistic_labels(self):
        config = GeneratorConfig(n=100, d=4, cond=2.0, loss_kind='logistic', label_noise=0.0)
        problem = generate_instance(config)
        assert problem.loss_kind is LossKind.LOGISTIC
        assert set(np.unique(problem.labels)) <= {-1.0, 1.0}
        assert problem.metadata['flipped'] == 0

    def test_label_noise_flips_labels(self):
        noisy = generate_instance(GeneratorConfig(n=400, d=4, cond=2.0, loss_kind='logistic',
                                                  label_noise=0.3, seed=8))
        assert 60 < noisy.metadata['flipped'] < 180

    @pytest.mark.parametrize('kwargs', [
        dict(n=1, d=5, cond=2.0),
        dict(n=10, d=5, cond=1.0),
        dict(n=10, d=5, cond=2.0, label_noise=1.0),
        dict(n=10, d=5, cond=2.0, loss_kind='hinge'),
    ])
    def test_rejects_config(self, kwargs):
        with pytest.raises(ValueError):
            GeneratorConfig(**kwargs)
