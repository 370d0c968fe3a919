"""Rank-one prox kernels"""

import numpy as np
import pytest
from scipy.special import expit

from diagnostics.oracles import prox_oracle
from problem.losses import LossKind
from prox.kernels import (ScalarProxQuery, prox_component, prox_residual, scalar_prox_logistic,
                          scalar_prox_square)


class TestScalarKernels:

    def test_square_closed_form(self):
        assert scalar_prox_square(2.0, 1.0, 4.0) == pytest.approx(3.0)
        assert scalar_prox_square(0.0, 3.0, 1.0) == pytest.approx(0.75)

    @pytest.mark.parametrize('s,lam,b,expected', [
        (0.0, 1.0, 0.0, 0.0),
        (2.0, 1.0, 0.0, 1.0),
        (1.3, 0.7, -2.0, -0.1 / 1.7),
    ])
    def test_square_reference_values(self, s, lam, b, expected):
        assert scalar_prox_square(s, lam, b) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize('lam', [1e-2, 1.0, 30.0])
    def test_logistic_antisymmetry(self, lam):
        for s in (-7.5, -0.3, 0.0, 1.1, 12.0):
            for b in (-1.0, 1.0):
                assert scalar_prox_logistic(-s, lam, -b) == pytest.approx(
                    -scalar_prox_logistic(s, lam, b), abs=1e-11)

    def test_logistic_tiny_lambda_is_near_identity(self):
        for s in (-20.0, -1.0, 0.0, 0.5, 40.0):
            for b in (-1.0, 1.0):
                assert abs(scalar_prox_logistic(s, 1e-12, b) - s) <= 1e-10

    @pytest.mark.parametrize('lam', [1e-3, 1.0, 1e3])
    @pytest.mark.parametrize('b', [-1.0, 1.0])
    def test_logistic_root(self, lam, b):
        for s in np.linspace(-50.0, 50.0, 21):
            t = scalar_prox_logistic(float(s), lam, b)
            sig = expit(-b * t)
            assert abs(t - s - lam * b * sig) <= 1e-9
            assert s - lam <= t <= s + lam

    def test_logistic_rejects_bad_label(self):
        with pytest.raises(ValueError):
            scalar_prox_logistic(0.0, 1.0, 0.5)

    @pytest.mark.parametrize('lam', [0.0, -1.0])
    def test_rejects_non_positive_lambda(self, lam):
        with pytest.raises(ValueError):
            scalar_prox_square(1.0, lam, 0.0)
        with pytest.raises(ValueError):
            ScalarProxQuery(1.0, lam, 1.0)

    def test_query_tolerance_range(self):
        with pytest.raises(ValueError):
            ScalarProxQuery(1.0, 1.0, 1.0, tol=1e-3)

    def test_query_dispatch(self):
        query = ScalarProxQuery(0.3, 2.0, -1.0)
        assert query.solve(LossKind.SQUARED_RESIDUAL) == scalar_prox_square(0.3, 2.0, -1.0)
        assert query.solve(LossKind.LOGISTIC) == scalar_prox_logistic(0.3, 2.0, -1.0)


class TestProxComponent:

    def test_ols_closed_form(self, full_rank_ols, rng):
        alpha = 0.7
        for i in range(5):
            x = rng.standard_normal(full_rank_ols.d)
            a, b = full_rank_ols.design[i], full_rank_ols.labels[i]
            expected = x - alpha * (a @ x - b) / (1.0 + alpha * (a @ a)) * a
            np.testing.assert_allclose(prox_component(full_rank_ols, i, alpha, x), expected,
                                       rtol=1e-12, atol=1e-12)

    @pytest.mark.parametrize('fixture', ['rank_deficient_ols', 'logistic_problem'])
    @pytest.mark.parametrize('alpha', [1e-2, 1.0, 50.0])
    def test_optimality_residual(self, fixture, alpha, request, rng):
        problem = request.getfixturevalue(fixture)
        for i in (0, 7, problem.n - 1):
            x = 3.0 * rng.standard_normal(problem.d)
            y = prox_component(problem, i, alpha, x)
            assert prox_residual(problem, i, alpha, x, y) <= 1e-8 * (1.0 + np.linalg.norm(x) / alpha)

    @pytest.mark.parametrize('fixture', ['full_rank_ols', 'logistic_problem'])
    def test_matches_full_dimensional_oracle(self, fixture, request, rng):
        problem = request.getfixturevalue(fixture)
        for i in range(10):
            alpha = 10.0 ** rng.uniform(-2.0, 1.0)
            x = rng.standard_normal(problem.d)
            np.testing.assert_allclose(prox_component(problem, i, alpha, x),
                                       prox_oracle(problem, i, alpha, x), atol=1e-9)

    @pytest.mark.parametrize('fixture', ['full_rank_ols', 'logistic_problem'])
    def test_firmly_nonexpansive(self, fixture, request, rng):
        problem = request.getfixturevalue(fixture)
        for _ in range(40):
            i = int(rng.integers(problem.n))
            alpha = 10.0 ** rng.uniform(-2.0, 2.0)
            x = 4.0 * rng.standard_normal(problem.d)
            y = 4.0 * rng.standard_normal(problem.d)
            px = prox_component(problem, i, alpha, x)
            py = prox_component(problem, i, alpha, y)
            moved = px - py
            assert moved @ moved <= moved @ (x - y) + 1e-9 * (1.0 + (x - y) @ (x - y))

    def test_goes_through_scalar_query(self, logistic_problem, rng):
        x = rng.standard_normal(logistic_problem.d)
        row = logistic_problem.design[3]
        norm_sq = float(row @ row)
        query = ScalarProxQuery(float(row @ x), 0.8 * norm_sq, float(logistic_problem.labels[3]))
        expected = x + ((query.solve(LossKind.LOGISTIC) - query.s) / norm_sq) * row
        np.testing.assert_array_equal(prox_component(logistic_problem, 3, 0.8, x), expected)

    def test_zero_row_is_identity(self, single_row):
        problem = single_row([0.0, 0.0, 0.0], 1.0, LossKind.LOGISTIC)
        x = np.array([1.0, -2.0, 0.5])
        y = prox_component(problem, 0, 3.0, x)
        np.testing.assert_array_equal(y, x)
        assert y is not x

    def test_moves_only_along_the_row(self, single_row):
        problem = single_row([1.0, 0.0], 5.0)
        y = prox_component(problem, 0, 1.0, np.array([1.0, 2.0]))
        np.testing.assert_allclose(y, [3.0, 2.0])

    def test_rejects_non_positive_alpha(self, full_rank_ols):
        with pytest.raises(ValueError):
            prox_component(full_rank_ols, 0, 0.0, np.zeros(full_rank_ols.d))
