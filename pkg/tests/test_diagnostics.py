"""Reference optimum, assumption certificates and empirical rates"""

import numpy as np
import pytest

from algorithms.rates import abc_constants, corollary_alpha, default_M
from algorithms.reducers import LsvrpAnchor, NoCorrection, SapaTable, SvrpAnchor
from algorithms.trace import RunStatus, RunTrace, TraceRecord
from diagnostics.assumptions import (check_assumptions, correction_mean, descent_margin,
                                     sapa_sigma_closed_form)
from diagnostics.empirical import empirical_rate, iterations_to_accuracy
from diagnostics.reference import (ReferenceMethod, distance_fn, distance_to_argmin,
                                   project_to_argmin, quadratic_growth_slack, reference_optimum)
from errors import UnsupportedProblemError


def make_state(method, problem, rng):
    if method == 'sppa':
        return NoCorrection()
    if method == 'svrp':
        return SvrpAnchor.at(problem, 3.0 * rng.standard_normal(problem.d))
    if method == 'lsvrp':
        return LsvrpAnchor.at(problem, 3.0 * rng.standard_normal(problem.d), p=0.2)
    points = 3.0 * rng.standard_normal((problem.n, problem.d))
    return SapaTable(np.array([problem.component_gradient(i, points[i]) for i in range(problem.n)]))


class TestReference:

    def test_ols_minimizer(self, rank_deficient_ols):
        solution = reference_optimum(rank_deficient_ols)
        assert solution.method is ReferenceMethod.CLOSED_FORM_OLS
        assert solution.grad_norm < 1e-9
        assert reference_optimum(rank_deficient_ols) is solution

    def test_logistic_minimizer(self, logistic_problem):
        solution = reference_optimum(logistic_problem)
        assert solution.method is ReferenceMethod.FULL_BATCH_SOLVE
        initial = np.linalg.norm(logistic_problem.full_gradient(np.zeros(logistic_problem.d)))
        assert solution.grad_norm <= 1e-10 * (1.0 + initial)
        assert solution.fstar < logistic_problem.full_value(np.zeros(logistic_problem.d))

    def test_projection(self, rank_deficient_ols, rng):
        x = rng.standard_normal(rank_deficient_ols.d)
        y = project_to_argmin(rank_deficient_ols, x)
        np.testing.assert_allclose(rank_deficient_ols.full_gradient(y), 0.0, atol=1e-9)
        np.testing.assert_allclose(project_to_argmin(rank_deficient_ols, y), y, atol=1e-12)
        assert distance_to_argmin(rank_deficient_ols, x) == pytest.approx(np.linalg.norm(x - y))
        assert distance_to_argmin(rank_deficient_ols, y) < 1e-12

    def test_null_space_moves_keep_distance(self, rank_deficient_ols, rng):
        _, _, Vt = np.linalg.svd(rank_deficient_ols.design)
        null = Vt[-1]
        x = rng.standard_normal(rank_deficient_ols.d)
        assert distance_to_argmin(rank_deficient_ols, x + 5.0 * null) == pytest.approx(
            distance_to_argmin(rank_deficient_ols, x), rel=1e-9)

    def test_quadratic_growth(self, rank_deficient_ols, rng):
        mu = rank_deficient_ols.metadata['mu']
        for _ in range(20):
            x = 5.0 * rng.standard_normal(rank_deficient_ols.d)
            assert quadratic_growth_slack(rank_deficient_ols, x, mu) >= -1e-10

    def test_logistic_has_no_distance(self, logistic_problem):
        assert distance_fn(logistic_problem) is None
        with pytest.raises(UnsupportedProblemError):
            distance_to_argmin(logistic_problem, np.zeros(logistic_problem.d))


class TestAssumptions:

    @pytest.mark.parametrize('method', ['sppa', 'svrp', 'lsvrp', 'sapa'])
    def test_certificates_hold(self, method, rank_deficient_ols, rng):
        problem = rank_deficient_ols
        x_star = reference_optimum(problem).x_ref
        for _ in range(5):
            state = make_state(method, problem, rng)
            x = 3.0 * rng.standard_normal(problem.d)
            report = check_assumptions(problem, method, state, x, x_star)
            scale = 1.0 + report.expected_v_sq + report.sigma_sq
            assert report.unbiased_residual < 1e-12
            assert report.abc_margin >= -1e-9 * scale
            assert report.sigma_recursion_margin >= -1e-9 * scale
            assert report.branches == problem.n * (2 if method == 'lsvrp' else 1)

    @pytest.mark.parametrize('method', ['sppa', 'svrp', 'lsvrp', 'sapa'])
    def test_one_step_descent(self, method, rank_deficient_ols, rng):
        problem = rank_deficient_ols
        x_star = reference_optimum(problem).x_ref
        L = problem.smoothness_constant()
        state = make_state(method, problem, rng)
        p = state.p if isinstance(state, LsvrpAnchor) else None
        A, B, C, rho = abc_constants(method, L, n=problem.n, p=p)
        M = default_M(B, rho) if rho > 0.0 else 1.0
        alpha = corollary_alpha(A, C, M)
        for _ in range(3):
            x = 3.0 * rng.standard_normal(problem.d)
            margin = descent_margin(problem, method, state, x, alpha, M, x_star)
            assert margin >= -1e-9 * (1.0 + np.dot(x - x_star, x - x_star))

    def test_svrp_uses_anchor_gradient_term(self, rank_deficient_ols, rng):
        state = make_state('svrp', rank_deficient_ols, rng)
        x_star = reference_optimum(rank_deficient_ols).x_ref
        report = check_assumptions(rank_deficient_ols, 'svrp', state, x_star, x_star)
        assert report.D_value == pytest.approx(-2.0 * state.gbar @ state.gbar)

    def test_sapa_closed_form(self, rank_deficient_ols, rng):
        problem = rank_deficient_ols
        x_star = reference_optimum(problem).x_ref
        state = make_state('sapa', problem, rng)
        x = rng.standard_normal(problem.d)
        report = check_assumptions(problem, 'sapa', state, x, x_star)
        assert report.expected_next_sigma_sq == pytest.approx(
            sapa_sigma_closed_form(problem, state, x, x_star), rel=1e-10)

    def test_unbiased_on_logistic(self, logistic_problem, rng):
        for method in ('svrp', 'lsvrp', 'sapa'):
            state = make_state(method, logistic_problem, rng)
            np.testing.assert_allclose(correction_mean(logistic_problem, state), 0.0, atol=1e-12)

    def test_requires_least_squares(self, logistic_problem):
        x = np.zeros(logistic_problem.d)
        with pytest.raises(UnsupportedProblemError):
            check_assumptions(logistic_problem, 'sppa', NoCorrection(), x, x)

    def test_state_must_match_method(self, rank_deficient_ols):
        x = np.zeros(rank_deficient_ols.d)
        with pytest.raises(ValueError):
            check_assumptions(rank_deficient_ols, 'sapa', NoCorrection(), x, x)


class TestEmpirical:

    def test_geometric_series(self):
        assert empirical_rate(0.9 ** np.arange(100)) == pytest.approx(0.9, abs=1e-12)

    def test_flat_series(self):
        assert empirical_rate(np.full(50, 3.0)) == pytest.approx(1.0, abs=1e-12)

    def test_noisy_series(self, rng):
        gaps = 0.8 ** np.arange(200) * (1.0 + 0.01 * rng.standard_normal(200))
        assert 0.79 <= empirical_rate(gaps) <= 0.81

    def test_burn_in_skips_transient(self):
        gaps = np.concatenate([[1e6, 1e3], 0.5 ** np.arange(30)])
        assert empirical_rate(gaps, burn_in=2) == pytest.approx(0.5)

    def test_needs_enough_positive_points(self):
        with pytest.raises(ValueError):
            empirical_rate(0.9 ** np.arange(5))
        with pytest.raises(ValueError):
            empirical_rate(np.zeros(20))

    def test_iterations_to_accuracy(self):
        records = [TraceRecord(k, 10.0 ** -k, 5 * k, 0) for k in range(6)]
        trace = RunTrace('sapa', records, RunStatus.COMPLETED)
        assert iterations_to_accuracy(trace, 2e-3) == 15
        assert iterations_to_accuracy(trace, 2e-3, by='counter') == 3
        assert iterations_to_accuracy(trace, 1e-9) is None
        with pytest.raises(ValueError):
            iterations_to_accuracy(trace, 1e-3, by='seconds')
