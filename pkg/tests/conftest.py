"""Shared fixtures: small synthetic instances"""

import numpy as np
import pytest

from problem.finite_sum import FiniteSumProblem
from problem.losses import LossKind
from synthetic.generator import GeneratorConfig, generate_instance


@pytest.fixture
def full_rank_ols() -> FiniteSumProblem:
    """Strongly convex least squares, n=40, d=5"""
    return generate_instance(GeneratorConfig(n=40, d=5, cond=2.0, seed=3, full_rank=True))


@pytest.fixture
def rank_deficient_ols() -> FiniteSumProblem:
    """Least squares with a one-dimensional null space, n=30, d=8"""
    return generate_instance(GeneratorConfig(n=30, d=8, cond=4.0, seed=5))


@pytest.fixture
def logistic_problem() -> FiniteSumProblem:
    return generate_instance(GeneratorConfig(n=200, d=3, cond=3.0, loss_kind='logistic',
                                             label_noise=0.2, seed=11))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.Generator(np.random.Philox(1234))


@pytest.fixture
def single_row():
    """Factory for one-component problems"""
    def make(row, label, kind=LossKind.SQUARED_RESIDUAL):
        return FiniteSumProblem(np.asarray(row, dtype=np.float64)[None, :], [label], kind)
    return make


@pytest.fixture(autouse=True)
def clean_bench_env(monkeypatch):
    for name in ('BENCH_OUT_DIR', 'BENCH_WORKERS', 'BENCH_MASTER_SEED', 'BENCH_LOG_LEVEL'):
        monkeypatch.delenv(name, raising=False)
