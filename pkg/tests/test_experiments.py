"""Configuration, runners, the bench commands and the CLI"""

import csv
import importlib
import json
from pathlib import Path

import numpy as np
import pytest

import bench
from algorithms import rates
from algorithms.rates import RateConstants
from errors import ConfigurationError
from experiments import (CompareExperiment, ExperimentKind, SweepExperiments, build_config,
                         default_grid, read_config_file, run_checks)
from experiments.base_experiment import BaseExperiment
from experiments.compare import build_jobs
from experiments.config import replay_dir
from experiments.runner import format_value, problem_for, run_jobs, write_csv
from experiments.settings import BenchSettings
from experiments.sweeps import CAP, best_tuned, summarize
from problem.storage import load_problem

verify_module = importlib.import_module('experiments.verify')

TINY = {'n': 20, 'd': 5, 'cond': 3.0, 'seeds': 2}


def read_rows(path):
    with open(path, newline='') as f:
        return list(csv.DictReader(f))


def tiny_config(kind, tmp_path, **overrides):
    values = dict(TINY, out_dir=str(tmp_path))
    values.update(overrides)
    return build_config(kind, overrides=values)


class TestSettings:

    def test_defaults(self):
        settings = BenchSettings()
        assert settings.workers == 1
        assert settings.master_seed == 0
        assert settings.log_level == 'INFO'

    def test_environment(self, monkeypatch, tmp_path):
        monkeypatch.setenv('BENCH_OUT_DIR', str(tmp_path / 'out'))
        monkeypatch.setenv('BENCH_WORKERS', '4')
        monkeypatch.setenv('BENCH_LOG_LEVEL', 'debug')
        settings = BenchSettings()
        assert settings.workers == 4
        assert settings.log_level == 'DEBUG'
        assert not (tmp_path / 'out').exists()
        assert settings.ensure_out_dir().is_dir()

    @pytest.mark.parametrize('name,value', [('BENCH_WORKERS', 'many'), ('BENCH_WORKERS', '0'),
                                            ('BENCH_LOG_LEVEL', 'LOUD')])
    def test_invalid_environment(self, monkeypatch, name, value):
        monkeypatch.setenv(name, value)
        with pytest.raises(ConfigurationError):
            BenchSettings()


class TestConfig:

    def test_precedence(self, monkeypatch, tmp_path):
        monkeypatch.setenv('BENCH_WORKERS', '3')
        monkeypatch.setenv('BENCH_MASTER_SEED', '7')
        config_file = tmp_path / 'run.env'
        config_file.write_text('seeds=4\nS=3\nmaster_seed=11\nalpha_grid=0.1,0.2\n')
        config = build_config(ExperimentKind.COMPARE_PROX, 'compare-ols', config_file,
                              {'seeds': 2, 'n': None}, BenchSettings())
        assert config.seeds == 2
        assert config.S == 3
        assert config.master_seed == 11
        assert config.workers == 3
        assert config.n == 1000 and config.d == 500
        assert config.alpha_grid == [0.1, 0.2]

    def test_default_presets(self):
        assert build_config(ExperimentKind.VERIFY).preset == 'quick'
        assert build_config(ExperimentKind.SWEEP_SVRP_SVRG).inner_count() == 250
        assert build_config(ExperimentKind.COMPARE_PROX).inner_count() == 2000

    def test_iteration_caps(self):
        assert build_config(ExperimentKind.SWEEP_SAPA_SAGA).iteration_cap() == 40_000
        logistic = build_config(ExperimentKind.SWEEP_SAPA_SAGA, 'sapa-saga-logistic')
        assert logistic.iteration_cap() == 25_000_000

    def test_config_file_types(self, tmp_path):
        config_file = tmp_path / 'run.env'
        config_file.write_text('full_rank=yes\ncond=2.5\nalpha=none\nouter=average\n')
        assert read_config_file(config_file) == {'full_rank': True, 'cond': 2.5, 'alpha': None,
                                                 'outer': 'average'}

    @pytest.mark.parametrize('text', ['colour=blue\n', 'n=ten\n', 'full_rank=maybe\n'])
    def test_config_file_errors(self, tmp_path, text):
        config_file = tmp_path / 'run.env'
        config_file.write_text(text)
        with pytest.raises(ConfigurationError):
            read_config_file(config_file)

    def test_missing_config_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            read_config_file(tmp_path / 'absent.env')

    @pytest.mark.parametrize('overrides', [
        {'n': 1}, {'cond': 1.0}, {'seeds': 0}, {'alpha': -0.1}, {'alpha_grid': [0.2, 0.1]},
        {'alpha_grid': []}, {'p': 1.5}, {'outer': 'first'}, {'loss': 'hinge'}, {'workers': 0},
    ])
    def test_rejects_values(self, overrides):
        with pytest.raises(ConfigurationError):
            build_config(ExperimentKind.COMPARE_PROX, overrides=overrides)

    def test_unknown_preset(self):
        with pytest.raises(ConfigurationError):
            build_config(ExperimentKind.COMPARE_PROX, 'huge')


class TestOutputFormat:

    def test_format_value(self):
        assert format_value(0.1) == '0.10000000000000001'
        assert format_value(np.float64(0.5)) == '0.5'
        assert format_value(True) == 'true'
        assert format_value(None) == ''
        assert format_value('cap') == 'cap'

    def test_write_csv(self, tmp_path):
        path = write_csv(tmp_path / 'out.csv', ('a', 'b'), [[1, 2.5], [None, False]])
        assert path.read_text() == 'a,b\n1,2.5\n,false\n'


class TestSweepSummary:

    def test_default_grid(self):
        grid = default_grid(2.0)
        assert len(grid) == 81
        assert grid[0] == pytest.approx(5e-4)
        assert grid[-1] == pytest.approx(5.0)
        assert all(b > a for a, b in zip(grid, grid[1:]))
        assert len(default_grid(1.0, per_decade=5)) == 21
        with pytest.raises(ValueError):
            default_grid(0.0)

    def test_summarize_and_best(self):
        rows = [
            [0.1, 'sapa', 0, 10, True], [0.1, 'sapa', 1, 30, True], [0.1, 'sapa', 2, CAP, False],
            [0.2, 'sapa', 0, 5, True], [0.2, 'sapa', 1, CAP, False], [0.2, 'sapa', 2, CAP, False],
            [0.1, 'saga', 0, CAP, False], [0.1, 'saga', 1, CAP, False], [0.1, 'saga', 2, 7, True],
        ]
        summary = summarize(rows, cap_cost=100)
        assert summary[0] == [0.1, 'sapa', 3, 2, 30.0, 10.0, 100.0]
        assert summary[1] == [0.2, 'sapa', 3, 1, 100.0, 5.0, 100.0]
        assert best_tuned(summary, 'sapa') == {'stepsize': 0.1, 'median_cost': 30.0}
        assert best_tuned(summary, 'saga') is None


class TestCommands:

    def test_compare_single_stage(self, tmp_path):
        config = tiny_config(ExperimentKind.COMPARE_PROX, tmp_path, S=1, m=10, seeds=1)
        outcome = CompareExperiment().handle_command('compare-prox', config)
        assert outcome.passed
        rows = read_rows(tmp_path / 'curves.csv')
        assert [row['method'] for row in rows] == ['sppa', 'svrp', 'sapa']
        assert all(row['stage'] == '1' and float(row['dev_gap']) == 0.0 for row in rows)
        runs = read_rows(tmp_path / 'runs.csv')
        budget = 1 * (10 + 20 + 1)
        assert {row['method']: int(row['oracle_calls']) for row in runs} == {
            'sppa': budget, 'svrp': budget, 'sapa': budget}

    def test_compare_replays_from_manifest(self, tmp_path):
        first = tmp_path / 'first'
        config = tiny_config(ExperimentKind.COMPARE_PROX, first, S=3, m=15, master_seed=5)
        CompareExperiment().handle_command('compare-prox', config)
        manifest = json.loads((first / 'manifest.json').read_text())
        assert manifest['status'] == 'completed'
        assert len(manifest['runs']) == 3 * TINY['seeds']

        replay = tmp_path / 'replay'
        replayed = build_config(ExperimentKind.COMPARE_PROX, config_file=first / 'manifest.json',
                                overrides={'out_dir': str(replay)})
        assert replayed.master_seed == 5 and replayed.S == 3
        CompareExperiment().handle_command('compare-prox', replayed)
        for name in ('curves.csv', 'runs.csv'):
            assert (first / name).read_bytes() == (replay / name).read_bytes()

    def test_compare_records_at_stage_boundaries(self):
        config = build_config(ExperimentKind.COMPARE_PROX,
                              overrides=dict(TINY, S=4, m=40, seeds=1))
        generator = BaseExperiment.generator_config(config)
        L = problem_for(generator).smoothness_constant()
        unit = 40 + 20 + 1
        for result in run_jobs(build_jobs(config, generator, L)):
            calls = result.trace.oracle_calls()
            for s in range(1, 5):
                first = calls[np.argmax(calls >= s * unit)]
                assert first == s * unit, (result.job.method, s, calls.tolist())

    def test_compare_exports_instance(self, tmp_path):
        config = tiny_config(ExperimentKind.COMPARE_PROX, tmp_path, S=1, m=10, seeds=1)
        outcome = CompareExperiment().handle_command('compare-prox', config)
        instance = tmp_path / 'instance'
        for name in ('design.csv', 'labels.csv', 'meta.json'):
            assert (instance / name).exists()
            assert instance / name in outcome.artifacts
        manifest = json.loads((tmp_path / 'manifest.json').read_text())
        assert 'instance/design.csv' in manifest['artifacts']
        stored = load_problem(instance)
        generated = problem_for(BaseExperiment.generator_config(config))
        np.testing.assert_array_equal(stored.design, generated.design)
        np.testing.assert_array_equal(stored.labels, generated.labels)

    def test_replay_writes_next_to_original(self, tmp_path):
        first = tmp_path / 'first'
        config = tiny_config(ExperimentKind.COMPARE_PROX, first, S=2, m=10, seeds=1)
        CompareExperiment().handle_command('compare-prox', config)
        original = (first / 'curves.csv').read_bytes()

        replayed = build_config(ExperimentKind.COMPARE_PROX, config_file=first / 'manifest.json')
        assert Path(replayed.out_dir) == (tmp_path / 'first-replay').resolve()
        CompareExperiment().handle_command('compare-prox', replayed)
        assert (first / 'curves.csv').read_bytes() == original
        assert (tmp_path / 'first-replay' / 'curves.csv').read_bytes() == original
        assert replay_dir(first.resolve()) == (tmp_path / 'first-replay-2').resolve()

    def test_sweep_with_single_stepsize(self, tmp_path):
        config = tiny_config(ExperimentKind.SWEEP_SAPA_SAGA, tmp_path, alpha_grid=[0.01],
                             cap=200)
        outcome = SweepExperiments().handle_command('sweep-sapa-saga', config)
        rows = read_rows(tmp_path / 'sweep.csv')
        assert len(rows) == 2 * TINY['seeds']
        assert {row['method'] for row in rows} == {'sapa', 'saga'}
        assert outcome.summary['grid'] == [0.01]
        assert len(read_rows(tmp_path / 'sweep_summary.csv')) == 2

    def test_exhausted_budget_is_cap(self, tmp_path):
        config = tiny_config(ExperimentKind.SWEEP_SVRP_SVRG, tmp_path, alpha_grid=[1e-6], S=1,
                             m=2, eps=1e-300)
        outcome = SweepExperiments().handle_command('sweep-svrp-svrg', config)
        rows = read_rows(tmp_path / 'sweep.csv')
        assert all(row['iters_or_cap'] == CAP and row['converged'] == 'false' for row in rows)
        assert outcome.summary['budget'] == 1 * (2 + 20 + 1)
        assert outcome.summary['best'] == {'svrp': None, 'svrg': None}


class TestVerifyChecks:

    @pytest.mark.parametrize('name', ['prox_kernels', 'unbiased_correction',
                                      'abc_sigma_recursion'])
    def test_exact_checks_pass(self, name, tmp_path):
        config = build_config(ExperimentKind.VERIFY, overrides={'out_dir': str(tmp_path)})
        [result] = run_checks(config, tmp_path, only=[name])
        assert result.name == name
        assert result.passed, result.details

    def test_determinism_check(self, tmp_path):
        config = build_config(ExperimentKind.VERIFY, overrides={'out_dir': str(tmp_path)})
        [result] = run_checks(config, tmp_path, only=['determinism'])
        assert result.passed, result.details

    def test_unknown_check(self, tmp_path):
        config = build_config(ExperimentKind.VERIFY, overrides={'out_dir': str(tmp_path)})
        with pytest.raises(ValueError):
            run_checks(config, tmp_path, only=['everything'])


class TestCli:

    def test_configuration_error_exit_code(self, tmp_path, capsys):
        code = bench.main(['compare-prox', '--n', '1', '--out-dir', str(tmp_path)])
        assert code == bench.EXIT_CONFIGURATION
        assert 'Configuration error' in capsys.readouterr().err

    def test_unsorted_grid_exit_code(self, tmp_path):
        code = bench.main(['sweep-sapa-saga', '--alpha-grid', '0.2,0.1', '--out-dir',
                           str(tmp_path)])
        assert code == bench.EXIT_CONFIGURATION

    def test_verify_passes(self, tmp_path):
        code = bench.main(['verify', '--only', 'prox_kernels', '--out-dir', str(tmp_path)])
        assert code == bench.EXIT_OK
        report = json.loads((tmp_path / 'verify.json').read_text())
        assert [check['name'] for check in report['checks']] == ['prox_kernels']
        assert (tmp_path / 'manifest.json').exists()

    def test_failed_statistical_check_sets_exit_code(self, tmp_path, monkeypatch):
        monkeypatch.setattr(verify_module, '_tuned_comparison',
                            lambda config: {'passed': False, 'seeds': config.seeds})
        code = bench.main(['verify', '--only', 'svrp_svrg_tuned', '--out-dir', str(tmp_path)])
        assert code == bench.EXIT_FAILED_CHECKS
        report = json.loads((tmp_path / 'verify.json').read_text())
        assert report['checks'][0]['details']['rerun'] is True

    def test_broken_rate_formula_fails_verify(self, tmp_path, monkeypatch, capsys):
        def broken(mu, L, alpha, m):
            return RateConstants(mu=mu, alpha=alpha, A=2 * L, B=2.0, C=0.0, rho=0.0, q=0.4,
                                 valid=True, L=L, m=m)

        monkeypatch.setattr(rates, 'svrp_rate_q', broken)
        code = bench.main(['verify', '--only', 'svrp_contraction', '--out-dir', str(tmp_path)])
        assert code == bench.EXIT_FAILED_CHECKS
        assert 'svrp_rate_q' in capsys.readouterr().out
        report = json.loads((tmp_path / 'verify.json').read_text())
        assert report['checks'][0]['passed'] is False
