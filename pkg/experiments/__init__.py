"""Package initialization"""

from typing import Any, Dict, List

from experiments.base_experiment import BaseExperiment, ExperimentOutcome
from experiments.compare import CompareExperiment, compare_prox
from experiments.config import (PRESETS, ExperimentConfig, ExperimentKind, build_config,
                                read_config_file)
from experiments.manifest import ExperimentManifest
from experiments.runner import RunJob, RunResult, run_jobs, write_csv
from experiments.settings import BenchSettings
from experiments.sweeps import SweepExperiments, default_grid, sweep_sapa_saga, sweep_svrp_svrg
from experiments.verify import CheckResult, VerifyExperiment, check_names, run_checks, verify


def experiment_handlers(only_checks=None) -> List[BaseExperiment]:
    return [CompareExperiment(), SweepExperiments(), VerifyExperiment(only_checks)]


def list_commands() -> List[Dict[str, Any]]:
    commands = []
    for handler in experiment_handlers():
        commands.extend(handler.get_commands())
    return commands


__all__ = [
    'BaseExperiment', 'ExperimentOutcome', 'CompareExperiment', 'SweepExperiments',
    'VerifyExperiment', 'compare_prox', 'sweep_sapa_saga', 'sweep_svrp_svrg', 'verify',
    'default_grid', 'run_checks', 'check_names', 'CheckResult',
    'ExperimentConfig', 'ExperimentKind', 'PRESETS', 'build_config', 'read_config_file',
    'ExperimentManifest', 'RunJob', 'RunResult', 'run_jobs', 'write_csv',
    'BenchSettings', 'experiment_handlers', 'list_commands',
]
