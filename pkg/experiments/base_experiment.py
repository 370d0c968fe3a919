"""
Base class for all bench commands
"""

import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List

from experiments.config import ExperimentConfig
from experiments.manifest import ExperimentManifest
from experiments.runner import problem_for
from problem.storage import save_problem
from synthetic.generator import GeneratorConfig

logger = logging.getLogger(__name__)

INSTANCE_DIR = 'instance'


@dataclass
class ExperimentOutcome:
    out_dir: Path
    artifacts: List[Path] = field(default_factory=list)
    passed: bool = True
    summary: Dict[str, Any] = field(default_factory=dict)


class BaseExperiment(ABC):
    """Base class for command handlers; one handler may serve several commands"""

    @abstractmethod
    def get_commands(self) -> List[Dict[str, Any]]:
        """Get list of available commands with their descriptions"""
        pass

    @abstractmethod
    def has_command(self, name: str) -> bool:
        """Check if this class handles a specific command"""
        pass

    @abstractmethod
    def run(self, name: str, config: ExperimentConfig, out_dir: Path,
            manifest: ExperimentManifest) -> ExperimentOutcome:
        """Run a command, registering artifacts on the manifest"""
        pass

    def handle_command(self, name: str, config: ExperimentConfig) -> ExperimentOutcome:
        """Run a command with manifest bookkeeping.

        A failing command still leaves a manifest with status 'failed' and the
        artifacts written so far, then the error propagates.
        """
        out_dir = Path(config.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        manifest = ExperimentManifest(config=config.to_dict())
        started = time.perf_counter()
        logger.info('%s: writing to %s', name, out_dir)
        try:
            instance = self.save_instance(config, out_dir)
            for path in instance:
                manifest.add_artifact(path, relative_to=out_dir)
            outcome = self.run(name, config, out_dir, manifest)
            outcome.artifacts.extend(instance)
        except Exception as e:
            manifest.status = 'failed'
            manifest.error = f'{type(e).__name__}: {e}'
            manifest.wall_time_s = time.perf_counter() - started
            manifest.write(out_dir)
            logger.error('%s failed: %s', name, e)
            raise

        manifest.status = 'completed' if outcome.passed else 'checks_failed'
        manifest.wall_time_s = time.perf_counter() - started
        outcome.artifacts.append(manifest.write(out_dir))
        logger.info('%s finished in %.1f s', name, manifest.wall_time_s)
        return outcome

    @classmethod
    def save_instance(cls, config: ExperimentConfig, out_dir: Path) -> List[Path]:
        """Write the generated instance to <out_dir>/instance (design.csv, labels.csv, meta.json)"""
        problem = problem_for(cls.generator_config(config))
        paths = save_problem(problem, out_dir / INSTANCE_DIR)
        return [paths[key] for key in ('design', 'labels', 'meta')]

    @staticmethod
    def generator_config(config: ExperimentConfig) -> GeneratorConfig:
        return GeneratorConfig(
            n=config.n,
            d=config.d,
            cond=config.cond,
            loss_kind=config.loss_kind(),
            label_noise=config.label_noise,
            seed=config.data_seed,
            full_rank=config.full_rank,
        )
