"""
Benchmark settings read from the environment
"""

import logging
import os
from pathlib import Path
from typing import Optional

from errors import ConfigurationError

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')


class BenchSettings:
    """Environment defaults for every bench command"""

    def __init__(self, out_dir: Optional[str] = None):
        """Read BENCH_* variables; the output directory is created on first use"""
        self.out_dir = Path(out_dir or os.getenv('BENCH_OUT_DIR', './results'))
        self.workers = self._int('BENCH_WORKERS', 1, minimum=1)
        self.master_seed = self._int('BENCH_MASTER_SEED', 0, minimum=0)
        self.log_level = os.getenv('BENCH_LOG_LEVEL', 'INFO').strip().upper()

        if self.log_level not in LOG_LEVELS:
            raise ConfigurationError(f'BENCH_LOG_LEVEL must be one of {", ".join(LOG_LEVELS)}, '
                                     f'got {self.log_level}')

    @staticmethod
    def _int(name: str, default: int, minimum: int) -> int:
        raw = os.getenv(name)
        if raw is None or raw.strip() == '':
            return default
        try:
            value = int(raw)
        except ValueError:
            raise ConfigurationError(f'{name} must be an integer, got {raw!r}')
        if value < minimum:
            raise ConfigurationError(f'{name} must be >= {minimum}, got {value}')
        return value

    def ensure_out_dir(self, path: Optional[Path] = None) -> Path:
        target = Path(path or self.out_dir)
        target.mkdir(parents=True, exist_ok=True)
        return target

    def configure_logging(self):
        logging.basicConfig(
            level=getattr(logging, self.log_level),
            format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        )
