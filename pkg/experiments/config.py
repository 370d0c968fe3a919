"""
Experiment configuration: presets, key=value config files and CLI overrides.

Precedence, lowest first: preset, environment (BenchSettings), config file,
command-line overrides.
"""

import json
import logging
from dataclasses import asdict, dataclass, fields
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from dotenv import dotenv_values

from errors import ConfigurationError
from experiments.settings import BenchSettings
from problem.losses import LossKind

logger = logging.getLogger(__name__)

OLS_CAP = 40_000
LOGISTIC_CAP = 25_000_000
ACCURACY = 0.01


class ExperimentKind(Enum):
    COMPARE_PROX = 'compare-prox'
    SWEEP_SAPA_SAGA = 'sweep-sapa-saga'
    SWEEP_SVRP_SVRG = 'sweep-svrp-svrg'
    VERIFY = 'verify'


@dataclass
class ExperimentConfig:
    """Everything needed to re-run one experiment bit-identically"""

    kind: ExperimentKind
    preset: str = ''
    n: int = 1000
    d: int = 500
    cond: float = 100.0
    loss: str = 'ols'
    label_noise: float = 0.1
    data_seed: int = 0
    full_rank: bool = False
    seeds: int = 10
    master_seed: int = 0
    alpha: Optional[float] = None
    alpha_grid: Optional[List[float]] = None
    grid_per_decade: int = 20
    m: Optional[int] = None
    S: int = 20
    outer: str = 'random'
    p: Optional[float] = None
    cap: Optional[int] = None
    eps: float = ACCURACY
    sppa_c: float = 1.0
    sppa_exponent: float = 0.55
    record_every: Optional[int] = None
    out_dir: str = './results'
    workers: int = 1

    def loss_kind(self) -> LossKind:
        return LossKind.parse(self.loss)

    def iteration_cap(self) -> int:
        if self.cap is not None:
            return self.cap
        return OLS_CAP if self.loss_kind() is LossKind.SQUARED_RESIDUAL else LOGISTIC_CAP

    def inner_count(self) -> int:
        """m, defaulting to 2n"""
        return self.m if self.m is not None else 2 * self.n

    def validate(self) -> 'ExperimentConfig':
        try:
            LossKind.parse(self.loss)
        except ValueError as e:
            raise ConfigurationError(str(e))
        if self.n < 2 or self.d < 2:
            raise ConfigurationError(f'n and d must be >= 2, got n={self.n}, d={self.d}')
        if not self.cond > 1.0:
            raise ConfigurationError(f'cond must exceed 1, got {self.cond}')
        if self.seeds < 1:
            raise ConfigurationError(f'seeds must be >= 1, got {self.seeds}')
        if self.S < 1 or (self.m is not None and self.m < 1):
            raise ConfigurationError('S and m must be >= 1')
        if self.alpha is not None and not self.alpha > 0.0:
            raise ConfigurationError(f'alpha must be positive, got {self.alpha}')
        if self.alpha_grid is not None:
            grid = self.alpha_grid
            if not grid or any(a <= 0.0 for a in grid):
                raise ConfigurationError('alpha grid must be non-empty and strictly positive')
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ConfigurationError('alpha grid must be sorted in increasing order')
        if self.p is not None and not 0.0 < self.p <= 1.0:
            raise ConfigurationError(f'p must lie in (0, 1], got {self.p}')
        if self.cap is not None and self.cap < 1:
            raise ConfigurationError(f'cap must be >= 1, got {self.cap}')
        if self.outer not in ('random', 'average', 'last'):
            raise ConfigurationError(f'outer must be random, average or last, got {self.outer}')
        if self.workers < 1:
            raise ConfigurationError(f'workers must be >= 1, got {self.workers}')
        if self.record_every is not None and self.record_every < 1:
            raise ConfigurationError(f'record_every must be >= 1, got {self.record_every}')
        if not 0.0 <= self.label_noise < 1.0:
            raise ConfigurationError(f'label_noise must lie in [0, 1), got {self.label_noise}')
        return self

    def to_dict(self) -> Dict[str, Any]:
        echo = asdict(self)
        echo['kind'] = self.kind.value
        return echo


PRESETS: Dict[str, Dict[str, Any]] = {
    'compare-ols': {'n': 1000, 'd': 500, 'cond': 100.0, 'loss': 'ols', 'seeds': 10, 'S': 20},
    'compare-logistic': {'n': 1000, 'd': 500, 'cond': 100.0, 'loss': 'logistic', 'seeds': 5,
                         'S': 20},
    'sapa-saga-ols': {'n': 1000, 'd': 500, 'cond': 100.0, 'loss': 'ols', 'seeds': 5,
                      'cap': OLS_CAP},
    'sapa-saga-logistic': {'n': 1000, 'd': 500, 'cond': 100.0, 'loss': 'logistic', 'seeds': 5,
                           'cap': LOGISTIC_CAP},
    'svrp-svrg-hard': {'n': 500, 'd': 500, 'cond': 100.0, 'loss': 'ols', 'seeds': 5, 'S': 20,
                       'm': 250},
    'svrp-svrg-large': {'n': 2000, 'd': 1000, 'cond': 100.0, 'loss': 'ols', 'seeds': 5,
                        'S': 40, 'm': 1000},
    'quick': {'n': 50, 'd': 10, 'cond': 1.5, 'loss': 'ols', 'seeds': 200, 'full_rank': True},
    'full': {'n': 50, 'd': 10, 'cond': 1.5, 'loss': 'ols', 'seeds': 400, 'full_rank': True},
}

DEFAULT_PRESETS = {
    ExperimentKind.COMPARE_PROX: 'compare-ols',
    ExperimentKind.SWEEP_SAPA_SAGA: 'sapa-saga-ols',
    ExperimentKind.SWEEP_SVRP_SVRG: 'svrp-svrg-hard',
    ExperimentKind.VERIFY: 'quick',
}

_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}
_CANONICAL = {name.lower(): name for name in _FIELD_TYPES}


def _coerce(name: str, raw: Any) -> Any:
    """Convert a config-file string (or JSON value) to the field's type"""
    if name not in _FIELD_TYPES or name == 'kind':
        raise ConfigurationError(f'Unknown configuration key: {name}')
    if raw is None:
        return None
    if not isinstance(raw, str):
        return raw
    text = raw.strip()
    if text == '' or text.lower() == 'none':
        return None
    kind = str(_FIELD_TYPES[name])
    try:
        if 'List' in kind:
            return [float(v) for v in text.split(',') if v.strip()]
        if 'bool' in kind:
            if text.lower() in ('1', 'true', 'yes', 'on'):
                return True
            if text.lower() in ('0', 'false', 'no', 'off'):
                return False
            raise ValueError(text)
        if 'int' in kind:
            return int(text)
        if 'float' in kind:
            return float(text)
    except ValueError:
        raise ConfigurationError(f'Invalid value for {name}: {raw!r}')
    return text


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Key=value document, or a JSON manifest whose config echo is replayed"""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f'Config file not found: {path}')

    if path.suffix == '.json':
        try:
            with open(path, 'r') as f:
                document = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f'Invalid JSON in {path}: {e}')
        values = document.get('config', document)
        values = {k: v for k, v in values.items() if k != 'kind'}
    else:
        values = dict(dotenv_values(path))

    parsed = {}
    for key, value in values.items():
        name = _CANONICAL.get(key.strip().lower(), key.strip())
        parsed[name] = _coerce(name, value)
    return parsed


def replay_dir(source: Path) -> Path:
    """Fresh sibling of a run directory for its manifest replay"""
    candidate = source.with_name(f'{source.name}-replay')
    index = 2
    while candidate.exists():
        candidate = source.with_name(f'{source.name}-replay-{index}')
        index += 1
    return candidate


def build_config(kind: ExperimentKind, preset: Optional[str] = None,
                 config_file: Optional[Union[str, Path]] = None,
                 overrides: Optional[Dict[str, Any]] = None,
                 settings: Optional[BenchSettings] = None) -> ExperimentConfig:
    """Merge preset, environment, config file and overrides into a validated config.

    A manifest replay never reuses the recorded out_dir: unless overridden it
    writes next to the original run, in a fresh `<name>-replay` directory.
    """
    from_file = read_config_file(config_file) if config_file is not None else {}
    replaying = config_file is not None and Path(config_file).suffix == '.json'
    if replaying:
        from_file.pop('out_dir', None)
    preset = preset or from_file.pop('preset', None) or DEFAULT_PRESETS[kind]
    from_file.pop('preset', None)
    if preset not in PRESETS:
        raise ConfigurationError(f'Unknown preset: {preset} (choose from {", ".join(PRESETS)})')

    values: Dict[str, Any] = dict(PRESETS[preset])
    if settings is not None:
        values.update({
            'out_dir': str(settings.out_dir),
            'workers': settings.workers,
            'master_seed': settings.master_seed,
        })
    values.update(from_file)
    if replaying:
        values['out_dir'] = str(replay_dir(Path(config_file).resolve().parent))
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    values['preset'] = preset

    unknown = set(values) - set(_FIELD_TYPES)
    if unknown:
        raise ConfigurationError(f'Unknown configuration keys: {", ".join(sorted(unknown))}')

    config = ExperimentConfig(kind=kind, **values)
    logger.debug('configuration: %s', config.to_dict())
    return config.validate()
