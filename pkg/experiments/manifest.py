"""
Experiment manifest: config echo, per-run seeds, data metadata and artifact list
"""

import json
import logging
import platform
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import scipy

logger = logging.getLogger(__name__)

SOFTWARE_VERSION = '0.1.0'
MANIFEST_NAME = 'manifest.json'


def software_versions() -> Dict[str, str]:
    return {
        'bench': SOFTWARE_VERSION,
        'python': platform.python_version(),
        'numpy': np.__version__,
        'scipy': scipy.__version__,
    }


@dataclass
class ExperimentManifest:
    """Enough to re-run an experiment: replay it with `--config manifest.json`"""

    config: Dict[str, Any]
    runs: List[Dict[str, Any]] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)
    artifacts: List[str] = field(default_factory=list)
    software: Dict[str, str] = field(default_factory=software_versions)
    wall_time_s: float = 0.0
    status: str = 'running'
    error: Optional[str] = None

    def add_artifact(self, path: Union[str, Path], relative_to: Optional[Union[str, Path]] = None):
        path = Path(path)
        name = path.relative_to(relative_to).as_posix() if relative_to is not None else path.name
        if name not in self.artifacts:
            self.artifacts.append(name)

    def write(self, out_dir: Union[str, Path]) -> Path:
        path = Path(out_dir) / MANIFEST_NAME
        with open(path, 'w') as f:
            json.dump(asdict(self), f, indent=2, sort_keys=True, default=_json_default)
        logger.debug('manifest written to %s (status=%s)', path, self.status)
        return path


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f'Object of type {type(value).__name__} is not JSON serializable')
