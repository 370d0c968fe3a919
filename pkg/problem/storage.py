"""
Problem serialization: design.csv, labels.csv and meta.json in one directory
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from problem.finite_sum import FiniteSumProblem
from problem.losses import LossKind

logger = logging.getLogger(__name__)

CSV_FORMAT = '%.17g'


def save_problem(problem: FiniteSumProblem, directory: Union[str, Path],
                 extra_meta: Optional[Dict[str, Any]] = None) -> Dict[str, Path]:
    """Write the problem to `directory` and return the written paths"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    paths = {
        'design': directory / 'design.csv',
        'labels': directory / 'labels.csv',
        'meta': directory / 'meta.json',
    }
    # %-formatting ignores the process locale, so the decimal point is always '.'
    np.savetxt(paths['design'], problem.design, fmt=CSV_FORMAT, delimiter=',')
    np.savetxt(paths['labels'], problem.labels.reshape(-1, 1), fmt=CSV_FORMAT, delimiter=',')

    with open(paths['meta'], 'w') as f:
        json.dump(problem.describe(extra_meta), f, indent=2, sort_keys=True)

    logger.debug('Saved problem n=%d d=%d to %s', problem.n, problem.d, directory)
    return paths


def load_problem(directory: Union[str, Path]) -> FiniteSumProblem:
    """Read a problem written by save_problem"""
    directory = Path(directory)
    meta_file = directory / 'meta.json'
    if not meta_file.exists():
        raise FileNotFoundError(f'No meta.json in {directory}')

    with open(meta_file, 'r') as f:
        meta = json.load(f)

    design = np.loadtxt(directory / 'design.csv', delimiter=',', dtype=np.float64)
    labels = np.loadtxt(directory / 'labels.csv', delimiter=',', dtype=np.float64)

    if design.size != meta['n'] * meta['d'] or labels.size != meta['n']:
        raise ValueError(f'CSV sizes do not match meta.json dimensions '
                         f'({meta["n"]}, {meta["d"]})')
    design = design.reshape(meta['n'], meta['d'])
    labels = labels.reshape(meta['n'])

    metadata = {k: v for k, v in meta.items()
                if k not in ('loss_kind', 'n', 'd', 'smoothness_constant')}
    return FiniteSumProblem(design, labels, LossKind(meta['loss_kind']), metadata=metadata)
