"""
Benchmark entry point for the variance-reduced stochastic proximal point methods

Usage: python bench.py {compare-prox,sweep-sapa-saga,sweep-svrp-svrg,verify} [options]
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from errors import ConfigurationError
from experiments import ExperimentKind, build_config, check_names, experiment_handlers, list_commands
from experiments.settings import BenchSettings

logger = logging.getLogger('bench')

EXIT_OK = 0
EXIT_FAILED_CHECKS = 1
EXIT_CONFIGURATION = 2


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected comma-separated numbers, got {text!r}')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='bench',
        description='Variance-reduced stochastic proximal point benchmarks',
    )
    commands = parser.add_subparsers(dest='command', required=True)
    for command in list_commands():
        sub = commands.add_parser(command['name'], help=command['description'])
        sub.add_argument('--config', help='key=value file, or a manifest.json to replay')
        sub.add_argument('--preset', help='named preset')
        sub.add_argument('--n', type=int)
        sub.add_argument('--d', type=int)
        sub.add_argument('--cond', type=float)
        sub.add_argument('--loss', choices=['ols', 'logistic'])
        sub.add_argument('--seeds', type=int)
        sub.add_argument('--master-seed', type=int)
        sub.add_argument('--alpha', type=float)
        sub.add_argument('--alpha-grid', type=_float_list)
        sub.add_argument('--m', type=int)
        sub.add_argument('--S', type=int)
        sub.add_argument('--outer', choices=['random', 'average', 'last'])
        sub.add_argument('--p', type=float)
        sub.add_argument('--cap', type=int)
        sub.add_argument('--eps', type=float)
        sub.add_argument('--out-dir')
        sub.add_argument('--workers', type=int)
        sub.add_argument('--record-every', type=int)
        if command['name'] == 'verify':
            sub.add_argument('--only', action='append', choices=check_names(),
                             help='run only the named check (repeatable)')
    return parser


def overrides_from(args: argparse.Namespace) -> Dict[str, Any]:
    keys = ('n', 'd', 'cond', 'loss', 'seeds', 'master_seed', 'alpha', 'alpha_grid', 'm', 'S',
            'outer', 'p', 'cap', 'eps', 'out_dir', 'workers', 'record_every')
    return {key: getattr(args, key) for key in keys}


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command; returns the process exit code"""
    load_dotenv()
    args = build_parser().parse_args(argv)

    try:
        settings = BenchSettings()
        settings.configure_logging()
        config = build_config(ExperimentKind(args.command), args.preset, args.config,
                              overrides_from(args), settings)
    except ConfigurationError as e:
        print(f'❌ Configuration error: {e}', file=sys.stderr)
        return EXIT_CONFIGURATION

    # Route to the handler that owns the command
    for handler in experiment_handlers(getattr(args, 'only', None)):
        if handler.has_command(args.command):
            outcome = handler.handle_command(args.command, config)
            break
    else:
        raise ValueError(f'Unknown command: {args.command}')

    for path in outcome.artifacts:
        logger.info('wrote %s', path)
    if not outcome.passed:
        return EXIT_FAILED_CHECKS
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
