"""Command-line entry point: ``encdec <command> ...``"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .config.settings import AppSettings, get_settings
from .exceptions import ArgumentError, StageError
from .models.analysis import AnalysisSide
from .services.analysis_service import AnalysisService, oracle_table
from .storage.reports import decisions_table

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2


def setup_logging(settings: AppSettings, verbose: bool = False) -> None:
    """Diagnostics go to stderr (and optionally a log file); stdout carries results only"""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.log_file:
        handlers.append(logging.FileHandler(settings.log_file))
    logging.basicConfig(
        level=logging.DEBUG if verbose else getattr(logging, settings.log_level, logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='encdec',
        description='Causal interpretation of encoding and decoding models',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--verbose', '-v', action='store_true', help='Debug logging')
    parser.add_argument('--env-file', type=Path, help='Environment file (default ./.env)')
    commands = parser.add_subparsers(dest='command', required=True)

    analyze = commands.add_parser('analyze', help='Run the full analysis on subject CSVs')
    analyze.add_argument('--config', '-c', type=Path, help='key = value config file')
    analyze.add_argument('--output-dir', '-o', type=Path, help='Report directory')
    analyze.add_argument('--report-name', help='Report file stem')
    analyze.add_argument('--seed', type=int, help='Base seed (overrides the config)')
    analyze.add_argument('--n-jobs', type=int, help='Parallel workers')
    analyze.add_argument('subjects', nargs='+', type=Path, help='Subject CSV files')

    simulate = commands.add_parser('simulate', help='Sample subject CSVs from a SEM fixture')
    simulate.add_argument('fixture', type=Path)
    simulate.add_argument('--subjects', '-s', type=int, default=17)
    simulate.add_argument('--samples', '-n', type=int, default=1000)
    simulate.add_argument('--seed', type=int, default=0)
    simulate.add_argument('--out', '-o', type=Path, required=True)
    simulate.add_argument('--n-jobs', type=int)

    dsep = commands.add_parser('dsep', help='d-separation query on a DAG file')
    dsep.add_argument('dag', type=Path)
    dsep.add_argument('a')
    dsep.add_argument('b')
    dsep.add_argument('given', nargs='*', help='Conditioning set')

    replay = commands.add_parser('replay', help='Group decisions for a p-value matrix')
    replay.add_argument('matrix', type=Path)
    replay.add_argument(
        '--side', choices=[s.value for s in AnalysisSide], default='encoding'
    )
    replay.add_argument('--config', '-c', type=Path)
    replay.add_argument('--seed', type=int)

    wilcoxon = commands.add_parser('wilcoxon', help='Signed-rank test of values against mu0')
    wilcoxon.add_argument('values', help='CSV file or comma-separated numbers')
    wilcoxon.add_argument('--mu0', type=float, default=50.0)
    wilcoxon.add_argument('--method', choices=['normal', 'exact'], default='normal')

    oracle = commands.add_parser('oracle', help='Ground-truth relevance from a DAG file')
    oracle.add_argument('fixture', type=Path)
    oracle.add_argument('--condition')
    oracle.add_argument('features', nargs='*')

    return parser


def cmd_analyze(args: argparse.Namespace, service: AnalysisService) -> int:
    config = service.load_config(
        args.config,
        output_dir=args.output_dir,
        report_name=args.report_name,
        seed=args.seed,
        n_jobs=args.n_jobs,
    )
    outcome = service.analyze(config, args.subjects)
    part = outcome.report.partition
    print(f'{outcome.json_path}')
    print(f'{outcome.text_path}')
    logger.info(
        f'Partition: +enc+dec={part.enc_dec} +enc-dec={part.enc_only} '
        f'-enc+dec={part.dec_only} -enc-dec={part.neither} '
        f'indeterminate={part.indeterminate}'
    )
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, service: AnalysisService) -> int:
    n_jobs = args.n_jobs or service.defaults.get('n_jobs', 1)
    outcome = service.simulate(
        args.fixture, args.subjects, args.samples, args.seed, args.out, n_jobs=n_jobs
    )
    logger.info(f'Wrote {len(outcome.files)} subject files to {args.out}')
    print(oracle_table(outcome.oracle))
    return EXIT_OK


def cmd_dsep(args: argparse.Namespace, service: AnalysisService) -> int:
    result = service.dsep(args.dag, args.a, args.b, args.given)
    print(result.verdict)
    print(result.implication)
    return EXIT_OK


def cmd_replay(args: argparse.Namespace, service: AnalysisService) -> int:
    config = service.load_config(args.config, seed=args.seed)
    outcome = service.replay(args.matrix, AnalysisSide(args.side), config)
    print(decisions_table(outcome.decisions))
    return EXIT_OK


def cmd_wilcoxon(args: argparse.Namespace, service: AnalysisService) -> int:
    values, result = service.wilcoxon(args.values, mu0=args.mu0, method=args.method)
    print(f'n={result.n} W+={result.w_plus:g} z={result.z:.6f} p={result.p.value:.6e}')
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace, service: AnalysisService) -> int:
    rows = service.oracle(args.fixture, args.condition, args.features or None)
    print(oracle_table(rows))
    return EXIT_OK


COMMANDS = {
    'analyze': cmd_analyze,
    'simulate': cmd_simulate,
    'dsep': cmd_dsep,
    'replay': cmd_replay,
    'wilcoxon': cmd_wilcoxon,
    'oracle': cmd_oracle,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT

    try:
        settings = get_settings(args.env_file)
    except ValueError as e:
        print(f'encdec: invalid environment setting: {e}', file=sys.stderr)
        return EXIT_INPUT
    setup_logging(settings, args.verbose)
    service = AnalysisService(
        defaults={'n_jobs': settings.n_jobs, 'output_dir': settings.output_dir}
    )

    try:
        return COMMANDS[args.command](args, service)
    except StageError as e:
        if e.is_input_error:
            logger.error(str(e))
            return EXIT_INPUT
        logger.exception(f'Internal error: {e}')
        return EXIT_INTERNAL
    except ArgumentError as e:
        logger.error(str(e))
        return EXIT_INPUT
    except Exception as e:
        logger.exception(f'Internal error: {e}')
        return EXIT_INTERNAL


if __name__ == '__main__':
    sys.exit(main())
