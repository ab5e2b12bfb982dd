#!/usr/bin/env python3
"""
encdec - Development Runner

Checks the environment, validates the bundled fixtures, runs the test suite
or a small end-to-end demo (simulate a cohort, analyze it, print the report).
"""

import sys
import logging
import argparse
import tempfile
import importlib.util
from pathlib import Path

# Add the src directory to the Python path
ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / 'src'))

REQUIRED = [
    'numpy',
    'scipy',
    'pandas',
    'sklearn',
    'networkx',
    'joblib',
    'pydantic',
    'langgraph',
    'jinja2',
    'dotenv',
]


def setup_logging(debug: bool = False):
    """Configure logging for development"""
    log_level = logging.DEBUG if debug else logging.INFO
    logging.basicConfig(
        level=log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(), logging.FileHandler('encdec_dev.log')],
    )


def load_environment():
    """Load environment variables from .env file"""
    from dotenv import load_dotenv

    env_file = ROOT / '.env'
    if env_file.exists():
        load_dotenv(env_file)
        print(f'✅ Loaded environment from {env_file}')
    else:
        env_example = ROOT / '.env.example'
        if env_example.exists():
            print(f'⚠️  No .env file found. Copy {env_example} to .env to change defaults.')
        else:
            print('⚠️  No .env file found. Using default environment settings.')


def check_dependencies():
    """Check if required dependencies are available"""
    missing = [name for name in REQUIRED if importlib.util.find_spec(name) is None]
    if missing:
        print(f'❌ Missing dependencies: {", ".join(missing)}')
        print('Please run: uv sync  or  pip install -e .')
        return False
    print('✅ All required dependencies are available')
    return True


def check_fixtures():
    """Parse every bundled fixture and print its ground-truth rules"""
    from encdec.exceptions import EncDecError
    from encdec.services import AnalysisService, oracle_table

    service = AnalysisService()
    ok = True
    for path in sorted((ROOT / 'fixtures').glob('*.sem')):
        try:
            rows = service.oracle(path)
        except EncDecError as e:
            print(f'❌ {path.name}: {e}')
            ok = False
            continue
        print(f'✅ {path.name}')
        print(oracle_table(rows))
    return ok


def run_tests(slow: bool = False):
    """Run the test suite"""
    import pytest

    print('🧪 Running encdec test suite...')

    args = ['tests/', '-v', '--tb=short', '--durations=10']
    if slow:
        args += ['-m', 'slow']
    exit_code = pytest.main(args)

    return exit_code == 0


def run_demo(fixture: str, subjects: int, samples: int, debug: bool = False):
    """Simulate a cohort from a fixture and run the quick analysis on it"""
    from encdec.main import main as encdec_main

    with tempfile.TemporaryDirectory(prefix='encdec-demo-') as tmp:
        work = Path(tmp)
        conf = work / 'demo.conf'
        conf.write_text(
            'n_perm_hsic = 199\n'
            'n_perm_importance = 99\n'
            'n_mc_ks = 20000\n'
            'n_trees = 30\n'
            'cv_folds = 5\n',
            encoding='utf-8',
        )
        verbose = ['-v'] if debug else []

        print(f'🎲 Sampling {subjects} subjects x {samples} trials from {fixture}')
        code = encdec_main(
            verbose
            + [
                'simulate',
                str(ROOT / 'fixtures' / fixture),
                '--subjects',
                str(subjects),
                '--samples',
                str(samples),
                '--out',
                str(work / 'cohort'),
            ]
        )
        if code != 0:
            return False

        print('🔬 Running encoding and decoding analyses...')
        files = [str(p) for p in sorted((work / 'cohort').glob('*.csv'))]
        code = encdec_main(
            verbose + ['analyze', '-c', str(conf), '-o', str(work / 'reports'), *files]
        )
        if code != 0:
            return False

        print((work / 'reports' / 'report.txt').read_text(encoding='utf-8'))
    return True


def main():
    """Main entry point"""
    parser = argparse.ArgumentParser(description='encdec Development Runner')
    parser.add_argument('--debug', action='store_true', help='Enable debug logging')
    parser.add_argument('--test', action='store_true', help='Run tests and exit')
    parser.add_argument(
        '--slow', action='store_true', help='With --test: run the acceptance suite'
    )
    parser.add_argument(
        '--check', action='store_true', help='Run system checks and exit'
    )
    parser.add_argument(
        '--fixture', default='collider.sem', help='Demo fixture (default: collider.sem)'
    )
    parser.add_argument('--subjects', type=int, default=10, help='Demo subjects')
    parser.add_argument('--samples', type=int, default=200, help='Demo trials per subject')

    args = parser.parse_args()

    # Setup logging
    setup_logging(args.debug)

    # Load environment
    load_environment()

    print('🧠 encdec - encoding/decoding causal interpretation')
    print('=' * 50)

    # Check dependencies
    if not check_dependencies():
        sys.exit(1)

    # Run system checks
    if args.check:
        print('🔍 Validating fixtures...')
        fixtures_ok = check_fixtures()
        print('=' * 50)
        if fixtures_ok:
            print('✅ All system checks passed')
            sys.exit(0)
        else:
            print('❌ System checks failed')
            sys.exit(1)

    # Run tests if requested
    if args.test:
        if run_tests(slow=args.slow):
            print('✅ All tests passed')
            sys.exit(0)
        else:
            print('❌ Some tests failed')
            sys.exit(1)

    try:
        if not run_demo(args.fixture, args.subjects, args.samples, debug=args.debug):
            print('❌ Demo failed')
            sys.exit(1)
    except KeyboardInterrupt:
        print('\n👋 Demo stopped by user')


if __name__ == '__main__':
    main()
