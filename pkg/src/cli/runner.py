"""Command-line entry: one subcommand per verification suite.

Exit status is 0 when every check passes, 2 when a check fails or a domain error stops the run, 3 when a
budget, precision or convergence limit stops it and 64 on a usage error.
"""
import argparse
import logging
import sys

from mpmath import mp

from src.cli.config import resolve
from src.cli.report_io import emit_report
from src.const import EXIT_ASSERTION, EXIT_BUDGET, EXIT_OK, EXIT_USAGE, SCHEMA_VERSION
from src.errors import BudgetError, InsufficientPrecisionError, MixedMomentError, NonConvergenceError, UsageError
from src.suites.afe import AfeConsistencySuite, LValuesSuite
from src.suites.arithmetic import GSumSuite, KloostermanSuite
from src.suites.mainterm import MainTermHoloSuite, MainTermSuite
from src.suites.modforms import FormsSuite
from src.suites.offdiag import PoissonSuite
from src.suites.sieve import SieveSuite
from src.suites.specialfn import SpecialFnSuite
from src.suites.tracecheck import KuznetsovSuite, MomentHoloSuite, PeterssonSuite
from src.suites.transforms import TransformsSuite

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

SUITES = {suite.name: suite for suite in (
    SpecialFnSuite,
    KloostermanSuite,
    GSumSuite,
    FormsSuite,
    AfeConsistencySuite,
    LValuesSuite,
    TransformsSuite,
    MainTermSuite,
    MainTermHoloSuite,
    PoissonSuite,
    SieveSuite,
    PeterssonSuite,
    KuznetsovSuite,
    MomentHoloSuite,
)}

# raised when a run hits a limit rather than a wrong answer
LIMIT_ERRORS = (BudgetError, InsufficientPrecisionError, NonConvergenceError)


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def common_options():
    """options shared by every subcommand; only the ones given reach the namespace"""
    parser = ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    parser.add_argument('--precision-bits', dest='precision_bits', type=int, help='working precision in bits')
    parser.add_argument('--abs-tol', dest='abs_tol', type=float, help='absolute quadrature tolerance')
    parser.add_argument('--rel-tol', dest='rel_tol', type=float, help='relative quadrature tolerance')
    parser.add_argument('--cmax', dest='c_max', type=int, help='largest modulus in Kloosterman sums')
    parser.add_argument('--truncation-multiplier', dest='truncation_multiplier', type=float,
                        help='scale on every Dirichlet-series truncation')
    parser.add_argument('--seed', type=int, help='seed for randomised checks')
    parser.add_argument('--threads', type=int, help='worker threads')
    parser.add_argument('--json', dest='output_format', action='store_const', const='json', help='JSON report')
    parser.add_argument('--csv', dest='output_format', action='store_const', const='csv', help='CSV report')
    parser.add_argument('--out', help='report file (stdout when absent)')
    parser.add_argument('--log-level', dest='log_level', help='DEBUG, INFO, WARNING, ERROR or CRITICAL')
    parser.add_argument('--config', help='key = value settings file')
    parser.add_argument('--mollifier-scale', dest='mollifier_scale', type=float,
                        help='a in the contour weight exp(a s^2)')
    parser.add_argument('--c-constant-form', dest='c_constant_form', help='both, printed or derived')
    parser.add_argument('--omega', dest='omega_convention', help='zeta1 or unit')
    return parser


def build_parser():
    common = common_options()
    parser = ArgumentParser(prog='mixedmoments', parents=[common],
                            description='Numerical verification of mixed moments of GL(2) and sym^2 L-functions.')
    commands = parser.add_subparsers(dest='subcommand', metavar='SUBCOMMAND', parser_class=ArgumentParser)
    for name, suite in SUITES.items():
        sub = commands.add_parser(name, parents=[common], help=suite.__doc__.strip().splitlines()[0],
                                  description=str(suite(None)))
        suite.addArguments(sub)
    return parser


def parse_args(argv, environ=None):
    """(subcommand, RunConfig, suite parameters) from argv"""
    namespace = vars(build_parser().parse_args(argv))
    subcommand = namespace.pop('subcommand', None)
    if subcommand is None:
        raise UsageError('a subcommand is required: %s' % ', '.join(SUITES))
    flag_names = {flag for flag, _, _, _ in SUITES[subcommand].parameters}
    params = {key: namespace.pop(key) for key in list(namespace) if key in flag_names}
    config_file = namespace.pop('config', None)
    return subcommand, resolve(namespace, config_file, environ), params


def failure_report(subcommand, config, err):
    return {
        'schema_version': SCHEMA_VERSION,
        'suite': subcommand,
        'pass': False,
        'config': config.as_dict(),
        'error': {'type': type(err).__name__, 'message': str(err)},
    }


def run(subcommand, config, params=None):
    """run one suite and write its report; returns the exit status

    Usage errors and plain ValueErrors from parameter validation exit 64 without a report. Any other
    library error ends the run with a failure report: exit 3 for limits, 2 for a domain error.
    """
    if subcommand not in SUITES:
        logger.error('unknown subcommand %r', subcommand)
        return EXIT_USAGE
    try:
        suite = SUITES[subcommand](config, **(params or {}))
        with mp.workprec(config.precision_bits):
            report = suite.run()
    except UsageError as err:
        logger.error('%s: %s', subcommand, err)
        return EXIT_USAGE
    except LIMIT_ERRORS as err:
        logger.error('%s stopped: %s: %s', subcommand, type(err).__name__, err)
        emit_report(failure_report(subcommand, config, err), config.output_format, config.out)
        return EXIT_BUDGET
    except MixedMomentError as err:
        logger.error('%s failed: %s: %s', subcommand, type(err).__name__, err)
        emit_report(failure_report(subcommand, config, err), config.output_format, config.out)
        return EXIT_ASSERTION
    except ValueError as err:
        logger.error('%s: invalid parameters: %s', subcommand, err)
        return EXIT_USAGE
    emit_report(report, config.output_format, config.out)
    if not report['pass']:
        logger.warning('%s: %d check(s) failed', subcommand, sum(not c['pass'] for c in report['checks']))
        return EXIT_ASSERTION
    return EXIT_OK


def configure_logging(level):
    logging.basicConfig(stream=sys.stderr, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)


def main(argv=None, environ=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        subcommand, config, params = parse_args(argv, environ)
    except UsageError as err:
        configure_logging('WARNING')
        logger.error('%s', err)
        return EXIT_USAGE
    except SystemExit as done:
        return done.code or EXIT_OK
    configure_logging(config.log_level)
    return run(subcommand, config, params)
