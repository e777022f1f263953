import logging
import math

from src.const import SCHEMA_VERSION
from src.specialfn.quadrature import PrecisionPolicy, QuadratureSpec

logger = logging.getLogger(__name__)


class Suite:
    """A named set of checks over module operations.

    Subclasses set `name` (the CLI subcommand), declare their own parameters in
    `parameters` as (flag, type, default, help) and fill checks in solve().
    """
    name = 'suite'
    parameters = ()

    def __init__(self, config, **params):
        self.config = config
        self.params = {flag: default for flag, _, default, _ in self.parameters}
        self.params.update({k: v for k, v in params.items() if v is not None})
        self.checks = []
        self.terms = {}
        self.flags = []
        self.moment = None

    def __str__(self):
        return self.getName() + ' ' + (self.__doc__ or '').strip()

    def getName(self):
        return 'Verification suite'

    @classmethod
    def addArguments(cls, parser):
        for flag, kind, default, text in cls.parameters:
            parser.add_argument('--' + flag, dest=flag, type=kind, default=None,
                                help='%s (default %s)' % (text, default))

    def restart(self):
        self.checks = []
        self.terms = {}
        self.flags = []
        self.moment = None

    # --- shared settings

    def quad(self):
        return QuadratureSpec(abs_tol=self.config.abs_tol, rel_tol=self.config.rel_tol)

    def prec(self):
        return PrecisionPolicy(self.config.precision_bits)

    # --- recording

    def check(self, name, value, bound, passed=None):
        """record value against bound; passes when value <= bound unless passed is given"""
        value, bound = _plain(value), _plain(bound)
        if passed is None:
            passed = value <= bound
        passed = bool(passed)
        self.checks.append({'name': name, 'value': value, 'bound': bound, 'pass': passed})
        (logger.info if passed else logger.warning)('%s: %s: %r vs %r -> %s', self.name, name, value, bound,
                                                    'pass' if passed else 'FAIL')
        return passed

    def note(self, name, value):
        self.terms[name] = _plain(value)

    def flag(self, text):
        if text not in self.flags:
            self.flags.append(text)

    def solve(self):
        raise NotImplementedError

    @property
    def passed(self):
        ok = all(c['pass'] for c in self.checks)
        if self.moment is not None and self.moment.passed is not None:
            ok = ok and self.moment.passed
        return ok

    def report(self):
        out = {
            'schema_version': SCHEMA_VERSION,
            'suite': self.name,
            'pass': self.passed,
            'parameters': {k: _plain_tree(v) for k, v in self.params.items()},
            'config': self.config.as_dict(),
            'checks': [dict(c) for c in self.checks],
            'terms': dict(self.terms),
            'flags': list(self.flags),
        }
        if self.moment is not None:
            out['moment'] = {k: _plain_tree(v) for k, v in self.moment.as_dict().items()}
        return out

    def run(self):
        self.restart()
        logger.info('running %s with %s', self.name, self.params)
        self.solve()
        return self.report()


def number_list(text):
    """'20,50,100' -> [20.0, 50.0, 100.0]"""
    return [float(x) for x in str(text).split(',') if x.strip()]


def int_list(text):
    return [int(x) for x in str(text).split(',') if x.strip()]


def _plain(value):
    """JSON-safe scalar: Python float/int/bool/str/None"""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return int(value)
    if isinstance(value, complex):
        return [float(value.real), float(value.imag)]
    try:
        return float(value)
    except TypeError:
        return str(value)


def _plain_tree(value):
    if isinstance(value, dict):
        return {str(k): _plain_tree(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain_tree(v) for v in value]
    out = _plain(value)
    return None if isinstance(out, float) and math.isnan(out) else out
