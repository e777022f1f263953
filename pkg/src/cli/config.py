"""RunConfig and its resolution: defaults < config file < MIXEDMOMENTS_* environment < flags."""
import logging
import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Optional

from src.const import (DEFAULT_ABS_TOL, DEFAULT_C_MAX, DEFAULT_OMEGA, DEFAULT_OUTPUT_FORMAT, DEFAULT_REL_TOL,
                       DEFAULT_SEED, DEFAULT_THREADS, DEFAULT_WORKING_BITS, ENV_PREFIX, MIN_WORKING_BITS)
from src.errors import UsageError
from src.types import OmegaConvention, OutputFormat

logger = logging.getLogger(__name__)

C_FORMS = ('both', 'printed', 'derived')
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')
CONFIG_ENV = ENV_PREFIX + 'CONFIG'

# flag spellings that differ from the field name
ALIASES = {
    'cmax': 'c_max',
    'format': 'output_format',
    'omega': 'omega_convention',
}


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = DEFAULT_WORKING_BITS
    abs_tol: float = DEFAULT_ABS_TOL
    rel_tol: float = DEFAULT_REL_TOL
    c_max: int = DEFAULT_C_MAX
    truncation_multiplier: float = 1.0
    seed: int = DEFAULT_SEED
    threads: int = DEFAULT_THREADS
    output_format: OutputFormat = DEFAULT_OUTPUT_FORMAT
    out: Optional[str] = None
    log_level: str = 'WARNING'
    mollifier_scale: Optional[float] = None
    c_constant_form: str = 'both'
    omega_convention: OmegaConvention = DEFAULT_OMEGA

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise UsageError('tolerances must be positive')
        if self.threads < 1:
            raise UsageError('threads must be >= 1')
        if self.precision_bits < MIN_WORKING_BITS:
            raise UsageError('precision_bits must be >= %d' % MIN_WORKING_BITS)
        if self.c_max < 1:
            raise UsageError('c_max must be >= 1')
        if self.truncation_multiplier <= 0:
            raise UsageError('truncation_multiplier must be positive')
        if self.mollifier_scale is not None and self.mollifier_scale < 0:
            raise UsageError('mollifier_scale must be >= 0')
        if self.c_constant_form not in C_FORMS:
            raise UsageError('c_constant_form must be one of %s' % ', '.join(C_FORMS))
        if self.log_level not in LOG_LEVELS:
            raise UsageError('log_level must be one of %s' % ', '.join(LOG_LEVELS))

    def as_dict(self):
        """the settings that shape a report; out and log_level do not"""
        out = asdict(self)
        del out['out'], out['log_level']
        out['output_format'] = self.output_format.name
        out['omega_convention'] = self.omega_convention.name
        return out


def field_name(key):
    key = key.strip().lower().replace('-', '_')
    key = ALIASES.get(key, key)
    if key not in _FIELDS:
        raise UsageError('unknown configuration key %r' % key)
    return key


def _enum(kind, text):
    try:
        return kind[text.strip().lower()]
    except KeyError:
        raise UsageError('%r is not one of %s' % (text, ', '.join(m.name for m in kind))) from None


def coerce(key, value):
    """text (from a file or the environment) or a parsed flag value -> the field's type"""
    if not isinstance(value, str):
        return value
    text = value.strip()
    try:
        if key in ('precision_bits', 'c_max', 'seed', 'threads'):
            return int(text)
        if key in ('abs_tol', 'rel_tol', 'truncation_multiplier'):
            return float(text)
        if key == 'mollifier_scale':
            return None if text.lower() in ('', 'none', 'default') else float(text)
    except ValueError:
        raise UsageError('%s: cannot read %r' % (key, value)) from None
    if key == 'output_format':
        return _enum(OutputFormat, text)
    if key == 'omega_convention':
        return _enum(OmegaConvention, text)
    if key == 'log_level':
        return text.upper()
    if key == 'out':
        return text or None
    return text


def read_config_file(path):
    """{field: value} from `key = value` lines; # starts a comment"""
    out = {}
    try:
        with open(path, encoding='utf-8') as handle:
            lines = handle.readlines()
    except OSError as err:
        raise UsageError('cannot read config file %s: %s' % (path, err)) from None
    for number, line in enumerate(lines, 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise UsageError('%s:%d: expected key = value' % (path, number))
        key, value = line.split('=', 1)
        key = field_name(key)
        out[key] = coerce(key, value)
    logger.debug('config file %s: %s', path, out)
    return out


def read_environment(environ=None):
    environ = os.environ if environ is None else environ
    out = {}
    for name, value in environ.items():
        if not name.startswith(ENV_PREFIX) or name == CONFIG_ENV:
            continue
        key = field_name(name[len(ENV_PREFIX):])
        out[key] = coerce(key, value)
    return out


def resolve(flags=None, config_file=None, environ=None):
    """RunConfig from the layers; flags holds only options given on the command line"""
    environ = os.environ if environ is None else environ
    config_file = config_file or environ.get(CONFIG_ENV)
    values = {}
    if config_file:
        values.update(read_config_file(config_file))
    values.update(read_environment(environ))
    for key, value in (flags or {}).items():
        key = field_name(key)
        values[key] = coerce(key, value)
    return replace(RunConfig(), **values)


_FIELDS = {f.name for f in fields(RunConfig)}
