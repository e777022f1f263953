import math

from src.types import OmegaConvention, OutputFormat, QuadratureScheme

SCHEMA_VERSION = 1
ENV_PREFIX = 'MIXEDMOMENTS_'

EXIT_OK = 0
EXIT_ASSERTION = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64

# precision
DEFAULT_WORKING_BITS = 128
MIN_WORKING_BITS = 64
DEFAULT_GUARD_BITS = 32
DEFAULT_ABS_TOL = 1e-10
DEFAULT_REL_TOL = 1e-10
DEFAULT_SCHEME = QuadratureScheme.adaptiveGauss
DEFAULT_MAX_REFINEMENTS = 8

# run config
DEFAULT_C_MAX = 50
DEFAULT_SEED = 20240601
DEFAULT_THREADS = 1
DEFAULT_OUTPUT_FORMAT = OutputFormat.json
DEFAULT_OMEGA = OmegaConvention.zeta1

# contour weights, G(s) = exp(a s^2)
MOLLIFIER_EISENSTEIN = 0.25
MOLLIFIER_HOLO = 0.25
MOLLIFIER_HOLO_ALT = 0.0
MOLLIFIER_P = 1.0
AFE_SIGMA = 1.0
LINE_STEP = 0.05
DECAY_A = 5

# arithmetic
C_DIRECT_MAX = 200
C_REFERENCE_MAX = 30

# modular forms
SUPPORTED_WEIGHTS = (12, 16, 18, 20, 22, 26)
MOMENT_WEIGHTS = (12, 16, 20)

# spectral windows
WINDOW_WIDTH_FACTOR = 1.5
EPS_POWER = 0.05

# sieve
SIEVE_EPS = 0.05
LS1_CONSTANT = 8.0
LS2_CONSTANT = 16.0

# recorded suite constants
WEIL_RATIO_CONSTANT = 4.0
G_SECOND_MOMENT_CONSTANT = 64.0
DECAY_SUP_CONSTANT = 1e3
P_ENVELOPE_CONSTANT = 2.0
H_PLUS_MAGNITUDE_CONSTANT = 10.0
H_MINUS_MAGNITUDE_CONSTANT = 10.0
DIAGONAL_MAASS_CONSTANT = 10.0
DIAGONAL_HOLO_CONSTANT = 10.0
S_HOLO_CONSTANT = 10.0

EULER_GAMMA = 0.57721566490153286060651209008240243
LOG_2 = math.log(2.0)
LOG_PI = math.log(math.pi)

# off-diagonal desk scale
DESK_BLOCK_MAX = 64
DESK_C_MAX = 16
IBP_ORDER = 6
POISSON_TAIL_TOL = 1e-8
DUAL_X_MAX = 512
GRID_NODES_MAX = 4096
REGIME_SLACK = 16.0
F_DECAY_ORDER = 4
