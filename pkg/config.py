"""
Configuration constants for KID Verifier.
All tolerances, orders and sampling defaults live here; no magic numbers elsewhere.
"""

import math

# Tool identity
TOOL_NAME = "kidverify"
TOOL_VERSION = "1.0.0"
REPORT_SCHEMA_VERSION = 1

# Jet settings
DEFAULT_JET_ORDER = 3          # third metric derivatives feed d^nabla Ric
MAX_JET_ORDER = 6
MAX_CHART_DIM = 6

# Sampling
DEFAULT_SAMPLES = 100
MIN_SAMPLES = 10
DEFAULT_SEED = 7
DEFAULT_MARGIN = 0.05          # fraction of each non-periodic axis kept clear

# Metric checks
SINGULAR_COND_LIMIT = 1e12     # condition number above which g counts as singular
RANDOM_AMPLITUDE_LIMIT = 0.3
RANDOM_MODES_PER_ENTRY = 3

# Identity tolerances (absolute, orthonormal frame)
IDENTITY_TOL = 1e-9
SPHERE_KID_TOL = 1e-10
WARP_KID_TOL = 1e-7
BIANCHI_TOL = 1e-8
HARMONIC_TOL = 1e-7
SCAL_VARIATION_TOL = 1e-7
SELF_CHECK_TOL = 1e-10
TRACE_TOL = 1e-10
NEGATIVE_CONTROL_FLOOR = 1e-4  # perturbed fixtures must exceed this somewhere

# Perturbations
PERTURBATION_AMPLITUDE = 0.01
BUMP_WIDTH = 0.5

# Warp ODE
ODE_METHOD = "DOP853"
ODE_RTOL = 1e-12
ODE_ATOL = 1e-14
FIRST_INTEGRAL_TOL = 1e-10
PERIODICITY_TOL = 1e-8
FIXED_POINT_TOL = 1e-14
H_COLLAPSE = 1e-6              # h below this means the orbit hit h = 0
H_ESCAPE = 1e6
PERIOD_SEARCH_DOUBLINGS = 6
EVENT_GUARD_FRACTION = 0.05    # ignore returns earlier than this share of the period hint
FIT_SAMPLES = 128
FIT_MODES = 24
FIT_TOL = 1e-9
FIT_DROP_TOL = 1e-16
CSV_SAMPLES = 200

# Warped fixture defaults ("warped:ode")
WARP_DEFAULT_N = 3
WARP_DEFAULT_SCAL = 6.0
WARP_DEFAULT_DH0 = 0.1
WARP_DEFAULT_C = 0.7

# Kernel finder
KERNEL_SVD_TOL = 1e-6
KERNEL_GRID = 256
REDUCTION_TRIALS = 20
REDUCTION_TOL = 1e-8
MONODROMY_DET_TOL = 1e-8

# Killing development
F_FLOOR_FRACTION = 0.1
DEVELOPMENT_CONSTANCY_TOL = 1e-7
DEVELOPMENT_T_RANGE = (-1.0, 1.0)
DEVELOPMENT_JET_ORDER = 2
DETERMINANT_TOL = 1e-10
WARPED_EINSTEIN_TOL = 1e-6
EINSTEIN_TOL = 1e-8
STATICITY_TOL = 1e-9

# Refinement
REFINE_GROWTH_SLACK = 0.1      # relative rise tolerated between levels
REFINE_NOISE_FLOOR = 1e-9
REFINE_ODE_RTOLS = (1e-8, 1e-10, 1e-12)

# Output
OUTPUT_DIR_ENV = "KIDVERIFY_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "reports"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Exit codes
EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

# Convention table emitted with every report
CONVENTIONS = {
    "riemann_operator": "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z",
    "riemann_lowering": "R(X,Y,Z,W) = g(R(X,Y)W, Z); Ricci identity R(X,Y,Z,a) = "
                        "nabla2_{X,Y}a(Z) - nabla2_{Y,X}a(Z)",
    "ricci": "Ric(Y,W) = trace(X -> R(X,Y)W); positive on spheres",
    "laplacian": "positive: Delta f = -tr_g Hess f",
    "divergence": "delta S(X1..Xp) = -sum_i nabla_{e_i} S(e_i, X1..Xp)",
    "hessian_divergence": "delta Hess f = d(Delta f) - Ric(grad f) holds as printed",
    "bianchi": "delta Ric = -1/2 d Scal",
    "lie_derivative": "L_a g = 2 delta* a; antisymmetric part of nabla a is 1/2 da",
    "wedge": "(w ^ S)(X,Y,Z) = w(X)S(Y,Z) - w(Y)S(X,Z)",
    "nabla_slot": "first slot of nabla T is the derivative direction",
}

TWO_PI = 2.0 * math.pi
