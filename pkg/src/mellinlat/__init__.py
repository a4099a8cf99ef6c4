"""Mellin-type approximation operators with vector-lattice values."""

from .lattice import (
    DEFAULT_GRID_SIZE,
    LatticeValue,
    OrderUnit,
    ShapeMismatchError,
    lat_abs,
    lat_inf,
    lat_leq,
    lat_linear,
    lat_pnorm,
    lat_scale,
    lat_sup,
)
from .quadrature import (
    DEFAULT_CONFIG,
    LogInterval,
    NumericError,
    QuadratureConfig,
    d_ln,
    integrate_haar,
    integrate_haar_lattice,
)
from .kernels import (
    GaussWeierstrassKernel,
    KernelFamily,
    LogUniformKernel,
    MomentKernel,
    PoissonCauchyKernel,
    ScaledKernel,
    TailEstimate,
    double_factorial,
    erf,
    make_kernel,
    mpc_tail_limit_check,
    normalization,
    tail_mass,
    tail_mass_numeric,
    window_integral,
    window_integral_many,
    window_lq_diagnostic,
)
from .pointwise import (
    Comparator,
    PointwiseMap,
    apply_map,
    deviation,
    identity_map,
    lipschitz_check,
    make_map,
    saturating_map,
)
from .operators import (
    SGrid,
    Signal,
    apply_operator,
    hat_signal,
    indicator_signal,
    operator_curve,
    parse_signal,
    signal_eval,
    uniform_error,
)
from .modular import (
    ModularReport,
    ModularValue,
    modular_of,
    modular_properties_check,
    modular_table,
    modular_tail_bound,
    phi_pow,
)
from .singularity import (
    SingularityParams,
    SingularityReport,
    check_compact_tail,
    check_identity_approx,
    check_index_stability,
    check_positivity,
    check_tail_vanishing,
    check_total_mass,
    full_report,
)

__version__ = "0.1.0"
