"""Transient matter-wave dynamics of a beam released by a moving mirror.

Exact closed-form wavefunctions (sudden release and finite mirror
velocity), fringe/visibility analysis on the universal Cornu curves,
and independent numerical oracles for validation.
"""

from .analysis import (
    AnalysisError,
    DensityProfile,
    FringeStats,
    ScanPoint,
    WidthScalingResult,
    cornu_theta,
    enhancement_scan,
    fringe_scale,
    fringe_width_scaling,
    main_fringe,
    profile,
    universal_enhanced,
    universal_ordinary,
    ENHANCED_PEAK,
    ORDINARY_PEAK,
)
from .oracle import (
    ComparisonReport,
    OracleConfig,
    OracleConfigError,
    OracleNumericalError,
    QuadratureResult,
    compare,
    default_config,
    evolve_grid,
    evolve_quadrature,
)
from .physics import (
    HBAR,
    RB87_MASS,
    SPECIES_MASSES,
    MirrorKind,
    MirrorLaw,
    PhysicalContext,
    Scenario,
    UnknownUnitError,
    beam_velocity,
    from_si,
    to_si,
)
from .specialfn import (
    SpecialFunctionOverflow,
    erfc_complex,
    faddeeva,
    fresnel,
    fresnel_series,
    gamma_half,
)
from .waves import (
    CriticalPoints,
    WaveComponents,
    classical_density,
    critical_points,
    initial_state,
    moshinsky_asymptotic,
    moshinsky_m,
    moshinsky_z,
    propagator_free,
    propagator_moving_wall,
    psi_moving,
    psi_near_limit,
    psi_sudden,
)

__version__ = "0.1.0"
