"""Fourth-order dispersive closed-curve flows on compact Kahler symmetric
targets: pseudospectral discretisation, regularised time integration,
gauge-transformed energy diagnostics, and an executable identity suite.
"""

from .curves import (
    DiscreteCurve,
    GridSpec,
    TangentField,
    covariant_derivative,
    higher_cov_derivative,
    l2_inner,
    l2_norm,
    sobolev_norm,
    velocity_field,
)
from .energies import (
    energy_bi,
    energy_dirichlet,
    energy_star,
    energy_total,
    gradient_total,
    hamiltonian_vector_field,
)
from .errors import (
    ConfigError,
    CurveFlowError,
    InvalidArgumentError,
    NumericalAbortError,
    PreconditionError,
    TimeCutReachedError,
    VerificationError,
)
from .flows import (
    FlowParams,
    HamiltonianParams,
    SurfaceParams,
    map_hamiltonian_params,
    map_lpd_params,
    map_surface_params,
    rhs_lpd,
    rhs_main,
    rhs_regularized,
    rhs_surface,
)
from .gauge import (
    GaugeConstants,
    cancellation_residual,
    commutator_probe,
    energy_Nk,
    gauge_constants,
    gauge_corrector,
    gauge_field,
)
from .identities import (
    IdentityReport,
    check_Ai_symmetry,
    check_curvature_properties,
    check_parallel_curvature,
    check_resolution_identities,
    check_surface_reduction,
)
from .initial_data import (
    great_circle,
    latitude_circle,
    oscillatory_probe,
    perturbed_great_circle,
    projector_loop,
    random_smooth_curve,
    random_tangent_field,
)
from .integrators import (
    DiagnosticsRecord,
    IntegrationResult,
    IntegratorConfig,
    cfl_bound,
    epsilon_sweep,
    gradient_check,
    integrate,
)
from .targets import ManifoldPoint, TangentVector, TargetManifold

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
