"""Numerical laboratory for a normalized two-species competitive system
near its coexistence threshold: closed-form equilibria and spectra, adaptive
integration with dense output and event location, corridor-transient
statistics, and interaction-parameter regime maps.

Hot kernels are numba-compiled when available; set
``LVCORRIDOR_DISABLE_NUMBA=1`` to force the pure-Python path (results are
bit-identical either way).
"""

__version__ = "0.1.0"

from .corridor import (
    CorridorSeries,
    corridor_analysis,
    equilibrium_gap,
    indicator,
)
from .errors import (
    ConvergenceLostError,
    DegenerateGapError,
    HorizonExceededError,
    IntegrationError,
    InvalidStateError,
    InvarianceBreachError,
    NoInteriorEquilibriumError,
    StepSizeUnderflowError,
    TrajectoryMismatchError,
)
from .integrator import (
    EventHit,
    EventSpec,
    SolverConfig,
    Trajectory,
    convergence_time,
    dense_eval,
    integrate,
)
from .model import (
    EquilibriumInfo,
    EquilibriumReport,
    Params,
    SpectralSummary,
    StabilityClass,
    boundary_spectra,
    classify_eigenvalues,
    equilibrium_report,
    interior_equilibrium,
    interior_spectrum,
    jacobian,
    near_critical_family,
    require_interior,
    vector_field,
)
from .regime_map import (
    MapThresholds,
    RegimeClass,
    RegimeGrid,
    capacity_contour,
    classify_point,
    gap_contour,
    sweep,
    symmetry_line,
)

__all__ = [
    "__version__",
    "Params", "StabilityClass", "EquilibriumInfo", "EquilibriumReport",
    "SpectralSummary", "vector_field", "jacobian", "interior_equilibrium",
    "require_interior", "boundary_spectra", "interior_spectrum",
    "equilibrium_report", "near_critical_family", "classify_eigenvalues",
    "SolverConfig", "EventSpec", "EventHit", "Trajectory", "integrate",
    "dense_eval", "convergence_time",
    "CorridorSeries", "equilibrium_gap", "indicator", "corridor_analysis",
    "MapThresholds", "RegimeClass", "RegimeGrid", "classify_point", "sweep",
    "gap_contour", "capacity_contour", "symmetry_line",
    "InvalidStateError", "NoInteriorEquilibriumError", "DegenerateGapError",
    "TrajectoryMismatchError", "IntegrationError", "StepSizeUnderflowError",
    "InvarianceBreachError", "HorizonExceededError", "ConvergenceLostError",
]
