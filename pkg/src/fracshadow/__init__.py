"""Fractional integrals as ordinary areas under deformed time scales.

The package turns fractional-order integrals and derivatives into
Riemann-Stieltjes integrals against time-scale functions, gives them a
geometric reading (a 3D "fence" whose wall shadows are the classical
and fractional integrals), and a kinematic one (distances measured by
two differently ticking clocks).  An HTTP service and a thin CLI expose
the same operations.
"""

from .core import GAMMA_MAX, Grid, Interval, Order, default_grading, gamma, make_grid
from .errors import (
    DomainError,
    EvalDomainError,
    ExpressionError,
    FracshadowError,
    NonDifferentiableError,
    ParseError,
    UnknownIdentifierError,
)
from .expr import Expr, differentiate, evaluate, evaluate_array, parse, to_source
from .fence import (
    Fence,
    Shadow,
    Snapshot,
    SnapshotSeries,
    Wall,
    build_fence,
    fence_basis_track,
    shadow,
    snapshot_series,
)
from .kinematics import (
    ClockModel,
    DeformationWarning,
    SpeedRecord,
    SpeedRecovery,
    TABLE1_SPEEDS,
    distance_fractional,
    distance_individual,
    distance_observer_continuous,
    distance_observer_discrete,
    recover_individual_speed,
)
from .operators import (
    OperatorSpec,
    apply_operator,
    caputo_derivative,
    feller_potential,
    gl_derivative,
    observer_velocity,
    riesz_potential,
    rl_derivative,
    rl_integral_left,
    rl_integral_right,
    volterra_convolution,
)
from .quad import QuadResult, classical_integrate, product_integrate, stieltjes
from .timescale import (
    FellerScale,
    LeftRLScale,
    RieszScale,
    RightRLScale,
    TimeScale,
    VolterraScale,
    scale_feller,
    scale_left,
    scale_riesz,
    scale_right,
    scale_volterra,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "FracshadowError",
    "ExpressionError",
    "ParseError",
    "UnknownIdentifierError",
    "EvalDomainError",
    "NonDifferentiableError",
    "DomainError",
    # expressions
    "Expr",
    "parse",
    "evaluate",
    "evaluate_array",
    "differentiate",
    "to_source",
    # numeric primitives
    "gamma",
    "GAMMA_MAX",
    "Order",
    "Interval",
    "Grid",
    "make_grid",
    "default_grading",
    # time scales
    "TimeScale",
    "LeftRLScale",
    "RightRLScale",
    "RieszScale",
    "VolterraScale",
    "FellerScale",
    "scale_left",
    "scale_right",
    "scale_riesz",
    "scale_volterra",
    "scale_feller",
    # quadrature
    "QuadResult",
    "stieltjes",
    "product_integrate",
    "classical_integrate",
    # operators
    "OperatorSpec",
    "apply_operator",
    "rl_integral_left",
    "rl_integral_right",
    "riesz_potential",
    "feller_potential",
    "volterra_convolution",
    "rl_derivative",
    "caputo_derivative",
    "gl_derivative",
    "observer_velocity",
    # fence geometry
    "Wall",
    "Fence",
    "Shadow",
    "Snapshot",
    "SnapshotSeries",
    "build_fence",
    "shadow",
    "snapshot_series",
    "fence_basis_track",
    # kinematics
    "TABLE1_SPEEDS",
    "DeformationWarning",
    "SpeedRecord",
    "ClockModel",
    "SpeedRecovery",
    "distance_individual",
    "distance_observer_discrete",
    "distance_observer_continuous",
    "distance_fractional",
    "recover_individual_speed",
]
