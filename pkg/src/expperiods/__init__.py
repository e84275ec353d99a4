"""Exact connections and certified numerics for exponential period integrals.

The package derives the differential system satisfied by integrals of a
pencil of exponentials e^{g(u, t)} on an affine or punctured affine line,
exactly over Q(t); isolates the singular parameter values into certified
balls; builds rapid-decay integration cycles; evaluates the resulting period
integrals with adaptive contour quadrature; and numerically verifies the
structural identities (solution property, coboundary vanishing, perfect
duality, monodromy consistency).
"""

from .cohomology import (
    CONNECTION_CONVENTION,
    CohomologyBasis,
    ConnectionMatrix,
    FiberType,
    ProblemSpec,
    ScalarODE,
    connection_matrix,
    cyclic_ode,
    fiber_basis,
    reduce_form,
    twisted_differential,
)
from .cycles import (
    CycleBasis,
    EndTag,
    RapidDecayCycle,
    Sector,
    SkeletonNode,
    ValleyConfig,
    cycle_basis,
    track_cycles,
    valley_config,
)
from .errors import (
    AtSingularT,
    DegenerateFamily,
    EngineError,
    LoopHitsSingularity,
    NonDecayingTail,
    PrecisionExhausted,
    RankZero,
    ReductionDiverges,
    SingularOverQt,
    SingularProximity,
    SpecFormatError,
    StepCollision,
    ToleranceNotMet,
)
from .quadrature import (
    PeriodMatrix,
    PeriodValue,
    adaptive_polyline,
    integrate_absolute,
    integrate_period,
    period_matrix,
)
from .singular import (
    RootBall,
    SingularSet,
    resultant_u,
    root_isolate,
    singular_set,
    squarefree_decomposition,
)
from .symbolic import (
    LaurentPoly,
    RatFun,
    TPoly,
    parse_laurent,
    parse_ratfun,
    parse_tpoly,
)
from .verify import (
    STOKES_SEED,
    CheckRecord,
    MonodromyResult,
    VerificationReport,
    check_duality,
    check_ode,
    check_stokes,
    monodromy,
    random_gauge,
    run_all,
)

__version__ = "0.1.0"

__all__ = [
    "CONNECTION_CONVENTION",
    "AtSingularT",
    "CheckRecord",
    "CohomologyBasis",
    "ConnectionMatrix",
    "CycleBasis",
    "DegenerateFamily",
    "EndTag",
    "EngineError",
    "FiberType",
    "LaurentPoly",
    "LoopHitsSingularity",
    "MonodromyResult",
    "NonDecayingTail",
    "PeriodMatrix",
    "PeriodValue",
    "PrecisionExhausted",
    "ProblemSpec",
    "RankZero",
    "RapidDecayCycle",
    "RatFun",
    "ReductionDiverges",
    "RootBall",
    "STOKES_SEED",
    "ScalarODE",
    "Sector",
    "SingularOverQt",
    "SingularProximity",
    "SingularSet",
    "SkeletonNode",
    "SpecFormatError",
    "StepCollision",
    "TPoly",
    "ToleranceNotMet",
    "ValleyConfig",
    "VerificationReport",
    "adaptive_polyline",
    "check_duality",
    "check_ode",
    "check_stokes",
    "connection_matrix",
    "cycle_basis",
    "cyclic_ode",
    "fiber_basis",
    "integrate_absolute",
    "integrate_period",
    "monodromy",
    "parse_laurent",
    "parse_ratfun",
    "parse_tpoly",
    "period_matrix",
    "random_gauge",
    "reduce_form",
    "resultant_u",
    "root_isolate",
    "run_all",
    "singular_set",
    "squarefree_decomposition",
    "track_cycles",
    "twisted_differential",
    "valley_config",
    "__version__",
]
