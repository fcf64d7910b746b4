"""Finite sequential spatial (marked) point processes.

Ordered point sequences with densities relative to a Poisson-length
reference measure, insertion intensities, a directed clique factorisation
with a constructive recursion, birth-death and Metropolis-Hastings
samplers, and exact brute-force oracles on small discretized domains.
"""

__version__ = "0.1.0"

from .density import (
    NEG_INF,
    Model,
    TruncatedModel,
    append_ratio,
    intensity_model,
    log_density_from_intensities,
    seq_conditional_intensity,
    total_insertion_intensity,
)
from .errors import (
    ArgumentError,
    CapacityError,
    ConfigError,
    DegenerateModelError,
    ModelContractError,
    NumericEvaluationError,
    SeqppError,
    UnsupportedModeError,
)
from .geometry import (
    EMPTY,
    UNIT_WINDOW,
    MarkedPoint,
    PointSequence,
    Window,
    insert_at,
    remove_at,
)
from .marks import (
    NO_MARKS,
    MarkDistribution,
    fixed_radius_marks,
    label_marks,
    uniform_radius_marks,
)
from .relations import (
    NeighbourRelation,
    ball_relation,
    directed_neighbours,
    identity_relation,
    invader_territory_relation,
    mark_range_relation,
    settler_territory_relation,
    trivial_relation,
)

__all__ = [
    "__version__",
    "NEG_INF",
    "Model",
    "TruncatedModel",
    "append_ratio",
    "intensity_model",
    "log_density_from_intensities",
    "seq_conditional_intensity",
    "total_insertion_intensity",
    "ArgumentError",
    "CapacityError",
    "ConfigError",
    "DegenerateModelError",
    "ModelContractError",
    "NumericEvaluationError",
    "SeqppError",
    "UnsupportedModeError",
    "EMPTY",
    "UNIT_WINDOW",
    "MarkedPoint",
    "PointSequence",
    "Window",
    "insert_at",
    "remove_at",
    "NO_MARKS",
    "MarkDistribution",
    "fixed_radius_marks",
    "label_marks",
    "uniform_radius_marks",
    "NeighbourRelation",
    "ball_relation",
    "directed_neighbours",
    "identity_relation",
    "invader_territory_relation",
    "mark_range_relation",
    "settler_territory_relation",
    "trivial_relation",
]
