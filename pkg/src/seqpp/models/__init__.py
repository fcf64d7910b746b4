"""Concrete sequential spatial models."""

from .pairwise import (
    PairwiseModel,
    pairwise_log_density,
    pairwise_quadratic_model,
    quadratic_interaction,
)
from .poisson import PoissonModel
from .scaling import (
    ScalingTransform,
    scaled_conditional_intensity,
    scaled_model,
    scaled_relation,
)
from .softcore import (
    SoftCoreModel,
    softcore_conditional_intensity,
    softcore_log_density,
)
from .ssi import (
    LocationDensity,
    SSIIntensity,
    SSIModel,
    admissible_integral,
    discretise_ssi,
    ssi_conditional_intensity,
    ssi_log_density,
    truncated_poisson_weights,
    uniform_location_density,
)

__all__ = [
    "PairwiseModel",
    "pairwise_log_density",
    "pairwise_quadratic_model",
    "quadratic_interaction",
    "PoissonModel",
    "ScalingTransform",
    "scaled_conditional_intensity",
    "scaled_model",
    "scaled_relation",
    "SoftCoreModel",
    "softcore_conditional_intensity",
    "softcore_log_density",
    "LocationDensity",
    "SSIIntensity",
    "SSIModel",
    "admissible_integral",
    "discretise_ssi",
    "ssi_conditional_intensity",
    "ssi_log_density",
    "truncated_poisson_weights",
    "uniform_location_density",
]
