"""The five in-game win-probability models plus the modified null variant.

Each model exposes ``predict(p1, p2, s1, s2) -> float in [0, 1]`` estimating
the probability that player 1 wins given the current totals, and a ``name``
used in reports. All models are orientation-symmetric:
``predict(p1, p2, s1, s2) == 1 - predict(p2, p1, s2, s1)``.
"""

from .null import NullModel
from .logistic import LogisticModel, fit_logistic_model
from .simulation import (
    BasicSimModel,
    EmpiricalThrowDistribution,
    SimOutcome,
    empirical_distribution,
    fit_basic_sim,
    sim_predict,
    simulate_remaining,
    win_probability_batch,
)
from .adjusted import (
    AdjustedSimModel,
    DistanceVector,
    MultiplierVector,
    adjusted_throw,
    fit_adjusted_sim,
    fit_distance_vector,
    fit_multiplier_vector,
    multiplier_from_throws,
)
from .sdmm import (
    SdmmModel,
    SdmmRatings,
    SdmmSystem,
    build_sdmm_system,
    fit_sdmm,
    sdmm_predict,
)
from .bundle import (
    EmptyTrainingData,
    ModelBundle,
    UnknownModelName,
    fit_bundle,
    load_bundle,
    save_bundle,
)

MODEL_NAMES = ("null", "logistic", "basic_sim", "adjusted_sim", "sdmm")

__all__ = [
    "AdjustedSimModel",
    "BasicSimModel",
    "DistanceVector",
    "EmpiricalThrowDistribution",
    "EmptyTrainingData",
    "LogisticModel",
    "MODEL_NAMES",
    "ModelBundle",
    "MultiplierVector",
    "NullModel",
    "SdmmModel",
    "SdmmRatings",
    "SdmmSystem",
    "SimOutcome",
    "UnknownModelName",
    "adjusted_throw",
    "build_sdmm_system",
    "empirical_distribution",
    "fit_adjusted_sim",
    "fit_basic_sim",
    "fit_bundle",
    "fit_distance_vector",
    "fit_logistic_model",
    "fit_multiplier_vector",
    "fit_sdmm",
    "multiplier_from_throws",
    "load_bundle",
    "save_bundle",
    "sdmm_predict",
    "sim_predict",
    "simulate_remaining",
    "win_probability_batch",
]
