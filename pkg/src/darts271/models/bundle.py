"""Fitting all models at once and round-tripping them through a JSON artifact."""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime

from ..config import Config, resolve_cutoff
from ..core import winner
from ..dataset import Dataset, split
from .adjusted import AdjustedSimModel, DistanceVector, MultiplierVector, fit_adjusted_sim
from .logistic import LogisticModel, fit_logistic_model
from .null import NullModel
from .sdmm import SdmmModel, SdmmRatings, fit_sdmm
from .simulation import BasicSimModel, EmpiricalThrowDistribution, fit_basic_sim

SCHEMA_VERSION = 1


class EmptyTrainingData(Exception):
    pass


class UnknownModelName(Exception):
    def __init__(self, name: str, available: tuple[str, ...]):
        super().__init__(f"unknown model {name!r}; available: {', '.join(available)}")
        self.name = name


@dataclass(frozen=True)
class ModelBundle:
    """Everything `predict`, `evaluate`, and the live service need, in one file."""

    cutoff: datetime
    config: Config
    null: NullModel
    logistic: LogisticModel
    basic_sim: BasicSimModel
    adjusted_sim: AdjustedSimModel
    sdmm: SdmmModel
    roster_stats: dict[str, dict]
    schema_version: int = SCHEMA_VERSION

    @property
    def roster(self) -> frozenset[str]:
        return frozenset(self.roster_stats)

    def models(self) -> dict[str, object]:
        return {
            "null": self.null,
            "logistic": self.logistic,
            "basic_sim": self.basic_sim,
            "adjusted_sim": self.adjusted_sim,
            "sdmm": self.sdmm,
        }

    def model(self, name: str):
        if name == "modified_null":
            return NullModel(self.config.modified_null_divisor, name="modified_null")
        table = self.models()
        if name not in table:
            raise UnknownModelName(name, tuple(table) + ("modified_null",))
        return table[name]

    def predict_all(self, p1: str, p2: str, s1: float, s2: float) -> dict[str, float]:
        return {
            name: model.predict(p1, p2, s1, s2) for name, model in self.models().items()
        }


def roster_statistics(dataset: Dataset) -> dict[str, dict]:
    """Per-player headline numbers over the complete games of a dataset."""
    stats = {
        p: {"games": 0, "wins": 0, "win_rate": 0.0, "avg_points_per_throw": 0.0}
        for p in sorted(dataset.roster)
    }
    points: dict[str, list[int]] = {p: [] for p in stats}
    for game in dataset.games:
        won_by = winner(game)
        for player in (game.p1, game.p2):
            stats[player]["games"] += 1
            if player == won_by:
                stats[player]["wins"] += 1
        for rnd in game.rounds:
            points[game.p1].extend(rnd.p1_throws)
            points[game.p2].extend(rnd.p2_throws)
    for player, entry in stats.items():
        if entry["games"]:
            entry["win_rate"] = entry["wins"] / entry["games"]
        if points[player]:
            entry["avg_points_per_throw"] = sum(points[player]) / len(points[player])
    return stats


def fit_bundle(dataset: Dataset, config: Config) -> ModelBundle:
    """Split by the configured cutoff and fit all five models on the train half."""
    cutoff = resolve_cutoff(config, [g.start_time for g in dataset.games])
    train, _ = split(dataset, cutoff)
    if not train.games:
        raise EmptyTrainingData(f"no games before cutoff {cutoff.isoformat()}")
    reference_time = config.reference_time or cutoff
    rules = config.rules

    return ModelBundle(
        cutoff=cutoff,
        config=config,
        null=NullModel(config.null_divisor),
        logistic=fit_logistic_model(train, l2=config.logistic_l2, rules=rules),
        basic_sim=fit_basic_sim(
            train, n_sims=config.n_sims, seed=config.seed, rules=rules,
            round_cap=config.round_cap,
        ),
        adjusted_sim=fit_adjusted_sim(
            train, reference_time, n_sims=config.n_sims, seed=config.seed,
            rules=rules, round_cap=config.round_cap,
        ),
        sdmm=SdmmModel(
            fit_sdmm(train, config.augmentation_weight, config.threshold, rules),
            threshold=config.threshold,
        ),
        roster_stats=roster_statistics(dataset),
    )


def _distribution_to_json(dist: EmpiricalThrowDistribution) -> dict:
    return {"support": list(dist.support), "probabilities": list(dist.probabilities)}


def _distribution_from_json(raw: dict) -> EmpiricalThrowDistribution:
    return EmpiricalThrowDistribution(tuple(raw["support"]), tuple(raw["probabilities"]))


def bundle_to_json_dict(bundle: ModelBundle) -> dict:
    return {
        "schema_version": bundle.schema_version,
        "cutoff": bundle.cutoff.isoformat(timespec="minutes"),
        "config": bundle.config.to_dict(),
        "null": {"divisor": bundle.null.divisor},
        "logistic": {
            "c0": bundle.logistic.c0,
            "c1": bundle.logistic.c1,
            "c2": bundle.logistic.c2,
            "player_coefficients": bundle.logistic.player_coefficients,
        },
        "basic_sim": {
            "distributions": {
                p: _distribution_to_json(d)
                for p, d in sorted(bundle.basic_sim.distributions.items())
            },
            "league": _distribution_to_json(bundle.basic_sim.league),
        },
        "adjusted_sim": {
            "distance_vectors": {
                p: list(v.d) for p, v in sorted(bundle.adjusted_sim.distance_vectors.items())
            },
            "multiplier_vectors": {
                p: list(v.m) for p, v in sorted(bundle.adjusted_sim.multiplier_vectors.items())
            },
            "league_distance_vector": list(bundle.adjusted_sim.league_distance.d),
            "league_multiplier_vector": list(bundle.adjusted_sim.league_multiplier.m),
            "baselines": list(bundle.adjusted_sim.baselines),
            "reference_time": bundle.adjusted_sim.reference_time.isoformat(timespec="minutes"),
        },
        "sdmm": {"r1": bundle.sdmm.ratings.r1, "r2": bundle.sdmm.ratings.r2},
        "roster_stats": bundle.roster_stats,
    }


def bundle_from_json_dict(raw: dict) -> ModelBundle:
    if raw.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported bundle schema {raw.get('schema_version')!r}")
    config = Config.from_dict(raw["config"])
    rules = config.rules
    adj = raw["adjusted_sim"]
    return ModelBundle(
        cutoff=datetime.fromisoformat(raw["cutoff"]),
        config=config,
        null=NullModel(raw["null"]["divisor"]),
        logistic=LogisticModel(
            c0=raw["logistic"]["c0"],
            c1=raw["logistic"]["c1"],
            c2=raw["logistic"]["c2"],
            player_coefficients=dict(raw["logistic"]["player_coefficients"]),
        ),
        basic_sim=BasicSimModel(
            distributions={
                p: _distribution_from_json(d)
                for p, d in raw["basic_sim"]["distributions"].items()
            },
            league=_distribution_from_json(raw["basic_sim"]["league"]),
            n_sims=config.n_sims,
            seed=config.seed,
            rules=rules,
            round_cap=config.round_cap,
        ),
        adjusted_sim=AdjustedSimModel(
            distance_vectors={
                p: DistanceVector(tuple(v)) for p, v in adj["distance_vectors"].items()
            },
            multiplier_vectors={
                p: MultiplierVector(tuple(v)) for p, v in adj["multiplier_vectors"].items()
            },
            league_distance=DistanceVector(tuple(adj["league_distance_vector"])),
            league_multiplier=MultiplierVector(tuple(adj["league_multiplier_vector"])),
            reference_time=datetime.fromisoformat(adj["reference_time"]),
            baselines=tuple(adj["baselines"]),
            n_sims=config.n_sims,
            seed=config.seed,
            rules=rules,
            round_cap=config.round_cap,
        ),
        sdmm=SdmmModel(
            SdmmRatings(dict(raw["sdmm"]["r1"]), dict(raw["sdmm"]["r2"])),
            threshold=config.threshold,
        ),
        roster_stats={p: dict(v) for p, v in raw["roster_stats"].items()},
        schema_version=raw["schema_version"],
    )


def save_bundle(bundle: ModelBundle, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(bundle_to_json_dict(bundle), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_bundle(path: str) -> ModelBundle:
    with open(path, "r", encoding="utf-8") as fh:
        return bundle_from_json_dict(json.load(fh))
