"""Command-line entry point: generate, fit, predict, evaluate, stats, serve.

Every command is deterministic given its inputs, config, and seed. Validation
problems exit with code 1 and an error JSON on stderr; unexpected failures
exit with code 2.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from datetime import datetime

from . import evaluation
from .config import Config, ConfigError, load_config
from .core import DartsError
from .dataset import IngestError, parse_csv, split, summarize
from .models import (
    EmptyTrainingData,
    UnknownModelName,
    fit_bundle,
    load_bundle,
    save_bundle,
)
from .models import MODEL_NAMES
from .synthgen import GenerationError, PlanError, SeasonPlan, default_profiles, write_season

VALIDATION_ERRORS = (
    ConfigError,
    DartsError,
    EmptyTrainingData,
    GenerationError,
    IngestError,
    PlanError,
    UnknownModelName,
    evaluation.EvaluationError,
    FileNotFoundError,
    ValueError,
)


def _fail(code: str, message: str, detail=None) -> None:
    envelope = {"code": code, "message": message}
    if detail is not None:
        envelope["detail"] = detail
    print(json.dumps(envelope), file=sys.stderr)


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _config_from_args(args) -> Config:
    config = load_config(args.config) if getattr(args, "config", None) else Config()
    overrides = {}
    for key in (
        "cutoff",
        "cutoff_quantile",
        "reference_time",
        "n_sims",
        "seed",
        "null_divisor",
        "logistic_l2",
        "augmentation_weight",
        "threshold",
        "round_cap",
    ):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "threshold_exclusive", False):
        overrides["threshold_inclusive"] = False
    return config.override(**overrides)


def cmd_gen(args) -> int:
    plan = SeasonPlan(
        players=default_profiles(args.players, args.seed),
        n_games=args.games,
        start=datetime.fromisoformat(args.start),
        end=datetime.fromisoformat(args.end),
        seed=args.seed,
    )
    csv_path, truth_path = write_season(
        plan, args.out, truth_replicas=args.truth_replicas
    )
    _emit({"season_csv": csv_path, "ground_truth": truth_path, "games": args.games})
    return 0


def cmd_fit(args) -> int:
    config = _config_from_args(args)
    dataset = parse_csv(args.data, rules=config.rules)
    bundle = fit_bundle(dataset, config)
    save_bundle(bundle, args.out)
    train, test = split(dataset, bundle.cutoff)
    _emit(
        {
            "out": args.out,
            "cutoff": bundle.cutoff.isoformat(timespec="minutes"),
            "players": len(dataset.roster),
            "train_games": len(train.games),
            "test_games": len(test.games),
        }
    )
    return 0


def cmd_predict(args) -> int:
    bundle = load_bundle(args.model)
    if args.model_name:
        model = bundle.model(args.model_name)
        probabilities = {model.name: model.predict(args.p1, args.p2, args.s1, args.s2)}
    else:
        probabilities = bundle.predict_all(args.p1, args.p2, args.s1, args.s2)
    _emit(
        {
            "p1": args.p1,
            "p2": args.p2,
            "s1": args.s1,
            "s2": args.s2,
            "probabilities": probabilities,
        }
    )
    return 0


def cmd_evaluate(args) -> int:
    bundle = load_bundle(args.model)
    dataset = parse_csv(args.data, rules=bundle.config.rules)
    _, test = split(dataset, bundle.cutoff)
    if not test.games:
        raise evaluation.EmptyFilter("no games on or after the cutoff to evaluate")
    names = args.models.split(",") if args.models else list(MODEL_NAMES)
    models = {name: bundle.model(name.strip()) for name in names}
    traces = evaluation.build_traces(models, test, bundle.config.rules)
    report = evaluation.build_report(traces)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(report.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(evaluation.report_to_text(report), end="")
    return 0


def cmd_stats(args) -> int:
    dataset = parse_csv(args.data, allow_incomplete=True)
    stats = summarize(dataset)
    payload = stats.to_json_dict()
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if args.csv_dir:
        os.makedirs(args.csv_dir, exist_ok=True)
        series = {
            "games_per_week": stats.games_per_week,
            "games_per_player": stats.games_per_player,
            "rounds_per_game": stats.rounds_per_game,
            "avg_points_per_throw_per_player": stats.avg_points_per_throw_per_player,
        }
        for name, mapping in series.items():
            with open(os.path.join(args.csv_dir, f"{name}.csv"), "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["key", "value"])
                for key, value in mapping.items():
                    writer.writerow([key, value])
    _emit(payload)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    bundle = load_bundle(args.model)
    app = create_app(
        bundle,
        journal_path=args.journal,
        strict_roster=not args.open_roster,
        static_dir=args.static_dir,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _add_config_flags(sub) -> None:
    sub.add_argument("--config", help="flat key = value config file")
    sub.add_argument("--cutoff", help="train/test cutoff (ISO timestamp)")
    sub.add_argument("--cutoff-quantile", dest="cutoff_quantile", type=float,
                     help="cutoff at this time quantile of the games")
    sub.add_argument("--reference-time", dest="reference_time",
                     help="reference date for accuracy extrapolation (default: cutoff)")
    sub.add_argument("--n-sims", dest="n_sims", type=int)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--null-divisor", dest="null_divisor", type=float)
    sub.add_argument("--logistic-l2", dest="logistic_l2", type=float)
    sub.add_argument("--augmentation-weight", dest="augmentation_weight", type=float)
    sub.add_argument("--threshold", type=int)
    sub.add_argument("--threshold-exclusive", dest="threshold_exclusive",
                     action="store_true", help="require strictly more than the threshold to win")
    sub.add_argument("--round-cap", dest="round_cap", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="darts271",
        description="Darts 271 win-probability workbench",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="generate a synthetic season")
    gen.add_argument("--players", type=int, required=True)
    gen.add_argument("--games", type=int, required=True)
    gen.add_argument("--seed", type=int, default=271)
    gen.add_argument("--out", required=True)
    gen.add_argument("--start", default="2025-01-06T12:00")
    gen.add_argument("--end", default="2025-04-28T20:00")
    gen.add_argument("--truth-replicas", dest="truth_replicas", type=int, default=100_000)
    gen.set_defaults(func=cmd_gen)

    fit = commands.add_parser("fit", help="fit all models on the training split")
    fit.add_argument("--data", required=True)
    fit.add_argument("--out", required=True)
    _add_config_flags(fit)
    fit.set_defaults(func=cmd_fit)

    predict = commands.add_parser("predict", help="win probabilities for one state")
    predict.add_argument("--model", required=True)
    predict.add_argument("--p1", required=True)
    predict.add_argument("--p2", required=True)
    predict.add_argument("--s1", type=float, required=True)
    predict.add_argument("--s2", type=float, required=True)
    predict.add_argument("--model-name", dest="model_name")
    predict.set_defaults(func=cmd_predict)

    ev = commands.add_parser("evaluate", help="score models on the test split")
    ev.add_argument("--model", required=True)
    ev.add_argument("--data", required=True)
    ev.add_argument("--out", required=True)
    ev.add_argument("--models", help="comma-separated subset (default: all five)")
    ev.set_defaults(func=cmd_evaluate)

    stats = commands.add_parser("stats", help="dataset summary statistics")
    stats.add_argument("--data", required=True)
    stats.add_argument("--out", required=True)
    stats.add_argument("--csv-dir", dest="csv_dir", help="also emit per-series CSV files")
    stats.set_defaults(func=cmd_stats)

    serve = commands.add_parser("serve", help="run the live-scoring HTTP service")
    serve.add_argument("--model", required=True)
    serve.add_argument("--port", type=int, default=8271)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--journal", help="append-only event journal (JSONL)")
    serve.add_argument("--open-roster", dest="open_roster", action="store_true",
                       help="allow players outside the fitted roster")
    serve.add_argument("--static-dir", dest="static_dir",
                       help="serve a built scoreboard bundle from this directory")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VALIDATION_ERRORS as exc:
        _fail(type(exc).__name__, str(exc))
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        _fail("InternalError", f"{type(exc).__name__}: {exc}")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
