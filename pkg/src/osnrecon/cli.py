"""Command-line front end wiring the pipeline end to end.

Subcommands: generate, ingest, run, calibrate, evaluate, export-dot.
All output files are written atomically (temp file + rename) and are
byte-stable for a fixed config and seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .attributes import FEATURES
from .dotexport import graph_to_dot
from .evaluate import (
    ConfusionMatrix,
    EvaluationError,
    ExperimentConfig,
    confusion,
    metrics,
    run_experiment,
)
from .model import (
    GeneratorConfig,
    SnapshotError,
    generate_synthetic,
    ingest_edge_list,
    load_snapshot_file,
)
from .oracle import OracleError, PublicView
from .scoring import CalibrationError, Thresholds, calibrate
from .twohop import build_graph, collect_2hop, prune_single_edge


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _json_text(document) -> str:
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def _csv_text(header: list[str], rows: list[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _float_cell(value: Fraction) -> str:
    return f"{float(value):.6f}"


def _generator_config(args) -> GeneratorConfig:
    doc = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as handle:
            doc.update(json.load(handle))
    overrides = {
        "n_users": getattr(args, "users", None),
        "mean_degree": getattr(args, "mean_degree", None),
        "pictures_per_user": getattr(args, "pictures_per_user", None),
        "p_friend": getattr(args, "p_friend", None),
        "p_stranger": getattr(args, "p_stranger", None),
        "p_picture_public": getattr(args, "p_picture_public", None),
        "p_attributes_public": getattr(args, "p_attributes_public", None),
        "homophily": getattr(args, "homophily", None),
    }
    doc.update({key: value for key, value in overrides.items() if value is not None})
    return GeneratorConfig.from_dict(doc)


def _default_out(args) -> Path:
    if args.out:
        return Path(args.out)
    env = os.environ.get("OSNRECON_OUT")
    if env:
        return Path(env)
    return Path("osnrecon-out")


def cmd_generate(args) -> int:
    snapshot = generate_synthetic(_generator_config(args), seed=args.seed)
    write_atomic(Path(args.out), snapshot.to_json())
    print(f"wrote snapshot with {len(snapshot.users)} users to {args.out}")
    return 0


def cmd_ingest(args) -> int:
    with open(args.edges, encoding="utf-8") as handle:
        lines = handle.readlines()
    attribute_rows = None
    if args.attrs:
        with open(args.attrs, encoding="utf-8") as handle:
            attribute_rows = json.load(handle)
    snapshot = ingest_edge_list(
        lines, _generator_config(args), seed=args.seed, attribute_rows=attribute_rows
    )
    write_atomic(Path(args.out), snapshot.to_json())
    print(f"wrote snapshot with {len(snapshot.users)} users to {args.out}")
    return 0


def _emit_victim_artifacts(out_dir: Path, result, victim_doc: dict) -> None:
    base = out_dir / result.victim
    write_atomic(base / "report.json", _json_text(victim_doc))
    if result.skipped:
        return
    write_atomic(base / "graph.dot", graph_to_dot(result.pruned_graph))
    write_atomic(base / "mutuals.json", _json_text(result.survey.mutuals_document()))
    rate_rows = [
        [feature, label, f"{rate.numerator}/{rate.denominator}", _float_cell(rate)]
        for feature in FEATURES
        for label, rate in sorted(result.rates.table(feature).items())
    ]
    write_atomic(
        base / "rates.csv",
        _csv_text(["feature", "label", "rate_exact", "rate"], rate_rows),
    )
    write_atomic(
        base / "friends.csv",
        _csv_text(
            ["source", "education", "hometown", "current_city"],
            [
                [r.source, r.education or "", r.hometown or "", r.current_city or ""]
                for r in result.friend_records
            ],
        ),
    )
    write_atomic(
        base / "scores.csv",
        _csv_text(
            ["candidate", "info_score", "shared_edges", "edge_score", "combined", "verdict"],
            [
                [
                    s.candidate,
                    _float_cell(s.info_score),
                    s.shared_edges,
                    _float_cell(s.edge_score),
                    _float_cell(s.combined),
                    s.verdict,
                ]
                for s in result.scores
            ],
        ),
    )


def cmd_run(args) -> int:
    snapshot = load_snapshot_file(args.snapshot)
    thresholds = Thresholds(
        best_info=Fraction(args.best_info).limit_denominator(10**6),
        best_edges=Fraction(args.best_edges).limit_denominator(10**6),
    )
    config = ExperimentConfig(
        prune=not args.no_prune,
        count_pruned_as_negative=args.count_pruned_as_negative,
        query_budget=args.budget,
    )
    experiment = run_experiment(
        snapshot, args.victim, thresholds, config, jobs=args.jobs
    )
    out_dir = _default_out(args)
    for result, victim_doc in zip(experiment.victims, experiment.report["victims"]):
        _emit_victim_artifacts(out_dir, result, victim_doc)
    write_atomic(out_dir / "aggregate.json", _json_text(experiment.report))
    print(f"wrote report for {len(experiment.victims)} victim(s) to {out_dir}")
    return 0


def cmd_calibrate(args) -> int:
    snapshot = load_snapshot_file(args.snapshot)
    config = ExperimentConfig(
        prune=not args.no_prune, query_budget=args.budget
    )
    placeholder = Thresholds(best_info=Fraction(0), best_edges=Fraction(0))
    experiment = run_experiment(snapshot, args.victim, placeholder, config)
    labeled = []
    for result in experiment.victims:
        if result.skipped:
            continue
        ground = snapshot.users[result.victim].friends
        labeled.extend(
            (score, score.candidate in ground) for score in result.scores
        )
    thresholds = calibrate(labeled)
    document = {
        "best_info": {
            "exact": f"{thresholds.best_info.numerator}/{thresholds.best_info.denominator}",
            "value": float(thresholds.best_info),
        },
        "best_edges": {
            "exact": f"{thresholds.best_edges.numerator}/{thresholds.best_edges.denominator}",
            "value": float(thresholds.best_edges),
        },
        "labeled_candidates": len(labeled),
    }
    text = _json_text(document)
    if args.out:
        write_atomic(Path(args.out), text)
    print(text, end="")
    return 0


def cmd_evaluate(args) -> int:
    if args.predictions:
        with open(args.predictions, encoding="utf-8") as handle:
            rows = json.load(handle)
        predictions = {row["id"]: bool(row["predicted"]) for row in rows}
        truth = {row["id"]: bool(row["actual"]) for row in rows}
        matrix = confusion(predictions, truth)
    elif None not in (args.tn, args.fp, args.fn, args.tp):
        matrix = ConfusionMatrix(tn=args.tn, fp=args.fp, fn=args.fn, tp=args.tp)
    else:
        raise EvaluationError("provide --predictions or all of --tn/--fp/--fn/--tp")
    m = metrics(matrix)
    print(f"tn={matrix.tn} fp={matrix.fp} fn={matrix.fn} tp={matrix.tp}")
    for name, value in (("precision", m.precision), ("recall", m.recall), ("f1", m.f1)):
        if value is None:
            print(f"{name}: undefined")
        else:
            print(f"{name}: {float(value):.4f}")
    return 0


def cmd_export_dot(args) -> int:
    snapshot = load_snapshot_file(args.snapshot)
    oracle = PublicView(snapshot, budget=args.budget)
    if not oracle.knows(args.victim):
        raise EvaluationError(f"victim {args.victim!r} not in snapshot")
    survey = collect_2hop(args.victim, oracle)
    graph = build_graph(survey)
    if not args.no_prune:
        graph = prune_single_edge(graph)
    text = graph_to_dot(graph)
    if args.out:
        write_atomic(Path(args.out), text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0


def _add_generator_flags(parser) -> None:
    parser.add_argument("--config", help="JSON file with generator options")
    parser.add_argument("--mean-degree", type=float, dest="mean_degree")
    parser.add_argument("--pictures-per-user", type=int, dest="pictures_per_user")
    parser.add_argument("--p-friend", type=float, dest="p_friend")
    parser.add_argument("--p-stranger", type=float, dest="p_stranger")
    parser.add_argument("--p-picture-public", type=float, dest="p_picture_public")
    parser.add_argument("--p-attributes-public", type=float, dest="p_attributes_public")
    parser.add_argument("--homophily", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="osnrecon",
        description=(
            "Reconstruct friendship graphs and infer hidden profile attributes "
            "from public activity in a simulated social network."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic snapshot")
    p.add_argument("--users", type=int)
    _add_generator_flags(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("ingest", help="build a snapshot from an edge list")
    p.add_argument("--edges", required=True, help="whitespace-separated pairs, one per line")
    p.add_argument("--attrs", help="JSON array of {id, feature, value}")
    _add_generator_flags(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("run", help="run the full pipeline on victims")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--victim", action="append", required=True)
    p.add_argument("--best-info", type=float, default=0.0, dest="best_info")
    p.add_argument("--best-edges", type=float, default=0.0, dest="best_edges")
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--count-pruned-as-negative", action="store_true")
    p.add_argument("--budget", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("calibrate", help="grid-search thresholds against ground truth")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--victim", action="append", required=True)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--budget", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("evaluate", help="compute precision/recall/F1")
    p.add_argument("--predictions", help="JSON array of {id, predicted, actual}")
    p.add_argument("--tn", type=int)
    p.add_argument("--fp", type=int)
    p.add_argument("--fn", type=int)
    p.add_argument("--tp", type=int)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("export-dot", help="export a victim's 2-hop graph as DOT")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--victim", required=True)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--budget", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dot)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SnapshotError, OracleError, EvaluationError, CalibrationError, OSError) as exc:
        print(f"error ({args.command}): {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
