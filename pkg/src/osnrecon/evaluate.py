"""Evaluation harness: confusion matrices, precision/recall/F1, and the
end-to-end per-victim experiment against ground truth.

This is the one module allowed to read the snapshot's ground truth
directly; the pipeline stages it drives still only see the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .attributes import (
    FEATURES,
    AttributeRates,
    FriendRecord,
    RankedGuess,
    collect_friend_records,
    extract_rates,
    rank_guesses,
    top_k_accuracy,
    top_within_k_accuracy,
)
from .model import OsnSnapshot
from .oracle import PublicView
from .scoring import FRIEND, CandidateScore, Thresholds, classify, score_candidates
from .twohop import (
    FriendshipGraph,
    TwoHopSurvey,
    build_graph,
    collect_2hop,
    prune_single_edge,
    two_hop_nodes,
)


class EvaluationError(Exception):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    tn: int = 0
    fp: int = 0
    fn: int = 0
    tp: int = 0

    @property
    def total(self) -> int:
        return self.tn + self.fp + self.fn + self.tp

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(
            tn=self.tn + other.tn,
            fp=self.fp + other.fp,
            fn=self.fn + other.fn,
            tp=self.tp + other.tp,
        )


@dataclass(frozen=True)
class Metrics:
    precision: Fraction | None
    recall: Fraction | None
    f1: Fraction | None


def confusion(predictions: dict[str, bool], truth: dict[str, bool]) -> ConfusionMatrix:
    """Count the four cells; every predicted id needs a ground-truth flag."""
    tn = fp = fn = tp = 0
    for candidate, predicted in predictions.items():
        if candidate not in truth:
            raise EvaluationError(f"candidate {candidate!r} has no ground-truth flag")
        actual = truth[candidate]
        if predicted and actual:
            tp += 1
        elif predicted:
            fp += 1
        elif actual:
            fn += 1
        else:
            tn += 1
    return ConfusionMatrix(tn=tn, fp=fp, fn=fn, tp=tp)


def metrics(matrix: ConfusionMatrix) -> Metrics:
    precision = (
        Fraction(matrix.tp, matrix.tp + matrix.fp) if matrix.tp + matrix.fp else None
    )
    recall = (
        Fraction(matrix.tp, matrix.tp + matrix.fn) if matrix.tp + matrix.fn else None
    )
    if precision is None or recall is None or precision + recall == 0:
        f1 = None
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return Metrics(precision=precision, recall=recall, f1=f1)


@dataclass(frozen=True)
class ExperimentConfig:
    prune: bool = True
    count_pruned_as_negative: bool = False
    query_budget: int | None = None


@dataclass
class VictimResult:
    victim: str
    skipped: bool = False
    skip_reason: str | None = None
    survey: TwoHopSurvey | None = None
    graph: FriendshipGraph | None = None
    pruned_graph: FriendshipGraph | None = None
    friend_records: list[FriendRecord] = field(default_factory=list)
    rates: AttributeRates | None = None
    rankings: dict[str, RankedGuess] = field(default_factory=dict)
    scores: list[CandidateScore] = field(default_factory=list)
    pruned_candidates: list[str] = field(default_factory=list)
    matrix: ConfusionMatrix | None = None
    queries: int = 0


@dataclass
class ExperimentResult:
    thresholds: Thresholds
    config: ExperimentConfig
    victims: list[VictimResult]
    report: dict


def _frac_doc(value: Fraction | None) -> dict | None:
    if value is None:
        return None
    return {"exact": f"{value.numerator}/{value.denominator}", "value": float(value)}


def _metrics_doc(m: Metrics) -> dict:
    return {
        "precision": _frac_doc(m.precision),
        "recall": _frac_doc(m.recall),
        "f1": _frac_doc(m.f1),
    }


def _matrix_doc(matrix: ConfusionMatrix) -> dict:
    return {"tn": matrix.tn, "fp": matrix.fp, "fn": matrix.fn, "tp": matrix.tp}


def evaluate_victim(
    snapshot: OsnSnapshot,
    victim: str,
    thresholds: Thresholds,
    config: ExperimentConfig = ExperimentConfig(),
) -> VictimResult:
    """Run the full pipeline for one victim and score it against ground
    truth."""
    if victim not in snapshot.users:
        raise EvaluationError(f"victim {victim!r} not in snapshot")
    oracle = PublicView(snapshot, budget=config.query_budget)
    result = VictimResult(victim=victim)
    result.survey = collect_2hop(victim, oracle)
    recovered = result.survey.recovered
    if not recovered.friends:
        result.skipped = True
        result.skip_reason = "no friends recovered"
        result.queries = oracle.query_count
        return result

    result.graph = build_graph(result.survey)
    if config.prune:
        result.pruned_graph = prune_single_edge(result.graph)
        before = set(two_hop_nodes(result.graph))
        after = set(two_hop_nodes(result.pruned_graph))
        result.pruned_candidates = sorted(before - after)
    else:
        result.pruned_graph = result.graph

    result.friend_records = collect_friend_records(recovered, oracle)
    result.rates = extract_rates(recovered, oracle)
    result.rankings = rank_guesses(result.rates)
    scored = score_candidates(
        result.pruned_graph, result.rates, oracle, recovered.friends
    )
    result.scores = classify(scored, thresholds)

    ground_friends = snapshot.users[victim].friends
    predictions = {s.candidate: s.verdict == FRIEND for s in result.scores}
    if config.count_pruned_as_negative:
        for candidate in result.pruned_candidates:
            predictions.setdefault(candidate, False)
    truth = {candidate: candidate in ground_friends for candidate in predictions}
    result.matrix = confusion(predictions, truth)
    result.queries = oracle.query_count
    return result


def _victim_doc(result: VictimResult) -> dict:
    doc: dict = {
        "victim": result.victim,
        "skipped": result.skipped,
        "queries": result.queries,
    }
    if result.skipped:
        doc["skip_reason"] = result.skip_reason
        return doc
    assert result.graph is not None and result.rates is not None
    doc.update(
        {
            "recovered_friends": sorted(result.survey.recovered.friends),
            "candidates_checked": result.survey.recovered.candidates_checked,
            "graph": {
                "nodes": len(result.graph.roles),
                "edges": len(result.graph.edges),
                "two_hop": len(two_hop_nodes(result.graph)),
                "pruned_out": result.pruned_candidates,
            },
            "rates": {
                feature: {
                    label: _frac_doc(rate)
                    for label, rate in sorted(result.rates.table(feature).items())
                }
                for feature in FEATURES
            },
            "rankings": {
                feature: [
                    [label, _frac_doc(rate)]
                    for label, rate in result.rankings[feature].values
                ]
                for feature in FEATURES
            },
            "scores": [
                {
                    "candidate": s.candidate,
                    "info_score": _frac_doc(s.info_score),
                    "shared_edges": s.shared_edges,
                    "edge_score": _frac_doc(s.edge_score),
                    "combined": _frac_doc(s.combined),
                    "verdict": s.verdict,
                }
                for s in result.scores
            ],
            "confusion": _matrix_doc(result.matrix),
            "metrics": _metrics_doc(metrics(result.matrix)),
        }
    )
    return doc


def run_experiment(
    snapshot: OsnSnapshot,
    victims: list[str],
    thresholds: Thresholds,
    config: ExperimentConfig = ExperimentConfig(),
    jobs: int = 1,
) -> ExperimentResult:
    """Evaluate each victim and assemble the aggregate report.

    Victims run independently (concurrently when ``jobs`` > 1); the
    report is an ordered merge, so it does not depend on ``jobs``. The
    aggregate confusion matrix is reported three ways: exact cell-wise
    means over evaluated victims, the same rounded to integers, and
    pooled sums.
    """
    if not victims:
        raise EvaluationError("no victims given")
    ordered = sorted(set(victims))
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(
                pool.map(
                    lambda v: evaluate_victim(snapshot, v, thresholds, config), ordered
                )
            )
    else:
        results = [
            evaluate_victim(snapshot, victim, thresholds, config) for victim in ordered
        ]
    evaluated = [r for r in results if not r.skipped]

    report: dict = {
        "thresholds": {
            "best_info": _frac_doc(thresholds.best_info),
            "best_edges": _frac_doc(thresholds.best_edges),
        },
        "config": {
            "prune": config.prune,
            "count_pruned_as_negative": config.count_pruned_as_negative,
            "query_budget": config.query_budget,
        },
        "victims": [_victim_doc(r) for r in results],
    }

    if evaluated:
        pooled = ConfusionMatrix()
        for r in evaluated:
            pooled = pooled + r.matrix
        count = len(evaluated)
        mean_cells = {
            cell: Fraction(getattr(pooled, cell), count)
            for cell in ("tn", "fp", "fn", "tp")
        }
        rounded = ConfusionMatrix(
            **{cell: round(value) for cell, value in mean_cells.items()}
        )
        report["aggregate"] = {
            "victims_evaluated": count,
            "victims_skipped": len(results) - count,
            "confusion_mean": {c: _frac_doc(v) for c, v in mean_cells.items()},
            "confusion_mean_rounded": _matrix_doc(rounded),
            "confusion_pooled": _matrix_doc(pooled),
            "metrics_pooled": _metrics_doc(metrics(pooled)),
            "metrics_mean_rounded": _metrics_doc(metrics(rounded)),
        }

        guesses = {r.victim: r.rankings for r in evaluated}
        truth = {
            r.victim: {
                feature: getattr(snapshot.users[r.victim], feature)
                for feature in FEATURES
            }
            for r in evaluated
        }
        report["attribute_accuracy"] = {
            "top1": {f: _frac_doc(v) for f, v in top_k_accuracy(guesses, truth, 1).items()},
            "top2": {f: _frac_doc(v) for f, v in top_k_accuracy(guesses, truth, 2).items()},
            "within_top2": {
                f: _frac_doc(v) for f, v in top_within_k_accuracy(guesses, truth, 2).items()
            },
        }
    else:
        report["aggregate"] = {
            "victims_evaluated": 0,
            "victims_skipped": len(results),
        }

    return ExperimentResult(
        thresholds=thresholds, config=config, victims=results, report=report
    )
