"""Likelihood scoring of retained 2-hop candidates.

A candidate's information score is the sum of its matching rates across
the three features divided by three; values absent from the rate tables
(or hidden by privacy) contribute zero. The edge score is the
candidate's shared-friend count normalized by the pool maximum. The
FRIEND / NOT FRIEND verdict requires both scores to meet calibrated
thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .attributes import FEATURES, AttributeRates
from .oracle import ProfileAttributes, PublicView
from .twohop import FriendshipGraph, shared_edge_count, two_hop_nodes

FRIEND = "FRIEND"
NOT_FRIEND = "NOT_FRIEND"


class CalibrationError(Exception):
    pass


@dataclass(frozen=True)
class Thresholds:
    best_info: Fraction
    best_edges: Fraction

    def __post_init__(self):
        for value in (self.best_info, self.best_edges):
            if not 0 <= value <= 1:
                raise ValueError(f"threshold {value} outside [0, 1]")


@dataclass(frozen=True)
class CandidateScore:
    candidate: str
    info_score: Fraction
    shared_edges: int
    edge_score: Fraction
    combined: Fraction
    verdict: str | None = None


def info_score(attrs: ProfileAttributes | None, rates: AttributeRates) -> Fraction:
    """Average matching rate of the candidate's visible attributes."""
    total = Fraction(0)
    if attrs is not None:
        for feature in FEATURES:
            value = getattr(attrs, feature)
            if value is not None:
                total += rates.table(feature).get(value, Fraction(0))
    return total / 3


def score_candidates(
    graph: FriendshipGraph,
    rates: AttributeRates,
    oracle: PublicView,
    recovered_friends: frozenset[str],
) -> list[CandidateScore]:
    """Score every retained 2-hop node that is not a recovered friend.

    Edge scores are normalized by the pool's maximum shared-edge count;
    a pool whose maximum is zero scores zero edges everywhere.
    """
    pool = [node for node in two_hop_nodes(graph) if node not in recovered_friends]
    counts = {node: shared_edge_count(graph, node) for node in pool}
    highest = max(counts.values(), default=0)
    scores = []
    for node in pool:
        info = info_score(oracle.public_attributes_of(node), rates)
        edge = Fraction(counts[node], highest) if highest else Fraction(0)
        scores.append(
            CandidateScore(
                candidate=node,
                info_score=info,
                shared_edges=counts[node],
                edge_score=edge,
                combined=(info + edge) / 2,
            )
        )
    return scores


def classify(scores: list[CandidateScore], thresholds: Thresholds) -> list[CandidateScore]:
    """Attach a verdict: FRIEND iff both scores meet their thresholds."""
    return [
        replace(
            score,
            verdict=(
                FRIEND
                if score.info_score >= thresholds.best_info
                and score.edge_score >= thresholds.best_edges
                else NOT_FRIEND
            ),
        )
        for score in scores
    ]


def calibrate(labeled: list[tuple[CandidateScore, bool]]) -> Thresholds:
    """Grid-search thresholds maximizing F1 of the two-threshold rule.

    The grid is the set of observed score values (plus zero), which is
    sufficient: between observed values the rule's output is constant.
    Cell counts come from 2-D suffix sums, so the search costs
    O(n + grid area) instead of re-scanning the data per threshold pair.
    Ties prefer higher precision, then higher thresholds.
    """
    if not labeled:
        raise CalibrationError("no labeled scores to calibrate on")
    total_pos = sum(1 for _, is_friend in labeled if is_friend)
    if total_pos == 0:
        raise CalibrationError("calibration data contains no positives")
    info_grid = sorted({Fraction(0)} | {s.info_score for s, _ in labeled})
    edge_grid = sorted({Fraction(0)} | {s.edge_score for s, _ in labeled})
    info_index = {value: i for i, value in enumerate(info_grid)}
    edge_index = {value: j for j, value in enumerate(edge_grid)}

    rows = len(info_grid)
    cols = len(edge_grid)
    pos = [[0] * (cols + 1) for _ in range(rows + 1)]
    neg = [[0] * (cols + 1) for _ in range(rows + 1)]
    for score, is_friend in labeled:
        table = pos if is_friend else neg
        table[info_index[score.info_score]][edge_index[score.edge_score]] += 1
    # In-place suffix sums: cell (i, j) becomes the count of scores with
    # info >= info_grid[i] and edge >= edge_grid[j].
    for table in (pos, neg):
        for i in range(rows - 1, -1, -1):
            for j in range(cols - 1, -1, -1):
                table[i][j] += table[i + 1][j] + table[i][j + 1] - table[i + 1][j + 1]

    best = None
    for i in range(rows):
        for j in range(cols):
            tp = pos[i][j]
            fp = neg[i][j]
            fn = total_pos - tp
            # F1 = 2*tp / (2*tp + fp + fn); zero when tp is zero.
            f1 = Fraction(2 * tp, 2 * tp + fp + fn) if tp else Fraction(0)
            precision = Fraction(tp, tp + fp) if tp + fp else Fraction(0)
            key = (f1, precision, info_grid[i], edge_grid[j])
            if best is None or key > best:
                best = key
    return Thresholds(best_info=best[2], best_edges=best[3])
