"""Attribute-rate tables and ranked guesses.

For each feature (education, hometown, current city) the rate of a value
is the number of recovered friends carrying it divided by the total
number of recovered friends. Friends with private or absent attributes
contribute nothing to the numerator but stay in the denominator, so the
per-feature rate mass is at most 1. Rates use exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .oracle import ProfileAttributes, PublicView
from .recover import FriendsFound

FEATURES = ("education", "hometown", "current_city")


class InferenceError(Exception):
    pass


@dataclass(frozen=True)
class AttributeRates:
    education: dict[str, Fraction]
    hometown: dict[str, Fraction]
    current_city: dict[str, Fraction]
    denominator: int

    def table(self, feature: str) -> dict[str, Fraction]:
        if feature not in FEATURES:
            raise KeyError(f"unknown feature {feature!r}")
        return getattr(self, feature)


@dataclass(frozen=True)
class RankedGuess:
    feature: str
    values: tuple[tuple[str, Fraction], ...]  # descending by rate, label tie-break

    def at(self, position: int) -> str | None:
        """Label at 1-based ``position``, or None past the end."""
        if 1 <= position <= len(self.values):
            return self.values[position - 1][0]
        return None


@dataclass(frozen=True)
class FriendRecord:
    """One recovered friend's visible attribute triple."""

    source: str
    education: str | None
    hometown: str | None
    current_city: str | None


def collect_friend_records(
    friends: FriendsFound, oracle: PublicView
) -> list[FriendRecord]:
    records = []
    for friend in sorted(friends.friends):
        attrs = oracle.public_attributes_of(friend) or ProfileAttributes()
        records.append(
            FriendRecord(
                source=friend,
                education=attrs.education,
                hometown=attrs.hometown,
                current_city=attrs.current_city,
            )
        )
    return records


def extract_rates(friends: FriendsFound, oracle: PublicView) -> AttributeRates:
    """Build per-feature rate tables from the recovered friends."""
    total = len(friends.friends)
    if total == 0:
        raise InferenceError(
            f"no recovered friends for {friends.target!r}; inference impossible"
        )
    tables: dict[str, dict[str, Fraction]] = {f: {} for f in FEATURES}
    unit = Fraction(1, total)
    for record in collect_friend_records(friends, oracle):
        for feature in FEATURES:
            value = getattr(record, feature)
            if value is not None:
                table = tables[feature]
                table[value] = table.get(value, Fraction(0)) + unit
    return AttributeRates(
        education=tables["education"],
        hometown=tables["hometown"],
        current_city=tables["current_city"],
        denominator=total,
    )


def rates_from_percentages(
    education: dict[str, float],
    hometown: dict[str, float],
    current_city: dict[str, float],
    denominator: int = 100,
) -> AttributeRates:
    """Build a rate table directly from fractional rates (fixture aid)."""

    def as_fractions(table: dict[str, float]) -> dict[str, Fraction]:
        return {label: Fraction(rate).limit_denominator(10**6) for label, rate in table.items()}

    return AttributeRates(
        education=as_fractions(education),
        hometown=as_fractions(hometown),
        current_city=as_fractions(current_city),
        denominator=denominator,
    )


def rank_guesses(rates: AttributeRates) -> dict[str, RankedGuess]:
    """Sort each feature's values by descending rate, labels break ties."""
    out = {}
    for feature in FEATURES:
        ordered = sorted(rates.table(feature).items(), key=lambda kv: (-kv[1], kv[0]))
        out[feature] = RankedGuess(feature=feature, values=tuple(ordered))
    return out


def top_k_accuracy(
    guesses: dict[str, dict[str, RankedGuess]],
    truth: dict[str, dict[str, str | None]],
    k: int,
) -> dict[str, Fraction | None]:
    """Fraction of targets whose true value sits at exactly position k.

    ``guesses`` maps target id -> feature -> ranking; ``truth`` maps
    target id -> feature -> true label (None when unknown). Targets with
    no ground truth for a feature are excluded from that feature's
    denominator; a feature with no ground truth at all yields None.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not guesses:
        raise InferenceError("no targets to evaluate")
    out: dict[str, Fraction | None] = {}
    for feature in FEATURES:
        hits = 0
        total = 0
        for target, per_feature in guesses.items():
            true_value = truth.get(target, {}).get(feature)
            if true_value is None:
                continue
            total += 1
            if per_feature[feature].at(k) == true_value:
                hits += 1
        out[feature] = Fraction(hits, total) if total else None
    return out


def top_within_k_accuracy(
    guesses: dict[str, dict[str, RankedGuess]],
    truth: dict[str, dict[str, str | None]],
    k: int,
) -> dict[str, Fraction | None]:
    """Cumulative variant: true value anywhere in the first k positions."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not guesses:
        raise InferenceError("no targets to evaluate")
    out: dict[str, Fraction | None] = {}
    for feature in FEATURES:
        hits = 0
        total = 0
        for target, per_feature in guesses.items():
            true_value = truth.get(target, {}).get(feature)
            if true_value is None:
                continue
            total += 1
            ranked = per_feature[feature]
            if any(ranked.at(pos) == true_value for pos in range(1, k + 1)):
                hits += 1
        out[feature] = Fraction(hits, total) if total else None
    return out
