"""Friend recovery from public picture engagement.

Everyone who liked or commented one of the target's public pictures is a
candidate; each candidate is then verified with a pairwise friendship
check through the oracle. Verification is exact, so the result contains
no false positives; recall is bounded by how many real friends engaged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .oracle import PublicView


@dataclass(frozen=True)
class FriendsFound:
    target: str
    friends: frozenset[str]
    candidates_checked: int


def recover_friends(
    target: str,
    oracle: PublicView,
    log: Callable[[str], None] | None = None,
) -> FriendsFound:
    """Recover the target's friends visible through picture engagement.

    Candidates are verified in sorted id order so that query-budget
    accounting is reproducible. ``log`` receives one line per verified
    friend.
    """
    candidates: set[str] = set()
    for picture in oracle.public_pictures_of(target):
        candidates |= picture.likers | picture.commenters
    candidates.discard(target)

    friends: set[str] = set()
    for index, candidate in enumerate(sorted(candidates), start=1):
        if oracle.are_friends(candidate, target):
            friends.add(candidate)
            if log is not None:
                log(f"FRIEND FOUND -- {index} {candidate} ({candidate})")
    return FriendsFound(
        target=target,
        friends=frozenset(friends),
        candidates_checked=len(candidates),
    )
