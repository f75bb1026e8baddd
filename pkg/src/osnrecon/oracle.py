"""Restricted public view over a snapshot.

This is the only surface the reconstruction pipeline may query. It
exposes exactly the channels that leak in the platform being modelled:

* pairwise friendship checks (the mutual-content page shows a
  "friends since" banner regardless of friends-list privacy),
* mutual friends of a pair (same page),
* a user's public pictures with their engagement,
* a user's attribute triple, only when attributes are public.

Ground-truth friend sets are never returned directly. Every call is
counted, and an optional budget turns rate limiting into a hard error.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .model import OsnSnapshot, Picture


class OracleError(Exception):
    pass


class UnknownUserError(OracleError):
    def __init__(self, user_id: str):
        super().__init__(f"unknown user id {user_id!r}")
        self.user_id = user_id


class IdenticalIdsError(OracleError):
    def __init__(self, user_id: str):
        super().__init__(f"cannot query a pair of identical ids ({user_id!r})")


class QueryBudgetExceeded(OracleError):
    def __init__(self, budget: int):
        super().__init__(f"query budget of {budget} exhausted")
        self.budget = budget


@dataclass(frozen=True)
class ProfileAttributes:
    """The publicly visible attribute triple; fields may be absent."""

    education: str | None = None
    hometown: str | None = None
    current_city: str | None = None


class PublicView:
    """Read-only, thread-safe oracle over one snapshot."""

    def __init__(self, snapshot: OsnSnapshot, budget: int | None = None):
        if budget is not None and budget < 0:
            raise ValueError("budget must be non-negative")
        self._snapshot = snapshot
        self._budget = budget
        self._count = 0
        self._lock = threading.Lock()

    @property
    def query_count(self) -> int:
        return self._count

    @property
    def budget(self) -> int | None:
        return self._budget

    def _charge(self) -> None:
        with self._lock:
            if self._budget is not None and self._count >= self._budget:
                raise QueryBudgetExceeded(self._budget)
            self._count += 1

    def _profile(self, user_id: str):
        profile = self._snapshot.users.get(user_id)
        if profile is None:
            raise UnknownUserError(user_id)
        return profile

    def _pair(self, a: str, b: str):
        if a == b:
            raise IdenticalIdsError(a)
        return self._profile(a), self._profile(b)

    def are_friends(self, a: str, b: str) -> bool:
        pa, _ = self._pair(a, b)
        self._charge()
        return b in pa.friends

    def mutual_friends(self, a: str, b: str) -> frozenset[str]:
        pa, pb = self._pair(a, b)
        self._charge()
        return frozenset((pa.friends & pb.friends) - {a, b})

    def public_pictures_of(self, user_id: str) -> list[Picture]:
        profile = self._profile(user_id)
        self._charge()
        return [
            self._snapshot.pictures[pid]
            for pid in sorted(profile.pictures)
            if self._snapshot.pictures[pid].public
        ]

    def public_attributes_of(self, user_id: str) -> ProfileAttributes | None:
        profile = self._profile(user_id)
        self._charge()
        if not profile.privacy.attributes_public:
            return None
        return ProfileAttributes(
            education=profile.education,
            hometown=profile.hometown,
            current_city=profile.current_city,
        )

    def knows(self, user_id: str) -> bool:
        """Existence check; does not consume budget."""
        return user_id in self._snapshot.users
