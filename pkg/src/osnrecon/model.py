"""In-memory model of a simulated online social network.

A snapshot holds the ground truth: user profiles, symmetric friendship
edges, uploaded pictures with their like/comment engagement, and privacy
flags. Everything downstream of this module must go through the
restricted public view in :mod:`osnrecon.oracle`; only the evaluation
harness is allowed to read ground truth directly.

Snapshots come from three sources: a JSON document, the synthetic
generator, or an ingested edge list with synthesized activity.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace


class SnapshotError(Exception):
    """Base class for snapshot loading/generation failures."""


class SchemaError(SnapshotError):
    """The input document does not conform to the snapshot schema."""


class IntegrityError(SnapshotError):
    """The document parses but violates a structural invariant."""


def canonical(label: str) -> str:
    """Canonical form of an attribute label: trimmed and case-folded."""
    return label.strip().casefold()


@dataclass(frozen=True)
class PrivacySettings:
    friends_list_public: bool = False
    attributes_public: bool = True


@dataclass(frozen=True)
class Picture:
    id: str
    owner: str
    public: bool
    likers: frozenset[str] = frozenset()
    commenters: frozenset[str] = frozenset()


@dataclass(frozen=True)
class UserProfile:
    id: str
    friends: frozenset[str] = frozenset()
    personal: dict = field(default_factory=dict)
    pages_liked: frozenset[str] = frozenset()
    groups: frozenset[str] = frozenset()
    pictures: frozenset[str] = frozenset()
    hometown: str | None = None
    current_city: str | None = None
    education: str | None = None
    high_school: str | None = None
    privacy: PrivacySettings = PrivacySettings()


@dataclass(frozen=True)
class OsnSnapshot:
    """Immutable ground-truth snapshot. Safe for concurrent reads."""

    users: dict[str, UserProfile]
    pictures: dict[str, Picture]

    def validate(self) -> None:
        for uid, user in self.users.items():
            if not uid:
                raise IntegrityError("empty user id")
            if uid in user.friends:
                raise IntegrityError(f"user {uid!r} lists itself as a friend")
            for fid in user.friends:
                other = self.users.get(fid)
                if other is None:
                    raise IntegrityError(f"user {uid!r} references unknown friend {fid!r}")
                if uid not in other.friends:
                    raise IntegrityError(
                        f"asymmetric friendship: {uid!r} lists {fid!r} but not vice versa"
                    )
            for pid in user.pictures:
                pic = self.pictures.get(pid)
                if pic is None:
                    raise IntegrityError(f"user {uid!r} references unknown picture {pid!r}")
                if pic.owner != uid:
                    raise IntegrityError(
                        f"picture {pid!r} owned by {pic.owner!r} but listed by {uid!r}"
                    )
        for pid, pic in self.pictures.items():
            if pic.owner not in self.users:
                raise IntegrityError(f"picture {pid!r} has unknown owner {pic.owner!r}")
            if pid not in self.users[pic.owner].pictures:
                raise IntegrityError(f"picture {pid!r} missing from owner's picture set")
            for uid in pic.likers | pic.commenters:
                if uid not in self.users:
                    raise IntegrityError(f"picture {pid!r} engaged by unknown user {uid!r}")

    def friendship_edges(self) -> set[tuple[str, str]]:
        """All ground-truth edges as sorted pairs."""
        edges = set()
        for uid, user in self.users.items():
            for fid in user.friends:
                edges.add((uid, fid) if uid < fid else (fid, uid))
        return edges

    def to_document(self) -> dict:
        users = []
        for uid in sorted(self.users):
            u = self.users[uid]
            entry: dict = {
                "id": uid,
                "friends": sorted(u.friends),
                "privacy": {
                    "friends_list_public": u.privacy.friends_list_public,
                    "attributes_public": u.privacy.attributes_public,
                },
            }
            for key in ("hometown", "current_city", "education", "high_school"):
                value = getattr(u, key)
                if value is not None:
                    entry[key] = value
            if u.personal:
                entry["personal"] = dict(sorted(u.personal.items()))
            if u.pages_liked:
                entry["pages_liked"] = sorted(u.pages_liked)
            if u.groups:
                entry["groups"] = sorted(u.groups)
            users.append(entry)
        pictures = [
            {
                "id": pid,
                "owner": self.pictures[pid].owner,
                "public": self.pictures[pid].public,
                "likers": sorted(self.pictures[pid].likers),
                "commenters": sorted(self.pictures[pid].commenters),
            }
            for pid in sorted(self.pictures)
        ]
        return {"users": users, "pictures": pictures}

    def to_json(self) -> str:
        return json.dumps(self.to_document(), sort_keys=True, indent=2) + "\n"


def _require(doc: dict, key: str, kind: type, where: str):
    if key not in doc:
        raise SchemaError(f"{where}: missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise SchemaError(f"{where}: field {key!r} must be {kind.__name__}")
    return value


def _opt_label(doc: dict, key: str, where: str) -> str | None:
    if key not in doc or doc[key] is None:
        return None
    value = doc[key]
    if not isinstance(value, str) or not value.strip():
        raise SchemaError(f"{where}: field {key!r} must be a non-empty string")
    return canonical(value)


def load_snapshot(document: dict) -> OsnSnapshot:
    """Build and validate a snapshot from its JSON document form."""
    if not isinstance(document, dict):
        raise SchemaError("snapshot document must be an object")
    user_docs = _require(document, "users", list, "snapshot")
    picture_docs = document.get("pictures", [])
    if not isinstance(picture_docs, list):
        raise SchemaError("snapshot: field 'pictures' must be a list")

    pictures: dict[str, Picture] = {}
    owned: dict[str, set[str]] = {}
    for pdoc in picture_docs:
        if not isinstance(pdoc, dict):
            raise SchemaError("picture entry must be an object")
        pid = _require(pdoc, "id", str, "picture")
        where = f"picture {pid!r}"
        if pid in pictures:
            raise SchemaError(f"{where}: duplicate picture id")
        pictures[pid] = Picture(
            id=pid,
            owner=_require(pdoc, "owner", str, where),
            public=_require(pdoc, "public", bool, where),
            likers=frozenset(_require(pdoc, "likers", list, where)),
            commenters=frozenset(_require(pdoc, "commenters", list, where)),
        )
        owned.setdefault(pictures[pid].owner, set()).add(pid)

    users: dict[str, UserProfile] = {}
    for udoc in user_docs:
        if not isinstance(udoc, dict):
            raise SchemaError("user entry must be an object")
        uid = _require(udoc, "id", str, "user")
        where = f"user {uid!r}"
        if not uid:
            raise SchemaError("user: empty id")
        if uid in users:
            raise SchemaError(f"{where}: duplicate user id")
        privacy_doc = udoc.get("privacy", {})
        if not isinstance(privacy_doc, dict):
            raise SchemaError(f"{where}: field 'privacy' must be an object")
        users[uid] = UserProfile(
            id=uid,
            friends=frozenset(_require(udoc, "friends", list, where)),
            personal=dict(udoc.get("personal", {})),
            pages_liked=frozenset(udoc.get("pages_liked", [])),
            groups=frozenset(udoc.get("groups", [])),
            pictures=frozenset(owned.get(uid, set())),
            hometown=_opt_label(udoc, "hometown", where),
            current_city=_opt_label(udoc, "current_city", where),
            education=_opt_label(udoc, "education", where),
            high_school=_opt_label(udoc, "high_school", where),
            privacy=PrivacySettings(
                friends_list_public=bool(privacy_doc.get("friends_list_public", False)),
                attributes_public=bool(privacy_doc.get("attributes_public", True)),
            ),
        )

    snapshot = OsnSnapshot(users=users, pictures=pictures)
    snapshot.validate()
    return snapshot


def load_snapshot_file(path) -> OsnSnapshot:
    with open(path, encoding="utf-8") as handle:
        try:
            document = json.load(handle)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
    return load_snapshot(document)


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of the synthetic snapshot generator.

    Engagement follows a two-probability Bernoulli model: each friend of
    a picture's owner likes (and, independently, comments) the picture
    with probability ``p_friend``; every non-friend does the same with
    probability ``p_stranger``.
    """

    n_users: int = 50
    mean_degree: float = 6.0
    pictures_per_user: int = 2
    p_friend: float = 0.6
    p_stranger: float = 0.01
    p_picture_public: float = 0.8
    p_friends_list_public: float = 0.2
    p_attributes_public: float = 0.6
    p_attribute_present: float = 0.8
    homophily: float = 0.6
    cities: tuple[str, ...] = (
        "padua", "rome", "venice", "bologna", "milan", "turin", "naples", "paris",
    )
    schools: tuple[str, ...] = (
        "padua", "venice", "bologna", "rome", "milan",
    )

    def validate(self) -> None:
        if self.n_users < 2:
            raise SnapshotError(f"n_users must be >= 2, got {self.n_users}")
        for name in (
            "p_friend", "p_stranger", "p_picture_public", "p_friends_list_public",
            "p_attributes_public", "p_attribute_present", "homophily",
        ):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise SnapshotError(f"{name} must be in [0, 1], got {value}")
        if self.mean_degree < 0:
            raise SnapshotError(f"mean_degree must be >= 0, got {self.mean_degree}")
        if self.pictures_per_user < 0:
            raise SnapshotError("pictures_per_user must be >= 0")

    @classmethod
    def from_dict(cls, doc: dict) -> "GeneratorConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise SnapshotError(f"unknown generator option(s): {sorted(unknown)}")
        doc = dict(doc)
        for key in ("cities", "schools"):
            if key in doc:
                doc[key] = tuple(canonical(v) for v in doc[key])
        return cls(**doc)


def _random_edges(n: int, mean_degree: float, rng: random.Random) -> set[tuple[int, int]]:
    max_edges = n * (n - 1) // 2
    target = min(max_edges, round(n * mean_degree / 2))
    edges: set[tuple[int, int]] = set()
    attempts = 0
    while len(edges) < target and attempts < 50 * max_edges + 100:
        i = rng.randrange(n)
        j = rng.randrange(n)
        attempts += 1
        if i != j:
            edges.add((min(i, j), max(i, j)))
    return edges


def _assign_attributes(
    ids: list[str],
    adjacency: dict[str, set[str]],
    config: GeneratorConfig,
    rng: random.Random,
) -> dict[str, dict[str, str | None]]:
    features = {
        "hometown": config.cities,
        "current_city": config.cities,
        "education": config.schools,
        "high_school": config.schools,
    }
    assigned: dict[str, dict[str, str | None]] = {uid: {} for uid in ids}
    for uid in ids:
        for feature, vocab in features.items():
            if not vocab or rng.random() >= config.p_attribute_present:
                assigned[uid][feature] = None
                continue
            # Homophily: prefer copying from an already-labelled friend.
            friend_values = [
                assigned[fid][feature]
                for fid in sorted(adjacency[uid])
                if feature in assigned[fid] and assigned[fid][feature] is not None
            ]
            if friend_values and rng.random() < config.homophily:
                assigned[uid][feature] = rng.choice(friend_values)
            else:
                assigned[uid][feature] = rng.choice(vocab)
    return assigned


def _synthesize_activity(
    ids: list[str],
    adjacency: dict[str, set[str]],
    attributes: dict[str, dict[str, str | None]],
    config: GeneratorConfig,
    rng: random.Random,
) -> OsnSnapshot:
    """Assemble a snapshot from a fixed friendship graph plus generated
    privacy flags, pictures, and engagement."""
    privacy = {
        uid: PrivacySettings(
            friends_list_public=rng.random() < config.p_friends_list_public,
            attributes_public=rng.random() < config.p_attributes_public,
        )
        for uid in ids
    }

    pictures: dict[str, Picture] = {}
    owned: dict[str, set[str]] = {uid: set() for uid in ids}
    for uid in ids:
        for k in range(config.pictures_per_user):
            pid = f"{uid}_p{k}"
            public = rng.random() < config.p_picture_public
            likers = set()
            commenters = set()
            if public:
                for other in ids:
                    if other == uid:
                        continue
                    p = config.p_friend if other in adjacency[uid] else config.p_stranger
                    if rng.random() < p:
                        likers.add(other)
                    if rng.random() < p:
                        commenters.add(other)
            pictures[pid] = Picture(
                id=pid, owner=uid, public=public,
                likers=frozenset(likers), commenters=frozenset(commenters),
            )
            owned[uid].add(pid)

    users = {
        uid: UserProfile(
            id=uid,
            friends=frozenset(adjacency[uid]),
            pictures=frozenset(owned[uid]),
            hometown=attributes[uid].get("hometown"),
            current_city=attributes[uid].get("current_city"),
            education=attributes[uid].get("education"),
            high_school=attributes[uid].get("high_school"),
            privacy=privacy[uid],
        )
        for uid in ids
    }
    snapshot = OsnSnapshot(users=users, pictures=pictures)
    snapshot.validate()
    return snapshot


def generate_synthetic(config: GeneratorConfig, seed: int) -> OsnSnapshot:
    """Generate a snapshot deterministically from (config, seed)."""
    config.validate()
    rng = random.Random(seed)
    n = config.n_users
    width = max(3, len(str(n - 1)))
    ids = [f"u{idx:0{width}d}" for idx in range(n)]

    adjacency: dict[str, set[str]] = {uid: set() for uid in ids}
    for i, j in sorted(_random_edges(n, config.mean_degree, rng)):
        adjacency[ids[i]].add(ids[j])
        adjacency[ids[j]].add(ids[i])

    attributes = _assign_attributes(ids, adjacency, config, rng)
    return _synthesize_activity(ids, adjacency, attributes, config, rng)


def ingest_edge_list(
    lines,
    config: GeneratorConfig,
    seed: int,
    attribute_rows: list[dict] | None = None,
) -> OsnSnapshot:
    """Build a snapshot whose friendships equal an undirected edge list.

    ``lines`` is an iterable of whitespace-separated pairs; blank lines
    and ``#`` comments are skipped. Attributes may be supplied as rows of
    ``{"id", "feature", "value"}``; pictures, engagement, and privacy
    flags are synthesized from ``config`` with the given seed.
    """
    config.validate()
    adjacency: dict[str, set[str]] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SchemaError(f"edge list line {lineno}: expected two ids, got {line!r}")
        a, b = parts
        if a == b:
            raise IntegrityError(f"edge list line {lineno}: self-friendship {a!r}")
        adjacency.setdefault(a, set()).add(b)
        adjacency.setdefault(b, set()).add(a)
    if len(adjacency) < 2:
        raise SnapshotError("edge list must mention at least two users")

    ids = sorted(adjacency)
    attributes: dict[str, dict[str, str | None]] = {uid: {} for uid in ids}
    valid_features = {"hometown", "current_city", "education", "high_school"}
    for row in attribute_rows or []:
        uid = _require(row, "id", str, "attribute row")
        feature = _require(row, "feature", str, "attribute row")
        value = canonical(_require(row, "value", str, "attribute row"))
        if feature not in valid_features:
            raise SchemaError(f"attribute row for {uid!r}: unknown feature {feature!r}")
        if uid not in attributes:
            raise IntegrityError(f"attribute row references unknown user {uid!r}")
        previous = attributes[uid].get(feature)
        if previous is not None and previous != value:
            raise IntegrityError(
                f"contradictory attribute rows for {uid!r}.{feature}: "
                f"{previous!r} vs {value!r}"
            )
        attributes[uid][feature] = value

    rng = random.Random(seed)
    if attribute_rows is None:
        attributes = _assign_attributes(ids, adjacency, config, rng)
    return _synthesize_activity(ids, adjacency, attributes, config, rng)
