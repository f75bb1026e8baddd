"""Shared test fixtures: the worked-example snapshot and brute-force
oracles kept independent of the library code they check."""

from __future__ import annotations

from osnrecon import OsnSnapshot, load_snapshot

# Rate tables for the victim's 100 recovered friends. The percentage is
# realized exactly as count/100.
CURRENT_CITY_COUNTS = [("padua", 27), ("bologna", 9), ("paris", 4), ("madrid", 2)]
HOMETOWN_COUNTS = [("padua", 13), ("rome", 11), ("venice", 3)]
EDUCATION_COUNTS = [("padua", 40), ("venice", 10)]

# 2-hop candidates: visible attribute triple plus the number of the
# victim's friends each one is connected to.
CANDIDATES = {
    "c1": {
        "current_city": "padua",
        "hometown": "padua",
        "education": "padua",
        "n_edges": 8,
    },
    "c2": {
        "current_city": "brussels",
        "hometown": "turin",
        "education": "rome",
        "n_edges": 3,
    },
    "c3": {"hometown": "venice", "n_edges": 10},
    "c4": {"current_city": "venice", "education": "venice", "n_edges": 2},
}

VICTIM = "victim"
N_FRIENDS = 100


def _spread(pairs: list[tuple[str, int]], n: int) -> list[str | None]:
    values: list[str | None] = []
    for label, count in pairs:
        values.extend([label] * count)
    values.extend([None] * (n - len(values)))
    return values


def worked_example_document(single_edge_candidate: bool = False) -> dict:
    """Snapshot document realizing the worked scoring example.

    The victim has 100 friends, all recovered through one fully liked
    public picture. Each candidate befriends (and engages the pictures
    of) its first ``n_edges`` friends. Optionally adds a candidate with
    a single shared edge, which pruning must remove.
    """
    friend_ids = [f"f{i:02d}" for i in range(N_FRIENDS)]
    candidates = dict(CANDIDATES)
    if single_edge_candidate:
        candidates = {**candidates, "c5": {"hometown": "padua", "n_edges": 1}}

    cc = _spread(CURRENT_CITY_COUNTS, N_FRIENDS)
    home = _spread(HOMETOWN_COUNTS, N_FRIENDS)
    edu = _spread(EDUCATION_COUNTS, N_FRIENDS)

    candidate_friends = {
        cid: set(friend_ids[: spec["n_edges"]]) for cid, spec in candidates.items()
    }

    users = [
        {
            "id": VICTIM,
            "friends": friend_ids,
            "hometown": "padua",
            "current_city": "padua",
            "education": "padua",
            "privacy": {"friends_list_public": False, "attributes_public": False},
        }
    ]
    pictures = [
        {
            "id": "victim_pic",
            "owner": VICTIM,
            "public": True,
            "likers": friend_ids,
            "commenters": [],
        }
    ]
    for i, fid in enumerate(friend_ids):
        entry: dict = {
            "id": fid,
            "friends": [VICTIM]
            + sorted(c for c, members in candidate_friends.items() if fid in members),
            "privacy": {"friends_list_public": False, "attributes_public": True},
        }
        for key, values in (("current_city", cc), ("hometown", home), ("education", edu)):
            if values[i] is not None:
                entry[key] = values[i]
        users.append(entry)
        pictures.append(
            {
                "id": f"{fid}_pic",
                "owner": fid,
                "public": True,
                "likers": sorted(
                    c for c, members in candidate_friends.items() if fid in members
                ),
                "commenters": [],
            }
        )
    for cid, spec in candidates.items():
        entry = {
            "id": cid,
            "friends": sorted(candidate_friends[cid]),
            "privacy": {"friends_list_public": False, "attributes_public": True},
        }
        for key in ("current_city", "hometown", "education"):
            if key in spec:
                entry[key] = spec[key]
        users.append(entry)
    return {"users": users, "pictures": pictures}


def worked_example_snapshot(single_edge_candidate: bool = False) -> OsnSnapshot:
    return load_snapshot(worked_example_document(single_edge_candidate))


def brute_mutual_friends(snapshot: OsnSnapshot, a: str, b: str) -> set[str]:
    """Independent mutual-friend oracle: raw adjacency intersection."""
    return (set(snapshot.users[a].friends) & set(snapshot.users[b].friends)) - {a, b}


def brute_shared_edges(snapshot: OsnSnapshot, one_hop: set[str], node: str) -> int:
    """Independent shared-edge oracle: ground-truth friends of ``node``
    restricted to the recovered 1-hop set."""
    return len(set(snapshot.users[node].friends) & one_hop)


def engaged_users(snapshot: OsnSnapshot, owner: str) -> set[str]:
    """Everyone who liked or commented one of ``owner``'s public pictures."""
    users: set[str] = set()
    for pid in snapshot.users[owner].pictures:
        pic = snapshot.pictures[pid]
        if pic.public:
            users |= set(pic.likers) | set(pic.commenters)
    users.discard(owner)
    return users
