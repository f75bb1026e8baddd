"""Two-hop neighborhood survey and friendship-graph assembly.

The survey recovers the target's friends, then re-runs recovery on each
of them and asks the oracle for the mutual friends of every
(friend, friend-of-friend) pair. The graph assembler turns the survey
into a simple undirected graph with role-labelled nodes; single-edge
pruning drops 2-hop ids that share only one friend with the target.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .oracle import PublicView
from .recover import FriendsFound, recover_friends


class Role(str, Enum):
    VICTIM = "victim"
    ONE_HOP = "one_hop"
    TWO_HOP_RELEVANT = "two_hop_relevant"
    TWO_HOP_SINGLE_EDGE = "two_hop_single_edge"
    COMMON_FRIEND = "common_friend"


@dataclass(frozen=True)
class TwoHopSurvey:
    victim: str
    recovered: FriendsFound
    neighbor_recovered: dict[str, FriendsFound]
    mutuals: dict[tuple[str, str], frozenset[str]]

    def mutuals_document(self) -> dict[str, list[str]]:
        return {
            f"{a}&{b}": sorted(self.mutuals[(a, b)])
            for a, b in sorted(self.mutuals)
        }


@dataclass
class FriendshipGraph:
    victim: str
    roles: dict[str, Role]
    edges: set[tuple[str, str]]
    one_hop: frozenset[str]

    def nodes(self) -> list[str]:
        return sorted(self.roles)

    def has_edge(self, a: str, b: str) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def neighbors(self, node: str) -> set[str]:
        if node not in self.roles:
            raise KeyError(f"node {node!r} not in graph")
        out = set()
        for a, b in self.edges:
            if a == node:
                out.add(b)
            elif b == node:
                out.add(a)
        return out

    def _add_edge(self, a: str, b: str) -> None:
        if a != b:
            self.edges.add((min(a, b), max(a, b)))


def collect_2hop(
    victim: str,
    oracle: PublicView,
    log: Callable[[str], None] | None = None,
) -> TwoHopSurvey:
    """Run recovery on the victim and each recovered friend, and map the
    mutual friends of every (friend, friend-of-friend) pair.

    Recovery is memoized so each profile is surveyed once. Entries for
    the victim itself are skipped: a pair (friend, victim) carries no
    new information.
    """
    recovered = recover_friends(victim, oracle, log=log)
    neighbor_recovered: dict[str, FriendsFound] = {}
    mutuals: dict[tuple[str, str], frozenset[str]] = {}
    for friend in sorted(recovered.friends):
        found = neighbor_recovered.get(friend)
        if found is None:
            found = recover_friends(friend, oracle, log=log)
            neighbor_recovered[friend] = found
        for second in sorted(found.friends - {victim}):
            mutuals[(friend, second)] = oracle.mutual_friends(friend, second)
    return TwoHopSurvey(
        victim=victim,
        recovered=recovered,
        neighbor_recovered=neighbor_recovered,
        mutuals=mutuals,
    )


def build_graph(survey: TwoHopSurvey) -> FriendshipGraph:
    """Assemble the 2-hop friendship graph from a survey.

    Every inserted edge is a known-true friendship: victim-to-friend
    edges are verified during recovery, friend-to-second-hop edges come
    from recovery on the friend, and mutual-friend edges come from the
    oracle. Edges are inserted even when both endpoints already exist,
    so the graph carries every fact the survey established.
    """
    victim = survey.victim
    graph = FriendshipGraph(
        victim=victim,
        roles={victim: Role.VICTIM},
        edges=set(),
        one_hop=frozenset(survey.recovered.friends),
    )
    for friend in sorted(survey.recovered.friends):
        graph.roles[friend] = Role.ONE_HOP
        graph._add_edge(victim, friend)
    for friend, second in sorted(survey.mutuals):
        if second not in graph.roles:
            graph.roles[second] = Role.TWO_HOP_RELEVANT
        graph._add_edge(friend, second)
        for common in sorted(survey.mutuals[(friend, second)]):
            if common not in graph.roles:
                graph.roles[common] = Role.COMMON_FRIEND
            graph._add_edge(friend, common)
            graph._add_edge(common, second)
    _refine_two_hop_roles(graph)
    return graph


def _refine_two_hop_roles(graph: FriendshipGraph) -> None:
    for node, role in graph.roles.items():
        if role in (Role.TWO_HOP_RELEVANT, Role.TWO_HOP_SINGLE_EDGE):
            count = shared_edge_count(graph, node)
            graph.roles[node] = (
                Role.TWO_HOP_SINGLE_EDGE if count == 1 else Role.TWO_HOP_RELEVANT
            )


def shared_edge_count(graph: FriendshipGraph, node: str) -> int:
    """Number of the victim's recovered friends adjacent to ``node``."""
    if node not in graph.roles:
        raise KeyError(f"node {node!r} not in graph")
    return sum(1 for friend in graph.one_hop if graph.has_edge(friend, node))


def two_hop_nodes(graph: FriendshipGraph) -> list[str]:
    return sorted(
        node
        for node, role in graph.roles.items()
        if role in (Role.TWO_HOP_RELEVANT, Role.TWO_HOP_SINGLE_EDGE)
    )


def prune_single_edge(graph: FriendshipGraph) -> FriendshipGraph:
    """Drop 2-hop nodes sharing exactly one friend with the victim.

    Idempotent: removed nodes are never in ``one_hop``, so surviving
    nodes keep their shared-edge counts.
    """
    doomed = {
        node
        for node in two_hop_nodes(graph)
        if shared_edge_count(graph, node) == 1
    }
    roles = {
        node: (Role.TWO_HOP_RELEVANT if role == Role.TWO_HOP_SINGLE_EDGE else role)
        for node, role in graph.roles.items()
        if node not in doomed
    }
    edges = {(a, b) for a, b in graph.edges if a not in doomed and b not in doomed}
    return FriendshipGraph(
        victim=graph.victim, roles=roles, edges=edges, one_hop=graph.one_hop
    )
