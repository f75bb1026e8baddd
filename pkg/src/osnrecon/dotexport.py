"""DOT rendering of a reconstructed friendship graph.

Node fill colors encode roles; node and edge order is sorted so output
is stable and diffable.
"""

from __future__ import annotations

from .twohop import FriendshipGraph, Role

ROLE_COLORS = {
    Role.VICTIM: "green",
    Role.ONE_HOP: "mediumpurple",
    Role.TWO_HOP_RELEVANT: "orange",
    Role.TWO_HOP_SINGLE_EDGE: "grey",
    Role.COMMON_FRIEND: "lightblue",
}


def _quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(graph: FriendshipGraph) -> str:
    lines = [
        "graph friendship {",
        "  node [style=filled];",
    ]
    for node in graph.nodes():
        color = ROLE_COLORS[graph.roles[node]]
        lines.append(f"  {_quote(node)} [fillcolor={color}];")
    for a, b in sorted(graph.edges):
        lines.append(f"  {_quote(a)} -- {_quote(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
