"""Hand-built and seeded instances shared by the maximal-path tests and the acceptance suite."""

from __future__ import annotations

import random

from sepdfs.generators import maximal_planar, planar
from sepdfs.graph import Graph, is_biconnected
from sepdfs.maxpath import is_triconnected


def three_connected(n: int, seed: int, thin: float = 0.3) -> Graph:
    """Maximal planar graph with some edges removed while staying 3-connected."""
    rng = random.Random(seed)
    g = maximal_planar(n, seed)
    edges = list(g.edges)
    rng.shuffle(edges)
    keep = set(g.edges)
    for e in edges[: int(len(edges) * thin)]:
        trial = Graph.from_edges(n, sorted(keep - {e}))
        if is_triconnected(trial):
            keep.discard(e)
    return Graph.from_edges(n, sorted(keep))


def biconnected(n: int, seed: int, thin: float = 0.5) -> Graph:
    """Maximal planar graph thinned by deletions that keep it biconnected."""
    rng = random.Random(seed)
    g = maximal_planar(n, seed)
    edges = list(g.edges)
    rng.shuffle(edges)
    keep = set(g.edges)
    for e in edges[: int(len(edges) * thin)]:
        trial = Graph.from_edges(n, sorted(keep - {e}))
        if is_biconnected(trial):
            keep.discard(e)
    return Graph.from_edges(n, sorted(keep))


def square_with_k4() -> Graph:
    # square 0-1-2-3 sharing the pair {2, 3} with a K4 on {2, 3, 4, 5}
    return Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (0, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)])


def prism_with_two_squares() -> Graph:
    # triangular prism 0..5 with two squares glued on its edge {0, 3}, so the prism is a leaf piece
    prism = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]
    return Graph.from_edges(10, prism + [(0, 6), (6, 7), (7, 3), (0, 8), (8, 9), (9, 3)])


def theta() -> Graph:
    # three internally disjoint paths between 0 and 1: every leaf piece is a cycle
    return Graph.from_edges(7, [(0, 2), (2, 1), (0, 3), (3, 4), (4, 1), (0, 5), (5, 6), (6, 1)])


def wheel(k: int) -> Graph:
    rim = list(range(1, k + 1))
    return Graph.from_edges(k + 1, [(0, v) for v in rim] + [(rim[i], rim[(i + 1) % k]) for i in range(k)])


def whole_graph_figures() -> list[tuple[str, Graph, int, str]]:
    """(name, graph, root, expected reduction case)."""
    return [
        ("leaf K4 on a square", square_with_k4(), 0, "1"),
        ("prism glued to two squares", prism_with_two_squares(), 6, "1"),
        ("all leaves are cycles", theta(), 3, "2"),
        ("single cycle", Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)]), 2, "cycle"),
    ]


def triconnected_figures() -> list[tuple[str, Graph, int, int, str]]:
    """(name, 3-connected piece, r0, r1, construction that wins)."""
    return [
        ("main construction", maximal_planar(6, 1), 0, 1, "main"),
        ("head would be r1; minimum complement span", maximal_planar(6, 1), 0, 4, "2.2"),
        ("head would be r1; mirrored walk", planar(6, 8, keep=0.85), 0, 2, "mirror"),
        ("head would be r1; depth-first repair", maximal_planar(6, 1), 1, 3, "repair"),
        ("wheel with adjacent rim roots", wheel(5), 1, 2, None),
    ]
