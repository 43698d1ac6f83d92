"""Clique-sum decomposition trees (pieces glued at cliques of size <= 3)."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in

from .graph import Graph, GraphError, components_after_removal, is_connected

log = logging.getLogger(__name__)

TW_MAX = 4


@dataclass(frozen=True)
class Piece:
    vertices: tuple[int, ...]
    edges: frozenset            # (u, v) with u < v, global ids, real and virtual
    virtual: frozenset          # subset of edges absent from the input graph
    kind: str                   # "planar" | "tw" | "rest"


@dataclass
class CliqueSumTree:
    pieces: list[Piece]
    cliques: list[tuple[int, ...]]
    incidence: list[tuple[int, int]]  # (piece index, clique index)
    diagnostics: list[str] = field(default_factory=list)

    # tree nodes are ("P", i) or ("C", j)
    def nodes(self) -> list[tuple[str, int]]:
        return [("P", i) for i in range(len(self.pieces))] + [("C", j) for j in range(len(self.cliques))]

    def node_vertices(self, node: tuple[str, int]) -> tuple[int, ...]:
        kind, i = node
        return self.pieces[i].vertices if kind == "P" else self.cliques[i]

    def neighbors(self, node: tuple[str, int]) -> list[tuple[str, int]]:
        kind, i = node
        if kind == "P":
            return [("C", c) for p, c in self.incidence if p == i]
        return [("P", p) for p, c in self.incidence if c == i]

    def side_vertices(self, start: tuple[str, int], blocked: tuple[str, int]) -> set[int]:
        """Union of vertex sets of the tree component containing ``start`` after deleting ``blocked``."""
        seen = {start, blocked}
        stack = [start]
        out: set[int] = set()
        while stack:
            x = stack.pop()
            out.update(self.node_vertices(x))
            for y in self.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return out

    def glued_edges(self, g: Graph) -> set[tuple[int, int]]:
        real = set(g.edges)
        out = set()
        for p in self.pieces:
            out |= {e for e in p.edges if e in real}
        return out

    def validate(self, g: Graph) -> None:
        if self.glued_edges(g) != set(g.edges):
            raise GraphError("pieces do not glue back to the input graph")
        for p in self.pieces:
            for e in p.edges - p.virtual:
                if e not in g.edge_set:
                    raise GraphError(f"piece edge {e} is not real but not marked virtual")
        for p_i, c_i in self.incidence:
            p, c = self.pieces[p_i], self.cliques[c_i]
            for u, v in itertools.combinations(sorted(c), 2):
                if (u, v) not in p.edges:
                    raise GraphError(f"clique {c} is not a clique in piece {p_i}")
        # tree shape
        nodes = self.nodes()
        if len(self.incidence) != len(nodes) - 1:
            raise GraphError("decomposition is not a tree")


def _piece_graph(vertices, edges) -> tuple[Graph, dict[int, int]]:
    idx = {v: i for i, v in enumerate(vertices)}
    return Graph.from_edges(len(vertices), [(idx[u], idx[v]) for u, v in edges]), idx


def _nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def treewidth_upper(g: Graph) -> tuple[int, list[list[int]], list[tuple[int, int]]]:
    """Min-fill-in elimination: an upper bound and its decomposition (bags, tree edges)."""
    if g.n == 0:
        return 0, [], []
    tw, dec = treewidth_min_fill_in(_nx(g))
    bags = sorted((sorted(b) for b in dec.nodes), key=lambda b: (len(b), b))
    index = {tuple(b): i for i, b in enumerate(bags)}
    tedges = sorted((min(index[tuple(sorted(a))], index[tuple(sorted(b))]),
                     max(index[tuple(sorted(a))], index[tuple(sorted(b))])) for a, b in dec.edges)
    return tw, bags, tedges


def _separates(g: Graph, s) -> bool:
    return len(components_after_removal(g, s).components) >= 2


def _separating_triangles(g: Graph):
    """Triangles whose vertices separate the graph; these can never bound a face."""
    for u, v in g.edges:
        for w in g.neighbors(v):
            if w > v and g.adjacent(u, w) and _separates(g, (u, v, w)):
                yield (u, v, w)


def _is_planar(g: Graph) -> bool:
    return nx.check_planarity(_nx(g))[0]


def build_clique_sum_tree(g: Graph, tw_max: int = TW_MAX) -> CliqueSumTree:
    """Split at separating sets of size <= 3 until pieces are planar or have small treewidth.

    Planar pieces are still split at separating triangles so that every
    3-clique of a planar piece bounds a face.
    """
    if g.directed:
        raise GraphError("clique-sum decomposition needs an undirected graph")
    if not is_connected(g):
        raise GraphError("clique-sum decomposition needs a connected graph")
    tree = CliqueSumTree([], [], [])
    _decompose(g, tuple(range(g.n)), frozenset(g.edges), tree, tw_max)
    return tree


def _decompose(g: Graph, vertices: tuple[int, ...], edges: frozenset, tree: CliqueSumTree, tw_max: int) -> int:
    pg, idx = _piece_graph(vertices, edges)
    virtual = frozenset(e for e in edges if e not in g.edge_set)
    split = None
    kind = "rest"
    if _is_planar(pg):
        split = next(_separating_triangles(pg), None)
        kind = "planar"
    elif treewidth_upper(pg)[0] <= tw_max:
        kind = "tw"
    else:
        for k in (1, 2, 3):
            split = next((s for s in itertools.combinations(range(pg.n), k) if _separates(pg, s)), None)
            if split is not None:
                break
        if split is None:
            tree.diagnostics.append(f"piece on {len(vertices)} vertices is neither planar nor of treewidth <= {tw_max}")
    if split is None:
        tree.pieces.append(Piece(vertices, edges, virtual, kind))
        return len(tree.pieces) - 1
    sep = tuple(vertices[i] for i in split)
    comps = components_after_removal(pg, split).components
    clique_edges = {(min(a, b), max(a, b)) for a, b in itertools.combinations(sep, 2)}
    c_idx = len(tree.cliques)
    tree.cliques.append(tuple(sorted(sep)))
    first_piece = None
    for comp in comps:
        part = tuple(sorted({vertices[i] for i in comp} | set(sep)))
        pset = set(part)
        pedges = frozenset({e for e in edges if e[0] in pset and e[1] in pset} | clique_edges)
        before = len(tree.pieces)
        _decompose(g, part, pedges, tree, tw_max)
        # attach the clique to a piece of this part containing the whole clique
        host = next(i for i in range(before, len(tree.pieces)) if set(sep) <= set(tree.pieces[i].vertices))
        tree.incidence.append((host, c_idx))
        if first_piece is None:
            first_piece = host
    return first_piece


def find_central_node(g: Graph, t: CliqueSumTree) -> tuple[str, int]:
    """A node whose vertices' removal leaves only components smaller than n/2."""
    n = g.n

    def ok(node):
        return all(2 * s < n for s in components_after_removal(g, t.node_vertices(node)).sizes)

    cur = ("P", 0)
    seen = {cur}
    while not ok(cur):
        big = set(components_after_removal(g, t.node_vertices(cur)).largest())
        nxt = None
        for y in t.neighbors(cur):
            if y not in seen and t.side_vertices(y, cur) & big:
                nxt = y
                break
        if nxt is None:
            break
        seen.add(nxt)
        cur = nxt
    if ok(cur):
        return cur
    for node in t.nodes():
        if ok(node):
            return node
    raise GraphError("no central node exists")
