"""Path separators for embedded digraphs of bounded genus.

Surface non-separating fundamental cycles are stripped until the big strong
component left over is planar, then a planar-phase path separator is added
and everything is merged into one path.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .embedding import Embedding, euler_genus, face_boundary_basis, induced_embedding, is_surface_separating
from .graph import BugSignal, Graph, GraphError, RootedTree, bfs_arborescence, components_after_removal
from .separators import TWO_THIRDS, check_separator_balance, directed_path_separator, merge_multipath

log = logging.getLogger(__name__)


@dataclass
class CycleAsTwoPaths:
    first: list[int]   # starts at the common ancestor
    second: list[int]  # may be empty when the cycle is directed
    closing: tuple[int, int]

    @property
    def cycle(self) -> list[int]:
        return self.first + self.second[::-1]


@dataclass
class GenusSeparation:
    paths: list[list[int]]
    cycles: list[CycleAsTwoPaths] = field(default_factory=list)
    genus: int = 0
    fallback: bool = False
    over_budget: bool = False  # more than genus-many cycles were needed
    notes: list[str] = field(default_factory=list)


def _is_planar(g: Graph) -> bool:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.underlying().edges)
    return nx.check_planarity(h)[0]


def find_nonseparating_fundamental_cycle(g: Graph, emb: Embedding, arb: RootedTree) -> CycleAsTwoPaths:
    """First non-tree arc (by id) whose fundamental cycle is not null-homologous."""
    ug = g.underlying()
    if euler_genus(ug, emb) == 0:
        raise GraphError("embedding is planar; every cycle separates")
    dg = g if g.directed else g.bidirected()
    basis = face_boundary_basis(ug, emb)
    tree = arb.tree_edges()
    depth = {v: arb.depth(v) for v in arb.parent}
    for u, v in dg.edges:
        if (u, v) in tree or (v, u) in tree or u not in depth or v not in depth:
            continue
        pu, pv = arb.path_from_root(u), arb.path_from_root(v)
        k = 0
        while k < min(len(pu), len(pv)) and pu[k] == pv[k]:
            k += 1
        first = pu[k - 1:]
        second = pv[k:]
        cyc = first + second[::-1]
        if len(cyc) < 3:
            continue
        if not is_surface_separating(cyc, ug, emb, basis):
            return CycleAsTwoPaths(first, second, (u, v))
    raise BugSignal("no fundamental cycle is surface non-separating although the genus is positive")


def genus_multipath_separator(g: Graph, emb: Embedding, alpha=TWO_THIRDS) -> GenusSeparation:
    alpha = Fraction(alpha)
    dg = g if g.directed else g.bidirected()
    ug = dg.underlying()
    n = dg.n
    comps0 = components_after_removal(ug).components
    genus0 = sum(euler_genus(*_induced(ug, emb, c)) for c in comps0)
    cap = 2 * genus0
    removed: set[int] = set()
    res = GenusSeparation([], genus=genus0)
    while True:
        sccs = components_after_removal(dg, removed)
        big = sccs.largest()
        if len(big) <= alpha * n:
            break
        sub, old = dg.subgraph(big)
        sub_emb = induced_embedding(ug, emb, big, relabel=True)
        sub_u = sub.underlying()
        planar = euler_genus(sub_u, sub_emb) == 0
        if not planar and _is_planar(sub_u):
            res.notes.append(f"component of size {len(big)} is planar but its induced embedding is not")
            planar = True
        if planar:
            p = directed_path_separator(sub, alpha)
            res.paths.append([old[v] for v in p])
            break
        if len(res.cycles) >= cap:
            res.fallback = True
            res.notes.append("cycle extraction cap reached")
            break
        arb = bfs_arborescence(sub, 0)
        c = find_nonseparating_fundamental_cycle(sub, sub_emb, arb)
        assert not is_surface_separating(c.cycle, sub_u, sub_emb)
        mapped = CycleAsTwoPaths([old[v] for v in c.first], [old[v] for v in c.second],
                                 (old[c.closing[0]], old[c.closing[1]]))
        res.cycles.append(mapped)
        res.paths.extend(p for p in (mapped.first, mapped.second) if p)
        removed |= set(mapped.cycle)
    if len(res.cycles) > genus0:
        res.over_budget = True
    sep = [v for p in res.paths for v in p]
    if res.fallback or not check_separator_balance(dg, sep, alpha).passed:
        res.fallback = True
        res.paths = [directed_path_separator(dg, alpha)]
        log.info("genus pipeline fell back to the generic directed separator")
    return res


def _induced(ug: Graph, emb: Embedding, comp) -> tuple[Graph, Embedding]:
    sub, _ = ug.subgraph(comp)
    return sub, induced_embedding(ug, emb, comp, relabel=True)


def genus_path_separator(g: Graph, emb: Embedding, alpha=TWO_THIRDS) -> list[int]:
    sep = genus_multipath_separator(g, emb, alpha)
    if not sep.paths:
        return directed_path_separator(g if g.directed else g.bidirected(), alpha)
    return merge_multipath(g if g.directed else g.bidirected(), sep.paths, alpha)
