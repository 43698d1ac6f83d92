"""Balanced path separators, the two-path merge, and weighted cycle separators."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .embedding import Embedding, FaceSet, ensure_outer, interior_exterior, trace_faces
from .graph import BugSignal, Graph, GraphError, bfs_path, components_after_removal, scc

HALF = Fraction(1, 2)
TWO_THIRDS = Fraction(2, 3)
MAX_MERGE_PATHS = 16


@dataclass
class SeparatorReport:
    separator: list[int]
    alpha: Fraction
    n: int
    sizes: list[int]
    passed: bool

    def to_dict(self) -> dict:
        return {
            "separator": self.separator,
            "alpha": f"{self.alpha.numerator}/{self.alpha.denominator}",
            "n": self.n,
            "component_sizes": self.sizes,
            "passed": self.passed,
        }


def _as_fraction(alpha) -> Fraction:
    return alpha if isinstance(alpha, Fraction) else Fraction(alpha)


def check_separator_balance(g: Graph, sep: Iterable[int], alpha=HALF) -> SeparatorReport:
    """Every (strongly) connected component of ``g - sep`` must have at most ``alpha * n`` vertices."""
    alpha = _as_fraction(alpha)
    if not HALF <= alpha < 1:
        raise GraphError(f"alpha={alpha} outside [1/2, 1)")
    sep = sorted(set(sep))
    sizes = sorted(components_after_removal(g, sep).sizes, reverse=True)
    passed = all(s <= alpha * g.n for s in sizes)
    return SeparatorReport(sep, alpha, g.n, sizes, passed)


def is_balanced(g: Graph, sep: Iterable[int], alpha) -> bool:
    return check_separator_balance(g, sep, alpha).passed


def _dfs_tree(g: Graph, root: int) -> tuple[dict[int, int | None], dict[int, list[int]], list[int]]:
    parent: dict[int, int | None] = {root: None}
    children: dict[int, list[int]] = {root: []}
    order = [root]
    stack = [(root, iter(g.out_neighbors(root)))]
    while stack:
        v, it = stack[-1]
        for w in it:
            if w not in parent:
                parent[w] = v
                children[v].append(w)
                children[w] = []
                order.append(w)
                stack.append((w, iter(g.out_neighbors(w))))
                break
        else:
            stack.pop()
    return parent, children, order


def _heavy_descent(g: Graph, root: int, alpha: Fraction) -> list[int]:
    """Walk down a DFS tree into the heaviest child while that subtree is too large.

    A DFS tree has no cross edges between sibling subtrees in the direction
    needed to merge them into one (strong) component, so the hanging subtrees
    bound the leftover components.
    """
    parent, children, order = _dfs_tree(g, root)
    size = {v: 1 for v in order}
    for v in reversed(order):
        p = parent[v]
        if p is not None:
            size[p] += size[v]
    path = [root]
    limit = alpha * g.n
    while True:
        kids = children[path[-1]]
        if not kids:
            break
        heavy = max(kids, key=lambda c: (size[c], -c))
        if size[heavy] <= limit:
            break
        path.append(heavy)
    return path


def undirected_dfs_path_separator(g: Graph, alpha=HALF) -> list[int]:
    alpha = _as_fraction(alpha)
    if g.directed:
        raise GraphError("expected an undirected graph")
    if components_after_removal(g).sizes != [g.n]:
        raise GraphError("graph is not connected")
    path = _heavy_descent(g, 0, alpha)
    rep = check_separator_balance(g, path, alpha)
    if not rep.passed:
        raise BugSignal(f"DFS path separator failed balance: {rep.sizes}")
    return path


def directed_path_separator(g: Graph, alpha=TWO_THIRDS) -> list[int]:
    """A directed simple path whose removal leaves every SCC of size <= alpha*n.

    Rooted in the largest SCC; with no oversized SCC a single vertex suffices.
    """
    alpha = _as_fraction(alpha)
    if not g.directed:
        g = g.bidirected()
    if g.n == 0:
        return []
    comps = scc(g)
    big = comps.largest()
    if len(big) <= alpha * g.n:
        return [big[0]]
    path = _heavy_descent(g, big[0], alpha)
    rep = check_separator_balance(g, path, alpha)
    if not rep.passed:
        raise BugSignal(f"directed path separator failed balance: {rep.sizes}")
    # the subtree bound is conservative; keep the shortest prefix that still separates
    k = next(k for k in range(1, len(path) + 1) if is_balanced(g, path[:k], alpha))
    return path[:k]


def _check_path(g: Graph, p: Sequence[int]) -> None:
    if len(set(p)) != len(p):
        raise GraphError(f"path {list(p)} repeats a vertex")
    for a, b in zip(p, p[1:]):
        if not g.has_edge(a, b):
            raise GraphError(f"path step ({a}, {b}) is not an arc")


def kao_merge_pair(g: Graph, p1: Sequence[int], p2: Sequence[int], alpha=HALF) -> list[int]:
    """Merge two disjoint paths forming an alpha-separator into one path separator."""
    alpha = _as_fraction(alpha)
    dg = g if g.directed else g.bidirected()
    p1, p2 = list(p1), list(p2)
    _check_path(dg, p1)
    _check_path(dg, p2)
    if set(p1) & set(p2):
        raise GraphError("paths must be vertex-disjoint")
    if not is_balanced(dg, p1 + p2, alpha):
        raise GraphError("the two paths do not form an alpha-separator")

    # shortest prefix of p1 that still separates together with p2
    s = next(k for k in range(len(p1) + 1) if is_balanced(dg, p1[:k] + p2, alpha))
    q1 = p1[:s]
    # shortest suffix of p2 that still separates together with q1
    t = next(k for k in range(len(p2), -1, -1) if is_balanced(dg, q1 + p2[k:], alpha))
    q2 = p2[t:]
    if not q1 or not q2:
        out = q1 or q2
        if not out:
            out = directed_path_separator(dg, alpha)
        return out
    us, vt = q1[-1], q2[0]
    blocked = set(q1[:-1]) | set(q2[1:])
    alive = {v for v in range(dg.n) if v not in blocked}
    bridge = bfs_path(dg, us, vt, alive)
    if bridge is None:
        raise BugSignal(f"{us} cannot reach {vt} inside the shared large component")
    merged = q1[:-1] + bridge + q2[1:]
    _check_path(dg, merged)
    if not is_balanced(dg, merged, alpha):
        raise BugSignal("merged path is not balanced")
    return merged


def merge_multipath(g: Graph, paths: Sequence[Sequence[int]], alpha=HALF,
                    max_paths: int = MAX_MERGE_PATHS) -> list[int]:
    paths = [list(p) for p in paths if p]
    if len(paths) > max_paths:
        raise GraphError(f"{len(paths)} paths exceed the merge limit {max_paths}")
    if not paths:
        dg = g if g.directed else g.bidirected()
        if not is_balanced(dg, [], alpha):
            raise GraphError("empty path list is not a separator")
        return []
    merged = paths[0]
    for i, nxt in enumerate(paths[1:], start=1):
        rest = [v for p in paths[i + 1:] for v in p]
        # the not-yet-merged paths stay removed while this pair is merged
        merged = _merge_with_fixed(g, merged, nxt, rest, _as_fraction(alpha))
    dg = g if g.directed else g.bidirected()
    if not merged:
        merged = directed_path_separator(dg, alpha)
    _check_path(dg, merged)
    if not is_balanced(dg, merged, alpha):
        raise BugSignal("merged multipath separator is not balanced")
    return merged


def _merge_with_fixed(g: Graph, p1: list[int], p2: list[int], fixed: list[int], alpha: Fraction) -> list[int]:
    """kao_merge_pair where ``fixed`` vertices stay removed throughout (sizes still relative to n)."""
    dg = g if g.directed else g.bidirected()
    fixed_set = set(fixed)

    def ok(part: list[int]) -> bool:
        return is_balanced(dg, part + fixed, alpha)

    if not ok(p1 + p2):
        raise GraphError("paths do not form an alpha-separator")
    s = next(k for k in range(len(p1) + 1) if ok(p1[:k] + p2))
    q1 = p1[:s]
    t = next(k for k in range(len(p2), -1, -1) if ok(q1 + p2[k:]))
    q2 = p2[t:]
    if not q1 or not q2:
        return q1 or q2
    us, vt = q1[-1], q2[0]
    blocked = set(q1[:-1]) | set(q2[1:]) | fixed_set
    alive = {v for v in range(dg.n) if v not in blocked}
    bridge = bfs_path(dg, us, vt, alive)
    if bridge is None:
        raise BugSignal(f"{us} cannot reach {vt} inside the shared large component")
    return q1[:-1] + bridge + q2[1:]


# -- weighted cycle separators -------------------------------------------

@dataclass
class WeightAssignment:
    """Non-negative exact weights on vertices, edges (``(u, v)`` with u < v) and face indices."""

    vertex: dict[int, Fraction] = field(default_factory=dict)
    edge: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    face: dict[int, Fraction] = field(default_factory=dict)

    def total(self) -> Fraction:
        return sum(self.vertex.values(), Fraction(0)) + sum(self.edge.values(), Fraction(0)) \
            + sum(self.face.values(), Fraction(0))

    def normalized(self) -> "WeightAssignment":
        t = self.total()
        if t == 0:
            raise GraphError("total weight is zero")
        return WeightAssignment({k: v / t for k, v in self.vertex.items()},
                                {k: v / t for k, v in self.edge.items()},
                                {k: v / t for k, v in self.face.items()})

    def validate(self) -> None:
        for d in (self.vertex, self.edge, self.face):
            for k, v in d.items():
                if v < 0:
                    raise GraphError(f"negative weight at {k}")


def side_weights(g: Graph, emb: Embedding, w: WeightAssignment, cycle: Sequence[int],
                 faces: FaceSet | None = None) -> tuple[Fraction, Fraction]:
    r = interior_exterior(g, emb, cycle, faces)
    zero = Fraction(0)

    def tot(vs, es, fs):
        return (sum((w.vertex.get(v, zero) for v in vs), zero)
                + sum((w.edge.get(e, zero) for e in es), zero)
                + sum((w.face.get(f, zero) for f in fs), zero))

    return (tot(r.interior_vertices, r.interior_edges, r.interior_faces),
            tot(r.exterior_vertices, r.exterior_edges, r.exterior_faces))


def enumerate_cycles(g: Graph, max_len: int | None = None) -> Iterator[list[int]]:
    """Simple cycles ordered by (length, lexicographic canonical sequence).

    Canonical form: starts at its minimum vertex, second vertex smaller than last.
    """
    ug = g.underlying()
    top = ug.n if max_len is None else min(max_len, ug.n)
    for length in range(3, top + 1):
        for s in range(ug.n):
            path = [s]
            on = {s}

            def extend():
                v = path[-1]
                if len(path) == length:
                    if s in ug.neighbors(v) and path[1] < path[-1]:
                        yield list(path)
                    return
                for w in ug.neighbors(v):
                    if w > s and w not in on:
                        path.append(w)
                        on.add(w)
                        yield from extend()
                        path.pop()
                        on.discard(w)

            yield from extend()


def exact_search_limit() -> int:
    return int(os.environ.get("SEPDFS_EXACT_LIMIT", "40"))


class CycleSearchExhausted(BugSignal):
    pass


def cycle_separator(g: Graph, emb: Embedding, w: WeightAssignment, alpha=TWO_THIRDS,
                    mode: str = "heuristic", accept=None) -> list[int]:
    """A simple cycle with interior and exterior weight each at most ``alpha`` of the total.

    ``accept`` optionally filters candidate cycles (used to skip cycles that
    cannot be lifted back to a glued graph).
    """
    alpha = _as_fraction(alpha)
    ug = g.underlying()
    emb = ensure_outer(ug, emb)
    w.validate()
    faces = trace_faces(ug, emb)
    total = w.total()
    if total == 0:
        raise GraphError("total weight is zero")
    for f, fw in w.face.items():
        if fw > alpha * total:
            raise GraphError(f"face {f} is heavier than alpha")

    def good(c: list[int]) -> bool:
        if accept is not None and not accept(c):
            return False
        i, e = side_weights(ug, emb, w, c, faces)
        return i <= alpha * total and e <= alpha * total

    if mode == "heuristic":
        for c in _fundamental_cycles(ug):
            if good(c):
                return c
        mode = "exact"
    if mode != "exact":
        raise GraphError(f"unknown mode {mode!r}")
    for c in enumerate_cycles(ug):
        if good(c):
            return c
    raise CycleSearchExhausted("no balanced cycle exists; contradicts the weighted separator theorem")


def _fundamental_cycles(g: Graph) -> Iterator[list[int]]:
    from .graph import bfs_arborescence

    seen: set[tuple[int, ...]] = set()
    dg = g.bidirected()
    for root in range(g.n):
        t = bfs_arborescence(dg, root)
        tree = t.tree_edges()
        for u, v in g.edges:
            if (u, v) in tree or (v, u) in tree:
                continue
            pu, pv = t.path_from_root(u), t.path_from_root(v)
            k = 0
            while k < min(len(pu), len(pv)) and pu[k] == pv[k]:
                k += 1
            cyc = pu[k - 1:] + pv[k:][::-1]
            key = tuple(sorted(cyc))
            if len(cyc) >= 3 and key not in seen:
                seen.add(key)
                yield cyc
