"""DFS trees: lex-first DFS, lex-first paths, verification and separator-driven DFS."""

from __future__ import annotations

import logging
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .graph import BugSignal, Graph, GraphError, RootedTree, bfs_path, reachable
from .separators import TWO_THIRDS, directed_path_separator, is_balanced

log = logging.getLogger(__name__)

DfsTree = RootedTree


def _rank(g: Graph, order: Sequence[int] | None) -> list[int]:
    if order is None:
        return list(range(g.n))
    if sorted(order) != list(range(g.n)):
        raise GraphError("vertex order must be a permutation of 0..n-1")
    rank = [0] * g.n
    for i, v in enumerate(order):
        rank[v] = i
    return rank


def _arcs(g: Graph) -> Graph:
    return g if g.directed else g.bidirected()


def lex_dfs(g: Graph, root: int, order: Sequence[int] | None = None) -> DfsTree:
    """The DFS tree obtained by always exploring the least unvisited neighbour."""
    rank = _rank(g, order)
    dg = _arcs(g)
    parent: dict[int, int | None] = {root: None}
    children: dict[int, list[int]] = {root: []}
    nbrs = lambda v: iter(sorted(dg.out_neighbors(v), key=rank.__getitem__))
    stack = [(root, nbrs(root))]
    while stack:
        v, it = stack[-1]
        for w in it:
            if w not in parent:
                parent[w] = v
                children[v].append(w)
                children[w] = []
                stack.append((w, nbrs(w)))
                break
        else:
            stack.pop()
    return RootedTree(root, parent, children)


def euler_numbering(t: DfsTree, order: Sequence[int] | None = None) -> dict[int, int]:
    """Preorder numbers, visiting children in increasing ``order`` rank."""
    n = max(t.parent) + 1 if t.parent else 0
    rank = list(range(n)) if order is None else {v: i for i, v in enumerate(order)}
    num: dict[int, int] = {}
    stack = [t.root]
    while stack:
        v = stack.pop()
        num[v] = len(num)
        stack.extend(sorted(t.children.get(v, []), key=lambda c: rank[c], reverse=True))
    return num


def lex_min_path(g: Graph, root: int, target: int, order: Sequence[int] | None = None) -> list[int]:
    """Least simple ``root -> target`` path under first-divergence comparison.

    Greedy descent over neighbours in rank order, pruning any step after which
    the target is unreachable without reusing a path vertex.  The first
    surviving extension always completes, so no backtracking is needed.
    """
    rank = _rank(g, order)
    dg = _arcs(g)
    if target not in reachable(dg, root):
        raise GraphError(f"{target} is not reachable from {root}")
    path = [root]
    used = {root}
    while path[-1] != target:
        v = path[-1]
        for w in sorted(dg.out_neighbors(v), key=rank.__getitem__):
            if w in used:
                continue
            alive = set(range(dg.n)) - used
            if w == target or target in reachable(dg, w, alive):
                path.append(w)
                used.add(w)
                break
        else:
            raise BugSignal("lex-min path search got stuck")
    return path


def lex_dfs_edge_test(g: Graph, edge: tuple[int, int], root: int, order: Sequence[int] | None = None) -> bool:
    """Is ``edge`` (u, v) the last edge of the lex-first root->v path?"""
    u, v = edge
    if v == root or v not in reachable(_arcs(g), root):
        return False
    p = lex_min_path(g, root, v, order)
    return len(p) >= 2 and p[-2] == u


def lex_tree_edges(g: Graph, root: int, order: Sequence[int] | None = None) -> set[tuple[int, int]]:
    return {e for e in _arcs(g).edges if lex_dfs_edge_test(g, e, root, order)}


# -- verification ---------------------------------------------------------

@dataclass
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_dfs_tree(g: Graph, t: DfsTree, respect_order: bool = False) -> Verdict:
    """Does some neighbour ordering make a DFS from ``t.root`` produce ``t``?

    Non-tree arcs between incomparable vertices force the head's branch to be
    explored before the tail's branch; those constraints must be acyclic at
    every branching vertex.  With ``respect_order`` the recorded child order
    itself must satisfy them.
    """
    dg = _arcs(g)
    r = t.root
    reach = reachable(dg, r)
    if set(t.parent) != reach:
        missing = sorted(reach - set(t.parent))
        extra = sorted(set(t.parent) - reach)
        return Verdict(False, f"tree does not span the reachable set (missing {missing[:5]}, extra {extra[:5]})")
    depth = {r: 0}
    for v in t.preorder():
        for c in t.children.get(v, []):
            if t.parent.get(c) != v:
                return Verdict(False, f"child list of {v} disagrees with parent map at {c}")
            if not dg.has_edge(v, c):
                return Verdict(False, f"tree edge ({v}, {c}) is not an arc")
            depth[c] = depth[v] + 1
    if len(depth) != len(t.parent):
        return Verdict(False, "parent map is not a tree rooted at the root")

    def lift(v: int, d: int) -> int:
        while depth[v] > d:
            v = t.parent[v]
        return v

    constraints: dict[int, set[tuple[int, int]]] = {}
    for u, v in dg.edges:
        if u not in depth:
            continue
        if t.parent.get(v) == u:
            continue
        a, b = u, v
        du, dv = depth[a], depth[b]
        d = min(du, dv)
        a1, b1 = lift(a, d), lift(b, d)
        if a1 == b1:
            continue  # ancestor/descendant
        while t.parent[a1] != t.parent[b1]:
            a1, b1 = t.parent[a1], t.parent[b1]
        # v's branch (b1) must precede u's branch (a1)
        constraints.setdefault(t.parent[a1], set()).add((b1, a1))
    for p, cons in constraints.items():
        kids = t.children[p]
        if respect_order:
            pos = {c: i for i, c in enumerate(kids)}
            for x, y in cons:
                if pos[x] > pos[y]:
                    return Verdict(False, f"child order at {p} puts {y} before {x}")
        elif not _acyclic(kids, cons):
            return Verdict(False, f"incompatible cross arcs below vertex {p}")
    return Verdict(True)


def _acyclic(nodes: list[int], arcs: set[tuple[int, int]]) -> bool:
    indeg = {v: 0 for v in nodes}
    out: dict[int, list[int]] = {v: [] for v in nodes}
    for x, y in arcs:
        out[x].append(y)
        indeg[y] += 1
    ready = [v for v in nodes if indeg[v] == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return seen == len(nodes)


# -- separator-driven DFS -------------------------------------------------

SeparatorFn = Callable[[Graph, list[int]], list[int]]


@dataclass
class SeparatorDfsResult:
    tree: DfsTree
    depth: int
    frames: int
    separator_calls: int
    fallbacks: list[str] = field(default_factory=list)

    @property
    def fell_back(self) -> bool:
        return bool(self.fallbacks)

    @staticmethod
    def depth_bound(n: int) -> int:
        return math.ceil(math.log(max(n, 2), 1.5)) + 2


def separator_dfs(g: Graph, root: int, sep_fn: SeparatorFn | None = None,
                  alpha: Fraction = TWO_THIRDS) -> SeparatorDfsResult:
    """Divide-and-conquer DFS driven by balanced path separators.

    ``sep_fn(sub, old)`` receives the induced subgraph of a strongly connected
    region (relabelled) plus the new->old vertex map and returns a path of
    ``sub`` that is an ``alpha``-separator of it.

    Each region carries a level; the top region is level 0.  A region drawn
    entirely from the leftover of its anchor's separator-free part is one
    level deeper and at most ``alpha`` times the anchor's size, so the level
    is bounded by ``log_{1/alpha} n``.
    """
    if sep_fn is None:
        sep_fn = lambda sub, old: directed_path_separator(sub, alpha)
    dg = _arcs(g)
    st = _SepDfs(dg, sep_fn, alpha)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20 * dg.n + 1000))
    try:
        st.explore(root, None, set(range(dg.n)), _Ctx(-1, dg.n, frozenset(), ()))
    finally:
        sys.setrecursionlimit(limit)
    tree = RootedTree(root, st.parent, st.children)
    res = SeparatorDfsResult(tree, st.max_level, st.max_frames, st.calls, st.fallbacks)
    if not verify_dfs_tree(g, tree):
        log.warning("separator DFS produced an invalid tree; falling back to lex DFS")
        return SeparatorDfsResult(lex_dfs(g, root), st.max_level, st.max_frames, st.calls,
                                  st.fallbacks + ["invalid tree; sequential lex DFS used"])
    return res


@dataclass(frozen=True)
class _Ctx:
    level: int
    anchor: int
    pending: frozenset
    sep: tuple  # the anchor separator as an ordered path


class _SepDfs:
    def __init__(self, g: Graph, sep_fn: SeparatorFn, alpha: Fraction):
        self.g = g
        self.sep_fn = sep_fn
        self.alpha = alpha
        self.parent: dict[int, int | None] = {}
        self.children: dict[int, list[int]] = {}
        self.max_level = 0
        self.max_frames = 0
        self.calls = 0
        self.fallbacks: list[str] = []
        self._frames = 0

    def _visit(self, v: int, p: int | None) -> None:
        self.parent[v] = p
        self.children[v] = []
        if p is not None:
            self.children[p].append(v)

    def _scc_of(self, y: int, scope: set[int]) -> set[int]:
        alive = {v for v in scope if v not in self.parent}
        fwd = reachable(self.g, y, alive)
        bwd = {y}
        stack = [y]
        while stack:
            v = stack.pop()
            for w in self.g.in_neighbors(v):
                if w in fwd and w not in bwd:
                    bwd.add(w)
                    stack.append(w)
        return bwd

    def explore(self, y: int, p: int | None, scope: set[int], ctx: _Ctx) -> None:
        """DFS from unvisited ``y`` inside ``scope`` among unvisited vertices."""
        self._frames += 1
        self.max_frames = max(self.max_frames, self._frames)
        region = self._scc_of(y, scope)
        pending = ctx.pending & region
        if not pending or len(region) <= self.alpha * ctx.anchor:
            rctx = _Ctx(ctx.level + 1, len(region), frozenset(), ())
        else:
            rctx = _Ctx(ctx.level, ctx.anchor, pending, ctx.sep)
        self.max_level = max(self.max_level, rctx.level)
        self._visit(y, p)
        before = len(self.parent)
        self._solve_region(region, y, rctx)
        assert len(self.parent) - before == len(region) - 1
        post = self._postorder(y)
        for x in post:
            for z in self.g.out_neighbors(x):
                if z in scope and z not in self.parent:
                    self.explore(z, x, scope, ctx)
        self._frames -= 1

    def _postorder(self, y: int) -> list[int]:
        out = []
        stack = [(y, False)]
        while stack:
            v, done = stack.pop()
            if done:
                out.append(v)
                continue
            stack.append((v, True))
            for c in reversed(self.children[v]):
                stack.append((c, False))
        return out

    def _separator(self, region: set[int]) -> tuple[int, ...]:
        sub, old = self.g.subgraph(region)
        self.calls += 1
        try:
            path = self.sep_fn(sub, old)
            if not path or not is_balanced(sub, path, self.alpha):
                raise GraphError("strategy returned an unbalanced separator")
            for a, b in zip(path, path[1:]):
                if not sub.has_edge(a, b):
                    raise GraphError("strategy returned a non-path")
        except (GraphError, BugSignal) as exc:
            self.fallbacks.append(f"region of size {len(region)}: {exc}; generic separator used")
            path = directed_path_separator(sub, self.alpha)
        return tuple(old[v] for v in path)

    def _solve_region(self, region: set[int], y: int, ctx: _Ctx) -> None:
        """Build a DFS tree of the strongly connected ``region`` rooted at the visited ``y``."""
        if len(region) == 1:
            return
        if not ctx.pending:
            sep = self._separator(region)
            ctx = _Ctx(ctx.level, len(region), frozenset(sep), sep)
        pending = ctx.pending
        # root path: shortest route to the pending separator, then along it
        alive = {v for v in region if v not in self.parent} | {y}
        route = bfs_path(self.g, y, set(pending), alive)
        if route is None:
            raise BugSignal("strongly connected region cannot reach its separator")
        pos = {v: i for i, v in enumerate(ctx.sep)}
        rest = list(route)
        on = set(rest)
        i = pos[rest[-1]] + 1
        while i < len(ctx.sep):
            w = ctx.sep[i]
            if w not in region or w in self.parent or w in on or not self.g.has_edge(rest[-1], w):
                break
            rest.append(w)
            on.add(w)
            i += 1
        for a, b in zip(rest, rest[1:]):
            self._visit(b, a)
        inner = _Ctx(ctx.level, ctx.anchor, pending - on, ctx.sep)
        for x in reversed(rest):
            for z in self.g.out_neighbors(x):
                if z in region and z not in self.parent:
                    self.explore(z, x, region, inner)


# -- MSO formulas, evaluated by brute force over edge sets -----------------

MSO_MAX_ARCS = 16


class MsoModel:
    """The structure over vertices and arcs with tail/head relations and a linear order.

    Edge-set variables range over all subsets of the arc set, encoded as ints.
    ``literal=True`` evaluates the formulas verbatim; the default applies the
    three repairs needed for them to describe lex-first DFS membership (the
    root has no in-arc and one out-arc; a path is not compared with itself;
    paths may diverge at the root with an empty common prefix).
    """

    def __init__(self, g: Graph, root: int, order: Sequence[int] | None = None, literal: bool = False):
        self.g = _arcs(g)
        if self.g.m > MSO_MAX_ARCS:
            raise GraphError(f"{self.g.m} arcs exceed the brute-force limit {MSO_MAX_ARCS}")
        self.r = root
        self.rank = _rank(g, order)
        self.literal = literal
        self.arcs = list(self.g.edges)
        self.arc_id = {e: i for i, e in enumerate(self.arcs)}
        self._paths: list[int] | None = None

    # atomic helpers
    def tail(self, e: int, v: int) -> bool:
        return self.arcs[e][0] == v

    def head(self, e: int, v: int) -> bool:
        return self.arcs[e][1] == v

    def members(self, P: int) -> list[int]:
        return [i for i in range(len(self.arcs)) if (P >> i) & 1]

    def phi_edge(self, P: int, u: int, v: int) -> bool:
        e = self.arc_id.get((u, v))
        return e is not None and bool((P >> e) & 1)

    def phi_sub(self, P1: int, P2: int) -> bool:
        return P1 & ~P2 == 0

    def phi_conn(self, P: int) -> bool:
        es = self.members(P)
        if not es:
            return True
        vs = {x for e in es for x in self.arcs[e]}
        start = next(iter(vs))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for e in es:
                a, b = self.arcs[e]
                for s, t in ((a, b), (b, a)):
                    if s == x and t not in seen:
                        seen.add(t)
                        stack.append(t)
        return seen == vs

    def phi_ep(self, P: int, v: int) -> bool:
        ins = sum(1 for u in self.g.in_neighbors(v) if self.phi_edge(P, u, v))
        outs = any(self.phi_edge(P, v, w) for w in self.g.out_neighbors(v))
        return ins == 1 and not outs

    def phi_path(self, P: int) -> bool:
        if not self.phi_conn(P):
            return False
        ends = [v for v in range(self.g.n) if v != self.r and self.phi_ep(P, v)]
        if len(ends) != 1:
            return False
        touched = {x for e in self.members(P) for x in self.arcs[e]}
        if not self.literal:
            # repair: r starts the path
            if self.r not in touched:
                return False
            if any(self.phi_edge(P, u, self.r) for u in self.g.in_neighbors(self.r)):
                return False
            if sum(1 for w in self.g.out_neighbors(self.r) if self.phi_edge(P, self.r, w)) != 1:
                return False
        for u in touched:
            if self.phi_ep(P, u):
                continue
            if not self.literal and u == self.r:
                continue
            xs = [x for x in self.g.in_neighbors(u) if self.phi_edge(P, x, u)]
            ys = [y for y in self.g.out_neighbors(u) if self.phi_edge(P, u, y)]
            if not (len(xs) == 1 and len(ys) == 1 and xs[0] != ys[0]):
                return False
        return True

    def path_sets(self) -> list[int]:
        """All edge sets satisfying phi_path (cheap degree filter first)."""
        if self._paths is None:
            out = []
            m = len(self.arcs)
            for P in range(1 << m):
                if self._degree_ok(P) and self.phi_path(P):
                    out.append(P)
            self._paths = out
        return self._paths

    def _degree_ok(self, P: int) -> bool:
        # necessary for phi_path under both readings: in/out degree at most one
        ins: dict[int, int] = {}
        outs: dict[int, int] = {}
        while P:
            low = P & -P
            a, b = self.arcs[low.bit_length() - 1]
            outs[a] = outs.get(a, 0) + 1
            ins[b] = ins.get(b, 0) + 1
            if outs[a] > 1 or ins[b] > 1:
                return False
            P ^= low
        return bool(ins)

    def phi_lex(self, P1: int, P2: int) -> bool:
        if not (P1 in self._path_set() and P2 in self._path_set()):
            return False
        prefixes = [P for P in self.path_sets() if self.phi_sub(P, P1) and self.phi_sub(P, P2)]
        cands: list[tuple[int, int]] = [(P, ud) for P in prefixes for ud in range(self.g.n) if self.phi_ep(P, ud)]
        if not self.literal:
            cands.append((0, self.r))  # repair: divergence right at the root
        for P, ud in cands:
            if P & ~(P1 & P2):
                continue
            for u1 in self.g.out_neighbors(ud):
                if not self.phi_edge(P1, ud, u1):
                    continue
                for u2 in self.g.out_neighbors(ud):
                    if u1 != u2 and self.phi_edge(P2, ud, u2) and self.rank[u1] < self.rank[u2]:
                        return True
        return False

    def _path_set(self) -> set[int]:
        if not hasattr(self, "_pset"):
            self._pset = set(self.path_sets())
        return self._pset

    def phi_dfs(self, u: int, v: int) -> bool:
        ends_v = [P for P in self.path_sets() if self.phi_ep(P, v)]
        for P1 in ends_v:
            if not self.phi_edge(P1, u, v):
                continue
            if all(self.phi_lex(P1, P2) for P2 in ends_v if self.literal or P2 != P1):
                return True
        return False


def mso_eval_phi_dfs(g: Graph, edge: tuple[int, int], root: int, order: Sequence[int] | None = None,
                     literal: bool = False, model: MsoModel | None = None) -> bool:
    model = model or MsoModel(g, root, order, literal)
    return model.phi_dfs(*edge)
