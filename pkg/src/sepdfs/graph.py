"""Graph container and connectivity primitives.

Vertices are dense integers ``0..n-1``.  Every routine iterates in ascending
vertex order so results are reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Raised when an input violates a precondition."""


class BugSignal(RuntimeError):
    """A step that is guaranteed to succeed by the underlying theory failed."""


@dataclass(frozen=True)
class Graph:
    n: int
    directed: bool
    edges: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self) -> None:
        norm = []
        seen = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) has an endpoint outside [0, {self.n})")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not self.directed and u > v:
                u, v = v, u
            if (u, v) in seen:
                raise GraphError(f"parallel edge ({u}, {v})")
            seen.add((u, v))
            norm.append((u, v))
        object.__setattr__(self, "edges", tuple(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], directed: bool = False) -> "Graph":
        """Build a graph, silently dropping duplicate edges (handy for generators)."""
        out = []
        seen = set()
        for u, v in edges:
            key = (u, v) if directed else (min(u, v), max(u, v))
            if u != v and key not in seen:
                seen.add(key)
                out.append(key)
        return cls(n, directed, tuple(out))

    @cached_property
    def _out(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            if not self.directed:
                adj[v].append(u)
        for a in adj:
            a.sort()
        return adj

    @cached_property
    def _in(self) -> list[list[int]]:
        if not self.directed:
            return self._out
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[v].append(u)
        for a in adj:
            a.sort()
        return adj

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def out_neighbors(self, v: int) -> list[int]:
        return self._out[v]

    def in_neighbors(self, v: int) -> list[int]:
        return self._in[v]

    def neighbors(self, v: int) -> list[int]:
        """All neighbours ignoring direction."""
        if not self.directed:
            return self._out[v]
        return sorted(set(self._out[v]) | set(self._in[v]))

    def has_edge(self, u: int, v: int) -> bool:
        if self.directed:
            return (u, v) in self.edge_set
        return (min(u, v), max(u, v)) in self.edge_set

    def adjacent(self, u: int, v: int) -> bool:
        """Adjacency ignoring direction."""
        return (u, v) in self.edge_set or (v, u) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def bidirected(self) -> "Graph":
        if self.directed:
            return self
        arcs = []
        for u, v in self.edges:
            arcs.append((u, v))
            arcs.append((v, u))
        return Graph(self.n, True, tuple(sorted(arcs)))

    def underlying(self) -> "Graph":
        if not self.directed:
            return self
        return Graph.from_edges(self.n, self.edges, directed=False)

    def subgraph(self, keep: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``keep`` relabelled densely; returns (graph, new->old map)."""
        old = sorted(set(keep))
        idx = {v: i for i, v in enumerate(old)}
        edges = [(idx[u], idx[v]) for u, v in self.edges if u in idx and v in idx]
        return Graph(len(old), self.directed, tuple(edges)), old


@dataclass(frozen=True)
class ComponentMap:
    """Component id per surviving vertex (``-1`` for removed vertices)."""

    label: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.components]

    def largest(self) -> tuple[int, ...]:
        if not self.components:
            return ()
        return max(self.components, key=lambda c: (len(c), -c[0]))


def _component_map(n: int, comps: list[list[int]]) -> ComponentMap:
    comps = sorted((sorted(c) for c in comps), key=lambda c: c[0])
    label = [-1] * n
    for i, c in enumerate(comps):
        for v in c:
            label[v] = i
    return ComponentMap(tuple(label), tuple(tuple(c) for c in comps))


def _check_ids(g: Graph, vs: Iterable[int]) -> set[int]:
    out = set()
    for v in vs:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} is not in the graph")
        out.add(v)
    return out


def _scc_lists(g: Graph, alive: list[bool]) -> list[list[int]]:
    # iterative Tarjan
    n = g.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for s in range(n):
        if not alive[s] or index[s] != -1:
            continue
        work = [(s, 0)]
        index[s] = low[s] = counter
        counter += 1
        stack.append(s)
        on_stack[s] = True
        while work:
            v, i = work[-1]
            nbrs = g.out_neighbors(v)
            if i < len(nbrs):
                work[-1] = (v, i + 1)
                w = nbrs[i]
                if not alive[w]:
                    continue
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    p = work[-1][0]
                    low[p] = min(low[p], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(comp)
    return comps


def _cc_lists(g: Graph, alive: list[bool]) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if not alive[s] or seen[s]:
            continue
        seen[s] = True
        comp = [s]
        q = deque([s])
        while q:
            v = q.popleft()
            for w in g.neighbors(v):
                if alive[w] and not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    q.append(w)
        comps.append(comp)
    return comps


def scc(g: Graph) -> ComponentMap:
    """Strongly connected components, numbered by smallest member."""
    if not g.directed:
        raise GraphError("scc requires a directed graph")
    return _component_map(g.n, _scc_lists(g, [True] * g.n))


def components_after_removal(g: Graph, removed: Iterable[int] = ()) -> ComponentMap:
    """(Strongly) connected components of ``g - removed``."""
    gone = _check_ids(g, removed)
    alive = [v not in gone for v in range(g.n)]
    comps = _scc_lists(g, alive) if g.directed else _cc_lists(g, alive)
    return _component_map(g.n, comps)


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return len(_cc_lists(g.underlying(), [True] * g.n)) == 1


def reachable(g: Graph, src: int, alive: set[int] | None = None) -> set[int]:
    """Vertices reachable from ``src`` (following arc directions) inside ``alive``."""
    seen = {src}
    q = deque([src])
    while q:
        v = q.popleft()
        for w in g.out_neighbors(v):
            if w not in seen and (alive is None or w in alive):
                seen.add(w)
                q.append(w)
    return seen


def bfs_path(g: Graph, src: int, dst: int | set[int], alive: set[int] | None = None) -> list[int] | None:
    """Shortest path from ``src`` to ``dst`` (or any vertex of a target set), least-id tiebreak."""
    targets = dst if isinstance(dst, set) else {dst}
    if src in targets:
        return [src]
    parent = {src: src}
    q = deque([src])
    while q:
        v = q.popleft()
        for w in g.out_neighbors(v):
            if w in parent or (alive is not None and w not in alive):
                continue
            parent[w] = v
            if w in targets:
                path = [w]
                while path[-1] != src:
                    path.append(parent[path[-1]])
                return path[::-1]
            q.append(w)
    return None


@dataclass
class RootedTree:
    """Rooted spanning tree with ordered children."""

    root: int
    parent: dict[int, int | None]
    children: dict[int, list[int]]

    def vertices(self) -> list[int]:
        return sorted(self.parent)

    def path_from_root(self, v: int) -> list[int]:
        out = [v]
        while self.parent[out[-1]] is not None:
            out.append(self.parent[out[-1]])
        return out[::-1]

    def depth(self, v: int) -> int:
        return len(self.path_from_root(v)) - 1

    def tree_edges(self) -> set[tuple[int, int]]:
        return {(p, v) for v, p in self.parent.items() if p is not None}

    def preorder(self) -> list[int]:
        out = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(self.children.get(v, [])))
        return out


def bfs_arborescence(g: Graph, root: int, within: set[int] | None = None) -> RootedTree:
    """BFS out-tree from ``root``; each parent is the least-id in-neighbour one layer up.

    Raises if some vertex (of ``within``) is unreachable.
    """
    scope = set(range(g.n)) if within is None else set(within)
    dist = {root: 0}
    layer = [root]
    while layer:
        nxt = []
        for v in layer:
            for w in g.out_neighbors(v):
                if w in scope and w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        layer = nxt
    missing = sorted(scope - set(dist))
    if missing:
        raise GraphError(f"vertex {missing[0]} is not reachable from root {root}")
    parent: dict[int, int | None] = {root: None}
    children: dict[int, list[int]] = {v: [] for v in dist}
    for w in sorted(dist, key=lambda x: (dist[x], x)):
        if w == root:
            continue
        p = min(u for u in g.in_neighbors(w) if dist.get(u) == dist[w] - 1)
        parent[w] = p
        children[p].append(w)
    return RootedTree(root, parent, children)


@dataclass
class BlockCutTree:
    blocks: list[frozenset[int]]
    articulation: list[int]
    # (block index, articulation vertex) incidences
    incidence: list[tuple[int, int]]

    def blocks_of(self, v: int) -> list[int]:
        return [i for i, b in enumerate(self.blocks) if v in b]


def biconnected_blocks(g: Graph) -> tuple[list[frozenset[int]], set[int]]:
    """Hopcroft-Tarjan blocks (vertex sets) and articulation points of an undirected graph."""
    n = g.n
    disc = [-1] * n
    low = [0] * n
    blocks: list[frozenset[int]] = []
    art: set[int] = set()
    t = 0
    for s in range(n):
        if disc[s] != -1:
            continue
        disc[s] = low[s] = t
        t += 1
        if not g.neighbors(s):
            blocks.append(frozenset([s]))
            continue
        estack: list[tuple[int, int]] = []
        work = [(s, -1, 0)]
        root_children = 0
        while work:
            v, p, i = work[-1]
            nbrs = g.neighbors(v)
            if i < len(nbrs):
                work[-1] = (v, p, i + 1)
                w = nbrs[i]
                if disc[w] == -1:
                    disc[w] = low[w] = t
                    t += 1
                    estack.append((v, w))
                    work.append((w, v, 0))
                    if v == s:
                        root_children += 1
                elif w != p and disc[w] < disc[v]:
                    estack.append((v, w))
                    low[v] = min(low[v], disc[w])
            else:
                work.pop()
                if p == -1:
                    continue
                low[p] = min(low[p], low[v])
                if low[v] >= disc[p]:
                    if p != s:
                        art.add(p)
                    comp = set()
                    while True:
                        e = estack.pop()
                        comp.update(e)
                        if e == (p, v):
                            break
                    blocks.append(frozenset(comp))
        if root_children >= 2:
            art.add(s)
    blocks.sort(key=lambda b: sorted(b))
    return blocks, art


def block_cut_tree(g: Graph) -> BlockCutTree:
    if g.directed:
        raise GraphError("block_cut_tree requires an undirected graph")
    if not is_connected(g):
        raise GraphError("block_cut_tree requires a connected graph")
    blocks, art = biconnected_blocks(g)
    inc = [(i, a) for i, b in enumerate(blocks) for a in sorted(art) if a in b]
    return BlockCutTree(blocks, sorted(art), inc)


def is_biconnected(g: Graph) -> bool:
    if g.n < 3 or not is_connected(g):
        return g.n == 2 and g.m == 1
    blocks, art = biconnected_blocks(g)
    return not art and len(blocks) == 1


def vertex_disjoint_via(g: Graph, a: int, mid: int, b: int,
                        alive: set[int] | None = None) -> tuple[list[int], list[int]] | None:
    """Two paths ``a..mid`` and ``mid..b`` sharing only ``mid``, or ``None``.

    Unit vertex capacities by splitting, flow of value 2 from ``mid`` to the
    super-sink ``{a, b}``.
    """
    if len({a, mid, b}) < 3:
        raise GraphError("terminals must be distinct")
    ug = g.underlying()
    scope = set(range(ug.n)) if alive is None else set(alive)
    if not {a, mid, b} <= scope:
        return None
    # node v -> in = 2v, out = 2v+1 ; sink = 2n
    sink = 2 * ug.n
    cap: dict[tuple[int, int], int] = {}
    adj: dict[int, list[int]] = {}

    def add(x: int, y: int, c: int) -> None:
        if (x, y) not in cap:
            adj.setdefault(x, []).append(y)
            adj.setdefault(y, []).append(x)
            cap[(x, y)] = 0
            cap.setdefault((y, x), 0)
        cap[(x, y)] += c

    for v in sorted(scope):
        add(2 * v, 2 * v + 1, 2 if v == mid else 1)
    for u, v in ug.edges:
        if u in scope and v in scope:
            add(2 * u + 1, 2 * v, 1)
            add(2 * v + 1, 2 * u, 1)
    add(2 * a + 1, sink, 1)
    add(2 * b + 1, sink, 1)
    src = 2 * mid
    flow = 0
    for _ in range(2):
        parent = {src: src}
        q = deque([src])
        while q and sink not in parent:
            x = q.popleft()
            for y in sorted(adj.get(x, [])):
                if y not in parent and cap[(x, y)] > 0:
                    parent[y] = x
                    q.append(y)
        if sink not in parent:
            break
        y = sink
        while y != src:
            x = parent[y]
            cap[(x, y)] -= 1
            cap[(y, x)] += 1
            y = x
        flow += 1
    if flow < 2:
        return None
    # decompose: follow saturated original arcs from mid.out
    used: dict[int, list[int]] = {}
    for u, v in ug.edges:
        for x, y in ((u, v), (v, u)):
            key = (2 * x + 1, 2 * y)
            if key in cap and cap[key] == 0 and cap[(2 * y, 2 * x + 1)] >= 1:
                used.setdefault(x, []).append(y)
    # cancel opposite flows
    for x in list(used):
        for y in list(used[x]):
            if x in used.get(y, []) and y in used[x]:
                used[x].remove(y)
                used[y].remove(x)
    paths = []
    for first in sorted(used.get(mid, [])):
        path = [mid, first]
        while path[-1] not in (a, b):
            path.append(used[path[-1]][0])
        paths.append(path)
    if len(paths) != 2:
        raise BugSignal("flow decomposition did not yield two paths")
    to_a = next(p for p in paths if p[-1] == a)
    to_b = next(p for p in paths if p[-1] == b)
    return to_a[::-1], to_b
