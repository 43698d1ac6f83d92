"""Maximal paths in undirected planar graphs.

A path from r is maximal when every neighbour of its last vertex is on it.
The construction reduces to a leaf block, then to a leaf triconnected piece,
and inside a 3-connected piece walks along the outer cycle and through one
bridge by its second-leftmost (or second-rightmost) path.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .embedding import Embedding, planar_embed, trace_faces
from .graph import (BugSignal, Graph, GraphError, bfs_path, biconnected_blocks,
                    components_after_removal, is_biconnected, is_connected)

log = logging.getLogger(__name__)


# -- bridges and spans -----------------------------------------------------

@dataclass(frozen=True)
class Bridge:
    vertices: frozenset[int]        # interior vertices; empty for a chord
    attachments: tuple[int, ...]    # indices into the cycle, increasing
    trivial: bool

    @property
    def first(self) -> int:
        return self.attachments[0]

    @property
    def last(self) -> int:
        return self.attachments[-1]


@dataclass(frozen=True)
class Span:
    bridge: int
    span: frozenset[int]        # cycle indices first..last
    complement: frozenset[int]  # cycle indices last..l, 0..first


def compute_bridges(lp: Graph, cycle: list[int]) -> list[Bridge]:
    """Bridges of ``cycle`` in ``lp``: components off the cycle plus chords."""
    pos = {v: i for i, v in enumerate(cycle)}
    k = len(cycle)
    out = []
    cm = components_after_removal(lp, cycle)
    for comp in cm.components:
        att = sorted({pos[u] for v in comp for u in lp.neighbors(v) if u in pos})
        out.append(Bridge(frozenset(comp), tuple(att), False))
    for u, v in lp.edges:
        if u in pos and v in pos:
            i, j = sorted((pos[u], pos[v]))
            if j - i not in (1, k - 1):
                out.append(Bridge(frozenset(), (i, j), True))
    out.sort(key=lambda b: (b.attachments, b.trivial))
    for b in out:
        if not b.trivial and len(b.attachments) < 3:
            raise BugSignal(f"non-trivial bridge with attachments {b.attachments}; piece is not 3-connected")
    return out


def spans(bridges: list[Bridge], length: int) -> tuple[list[Span], list[int], int]:
    """Spans, indices of minimal-span bridges, index of the minimum-complement-span bridge.

    Equal spans only arise for a chord parallel to a bridge; the chord is the
    outer of the two, so it is not minimal, and it loses the complement tie
    so that the outer walk goes through the bridge.
    """
    sp = [Span(i, frozenset(range(b.first, b.last + 1)),
               frozenset(range(b.last, length)) | frozenset(range(0, b.first + 1)))
          for i, b in enumerate(bridges)]
    for a in sp:
        for b in sp:
            if a.bridge < b.bridge and not (a.span <= b.span or b.span <= a.span or _disjoint_interior(a, b)):
                raise BugSignal("bridge spans are not laminar")
    minimal = []
    for a in sp:
        inner = any(b.span < a.span or (b.span == a.span and bridges[a.bridge].trivial
                                         and not bridges[b.bridge].trivial)
                    for b in sp if b.bridge != a.bridge)
        if not inner:
            minimal.append(a.bridge)
    best = min(sp, key=lambda s: (len(s.complement), bridges[s.bridge].trivial, s.bridge))
    return sp, minimal, best.bridge


def _disjoint_interior(a: Span, b: Span) -> bool:
    # spans may share an end attachment and still count as disjoint
    return len(a.span & b.span) <= 1


LEFT, RIGHT = "left", "right"


def second_extreme_path(lp: Graph, emb: Embedding, cycle: list[int], bridge: Bridge, start: int,
                        parent: int, forbidden: int | None, side: str = LEFT) -> list[int]:
    """The rotation walk through ``bridge`` from cycle vertex ``start``.

    Each step leaves the current vertex by the first bridge edge after the
    parent edge (rotation successor for ``left``, predecessor for ``right``),
    skipping ``forbidden``; it stops on reaching the cycle again.
    """
    if bridge.trivial:
        a, b = (cycle[i] for i in bridge.attachments)
        return [start, b if start == a else a]
    on_cycle = set(cycle)
    inner = bridge.vertices
    step = emb.succ if side == LEFT else emb.pred
    path = [start]
    seen = {start}
    v, w = start, parent
    for _ in range(lp.n + 1):
        z = w
        for _ in range(len(emb.rotation[v])):
            z = step(v, z)
            if z == forbidden:
                continue
            if z in inner or (v in inner and z in on_cycle):
                break
        else:
            raise BugSignal(f"walk through bridge is stuck at {v}")
        if z in seen:
            raise BugSignal(f"second-extreme walk repeats vertex {z}")
        path.append(z)
        seen.add(z)
        if z in on_cycle:
            return path
        v, w = z, v
    raise BugSignal("second-extreme walk did not terminate")


# -- 3-connected pieces ----------------------------------------------------

def _without_edge(emb: Embedding, a: int, b: int) -> Embedding:
    rot = [tuple(x for x in r if not ((v == a and x == b) or (v == b and x == a)))
           for v, r in enumerate(emb.rotation)]
    return Embedding(tuple(rot))


def outer_cycle(l: Graph, emb: Embedding, r0: int, r1: int) -> tuple[Graph, Embedding, list[int]]:
    """L' = L - (r0, r1), its rotation, and the boundary cycle of the merged face from r0."""
    lp = Graph.from_edges(l.n, [e for e in l.edges if set(e) != {r0, r1}])
    emb_p = _without_edge(emb, r0, r1)
    faces = trace_faces(lp, emb_p)
    cands = [i for i in range(len(faces)) if {r0, r1} <= set(faces.vertices(i))]
    if not cands:
        raise GraphError(f"{r0} and {r1} share no face")
    face = max(cands, key=lambda i: len(faces.faces[i]))
    cyc = [d[0] for d in faces.faces[face]]
    if len(set(cyc)) != len(cyc):
        raise BugSignal("outer boundary of L' is not a simple cycle")
    i = cyc.index(r0)
    return lp, emb_p, cyc[i:] + cyc[:i]


@dataclass
class TriconnectedTrace:
    case: str                       # "main" | "2.1" | "mirror" | "2.2" | "repair"
    bridge: Bridge | None
    walk: list[int]


def _trapped(lp: Graph, path: list[int], r1: int) -> bool:
    seen = set(path)
    return (len(seen) == len(path) and path[-1] != r1
            and all(w in seen for w in lp.neighbors(path[-1])))


def _main_walk(lp, emb_p, c, bridges, bi, side):
    """Enter bridge ``bi`` at its first attachment, exit at the second-next one, wrap back."""
    b = bridges[bi]
    i0 = b.first
    forb = c[b.attachments[1]] if not b.trivial else None
    walk = second_extreme_path(lp, emb_p, c, b, c[i0], c[(i0 + 1) % len(c)], forb, side)
    end = c.index(walk[-1])
    target = b.attachments[1] if b.trivial else b.attachments[2]
    if end != target:
        raise BugSignal(f"second-extreme walk ended at index {end}, expected {target}")
    return c[:i0] + walk + [c[j] for j in range(end - 1, i0, -1)], walk


def _outer_walk(lp, emb_p, c, bridges, bi):
    b = bridges[bi]
    i0 = b.first
    parent = c[i0 - 1] if i0 > 0 else c[-1]
    forb = c[b.attachments[-1]] if not b.trivial else None
    walk = second_extreme_path(lp, emb_p, c, b, c[i0], parent, forb, RIGHT)
    end = c.index(walk[-1])
    target = b.attachments[-1] if b.trivial else b.attachments[-2]
    if end != target:
        raise BugSignal(f"second-rightmost walk ended at index {end}, expected {target}")
    return c[:i0] + walk + c[end + 1:], walk


def _dfs_trap(lp: Graph, prefix: list[int], r1: int, r1_first: bool = False) -> list[int] | None:
    """Continue a depth-first search whose stack is ``prefix``; return the stack at the first leaf other than r1.

    All neighbours of a DFS leaf are its ancestors, so the stack is a trapped path.
    """
    seen = set(prefix)
    stack = [[v, i + 1 < len(prefix)] for i, v in enumerate(prefix)]
    while stack:
        v = stack[-1][0]
        free = sorted(w for w in lp.neighbors(v) if w not in seen)
        if free:
            w = r1 if r1_first and r1 in free else free[0]
            stack[-1][1] = True
            stack.append([w, False])
            seen.add(w)
            continue
        if not stack[-1][1] and v != r1:
            path = [x for x, _ in stack]
            if not _trapped(lp, path, r1):
                raise BugSignal("depth-first leaf has a neighbour off its stack")
            return path
        stack.pop()
    return None


def triconnected_maximal_path(l: Graph, emb: Embedding, r0: int, r1: int,
                              trace: list | None = None) -> list[int]:
    """Maximal path of the 3-connected ``l`` from r0 that avoids the edge (r0, r1) and does not end at r1.

    Candidates are tried in order: the clockwise construction, another
    minimal bridge, the counter-clockwise mirror, the minimum-complement
    bridge walk. The first trapped one wins; if none is, the last is
    continued depth-first and recorded as a repair.
    """
    if _is_cycle(l):
        raise GraphError("the piece is a cycle and has no bridges")
    lp, emb_p, c = outer_cycle(l, emb, r0, r1)
    bridges = compute_bridges(lp, c)
    if not bridges:
        raise GraphError("L' has no bridges; the piece is a cycle")
    _, minimal, outer = spans(bridges, len(c))
    first = min(minimal, key=lambda i: (bridges[i].first, i))

    def note(case, bi, walk, brs=bridges):
        if trace is not None:
            trace.append(TriconnectedTrace(case, brs[bi] if bi is not None else None, walk))

    path, walk = _main_walk(lp, emb_p, c, bridges, first, LEFT)
    if _trapped(lp, path, r1):
        note("main", first, walk)
        return path
    if path[-1] == r1:
        others = [i for i in minimal if i != first]
        if others:
            bi = min(others, key=lambda i: (bridges[i].first, i))
            path, walk = _main_walk(lp, emb_p, c, bridges, bi, LEFT)
            if _trapped(lp, path, r1):
                note("2.1", bi, walk)
                return path
    # counter-clockwise mirror of the main construction
    cm = [c[0]] + c[:0:-1]
    bm = compute_bridges(lp, cm)
    _, min_m, _ = spans(bm, len(cm))
    bi = min(min_m, key=lambda i: (bm[i].first, i))
    path, walk = _main_walk(lp, emb_p, cm, bm, bi, RIGHT)
    if _trapped(lp, path, r1):
        note("mirror", bi, walk, bm)
        return path
    path, walk = _outer_walk(lp, emb_p, c, bridges, outer)
    if _trapped(lp, path, r1):
        note("2.2", outer, walk)
        return path
    if len(set(path)) != len(path):
        raise BugSignal(f"triconnected stage produced a non-simple path {path}")
    log.info("triconnected constructions left the head free; continuing depth-first")
    repaired = _dfs_trap(lp, path, r1) or _dfs_trap(lp, [c[0]], r1, r1_first=True)
    if repaired is None:
        raise BugSignal("no trapped path from r0 avoiding r1 as endpoint")
    note("repair", None, repaired)
    return repaired


# -- reductions --------------------------------------------------------------

def _articulation(g: Graph, removed: int) -> set[int]:
    keep = [v for v in range(g.n) if v != removed]
    sub, old = g.subgraph(keep)
    if not is_connected(sub):
        return set(keep)
    return {old[v] for v in biconnected_blocks(sub)[1]}


def separation_pairs(g: Graph) -> list[tuple[int, int]]:
    out = set()
    for a in range(g.n):
        for b in _articulation(g, a):
            out.add((min(a, b), max(a, b)))
    return sorted(out)


def is_triconnected(g: Graph) -> bool:
    return g.n >= 4 and is_connected(g) and is_biconnected(g) and not separation_pairs(g)


def _is_cycle(g: Graph) -> bool:
    return g.n >= 3 and is_connected(g) and all(g.degree(v) == 2 for v in range(g.n))


@dataclass
class ReductionResult:
    case: str                        # "cycle" | "rigid" | "1" | "2"
    path: list[int] | None = None    # complete maximal path for Case 2 and cycles
    prefix: list[int] = field(default_factory=list)   # r .. r0 for Case 1 and rigid
    piece: Graph | None = None       # L, in local ids, with the (r0, r1) edge
    local: list[int] = field(default_factory=list)    # L ids -> g ids
    r0: int | None = None
    r1: int | None = None


def reduce_to_biconnected(g: Graph, r: int) -> tuple[list[int], Graph, list[int], int]:
    """(prefix r..r', leaf block H, H ids -> g ids, r' in H ids)."""
    if g.n <= 2 or is_biconnected(g):
        return [r], g, list(range(g.n)), r
    blocks, art = biconnected_blocks(g)
    root = min(i for i, b in enumerate(blocks) if r in b)
    # leaf blocks of the rooted block tree: a single articulation vertex, not the root
    leaves = [i for i, b in enumerate(blocks) if i != root and len(b & art) == 1]
    h = min(leaves, key=lambda i: min(blocks[i]))
    rp = next(iter(blocks[h] & art))
    alive = set(range(g.n)) - (set(blocks[h]) - {rp})
    prefix = bfs_path(g, r, rp, alive)
    if prefix is None:
        raise BugSignal("no path to the leaf block")
    sub, old = g.subgraph(sorted(blocks[h]))
    return prefix, sub, old, old.index(rp)


def triconnected_reduction(h: Graph, r: int) -> ReductionResult:
    """Reduce a biconnected ``h`` to a leaf 3-connected piece, or finish directly."""
    if h.n == 2:
        return ReductionResult("cycle", path=[r, 1 - r])
    if _is_cycle(h):
        path = [r]
        prev, cur = None, r
        while len(path) < h.n:
            nxt = min(u for u in h.neighbors(cur) if u != prev and u not in path)
            path.append(nxt)
            prev, cur = cur, nxt
        return ReductionResult("cycle", path=path)
    pairs = separation_pairs(h)
    if not pairs:
        r1 = min(h.neighbors(r))
        return ReductionResult("rigid", prefix=[r], piece=h, local=list(range(h.n)), r0=r, r1=r1)
    cands = []
    for a, b in pairs:
        for comp in components_after_removal(h, (a, b)).components:
            if r not in comp:
                cands.append((len(comp), a, b, tuple(comp)))
    for _, a, b, comp in sorted(cands):
        keep = sorted(set(comp) | {a, b})
        sub, old = h.subgraph(keep)
        ia, ib = old.index(a), old.index(b)
        if not sub.adjacent(ia, ib):
            sub = Graph.from_edges(sub.n, list(sub.edges) + [(ia, ib)])
        if is_triconnected(sub):
            r0, r1 = (b, a) if r == b else (a, b)
            rest = set(range(h.n)) - set(comp) - {r1}
            p0 = bfs_path(h, r, r0, rest)
            if p0 is None:
                raise BugSignal("no path to r0 avoiding r1")
            return ReductionResult("1", prefix=p0, piece=sub, local=old, r0=old.index(r0), r1=old.index(r1))
    return _case2(h, r)


def _chains(h: Graph) -> list[list[int]]:
    seen = set()
    out = []
    for v in range(h.n):
        if h.degree(v) != 2 or v in seen:
            continue
        chain = [v]
        seen.add(v)
        for direction in (0, 1):
            prev, cur = v, h.neighbors(v)[direction]
            while h.degree(cur) == 2 and cur not in seen:
                seen.add(cur)
                if direction == 0:
                    chain.insert(0, cur)
                else:
                    chain.append(cur)
                prev, cur = cur, next(u for u in h.neighbors(cur) if u != prev)
            if direction == 0:
                chain.insert(0, cur)
            else:
                chain.append(cur)
        out.append(chain)
    return out


def _case2(h: Graph, r: int) -> ReductionResult:
    full = planar_embed(h)
    for chain in _chains(h):
        a, b = chain[0], chain[-1]
        inner = chain[1:-1]
        if a == b or r in inner:
            continue
        keep = sorted(set(range(h.n)) - set(inner))
        gp, old = h.subgraph(keep)
        if not is_biconnected(gp):
            continue
        # restricting the embedding of H keeps a and b on the face the chain lay in
        new = {v: i for i, v in enumerate(old)}
        emb = Embedding(tuple(tuple(new[w] for w in full.rotation[v] if w in new) for v in old))
        faces = trace_faces(gp, emb)
        ia, ib = new[a], new[b]
        fi = next(i for i in range(len(faces.faces)) if {ia, ib} <= set(faces.vertices(i)))
        cyc = [old[d[0]] for d in faces.faces[fi]]
        if len(set(cyc)) != len(cyc):
            raise BugSignal("face of G' through the chain ends is not a simple cycle")
        p0 = bfs_path(h, r, set(cyc), set(old))
        if p0 is None:
            raise BugSignal("no path from r to the face of the leaf cycle")
        i = cyc.index(p0[-1])
        fwd = cyc[i:] + cyc[:i]
        # walk along the face until both chain ends are on the path
        walk = fwd[:max(fwd.index(a), fwd.index(b)) + 1]
        second = walk[-1]
        tail = inner if second == a else inner[::-1]
        return ReductionResult("2", path=p0[:-1] + walk + tail, r0=b if second == a else a, r1=second)
    raise BugSignal("no cycle leaf with a biconnected remainder")


# -- driver ------------------------------------------------------------------

@dataclass
class MaximalPathResult:
    path: list[int]
    stages: list[str] = field(default_factory=list)
    r1_end_checked: bool = False
    fallback: bool = False
    trace: list = field(default_factory=list)


def verify_maximal(g: Graph, p: list[int], r: int) -> bool:
    if not p or p[0] != r or len(set(p)) != len(p):
        return False
    if any(not g.adjacent(a, b) for a, b in zip(p, p[1:])):
        return False
    on = set(p)
    return all(u in on for u in g.neighbors(p[-1]))


def _greedy(g: Graph, r: int) -> list[int]:
    path, on = [r], {r}
    while True:
        nxt = [u for u in g.neighbors(path[-1]) if u not in on]
        if not nxt:
            return path
        path.append(min(nxt))
        on.add(path[-1])


def maximal_path_detailed(g: Graph, r: int, emb: Embedding | None = None) -> MaximalPathResult:
    if g.directed:
        raise GraphError("maximal paths are computed in undirected graphs")
    if not is_connected(g):
        raise GraphError("graph must be connected")
    res = MaximalPathResult([r])
    if g.degree(r) == 0:
        return res
    try:
        prefix, h, hold, rp = reduce_to_biconnected(g, r)
        res.stages.append(f"block of {h.n} vertices entered at {hold[rp]}")
        red = triconnected_reduction(h, rp)
        res.stages.append(f"triconnected reduction case {red.case}")
        if red.path is not None:
            hpath = red.path
        else:
            lemb = planar_embed(red.piece, outer_pair=(red.r0, red.r1))
            lpath = triconnected_maximal_path(red.piece, lemb, red.r0, red.r1, res.trace)
            res.r1_end_checked = lpath[-1] != red.r1
            hpath = red.prefix[:-1] + [red.local[v] for v in lpath]
        path = prefix[:-1] + [hold[v] for v in hpath]
    except BugSignal as exc:
        log.warning("maximal path construction failed (%s); extending greedily", exc)
        res.fallback = True
        res.stages.append(f"fallback: {exc}")
        path = _greedy(g, r)
    if not verify_maximal(g, path, r):
        raise BugSignal(f"constructed path {path} is not maximal")
    res.path = path
    return res


def maximal_path(g: Graph, emb: Embedding | None, r: int) -> list[int]:
    return maximal_path_detailed(g, r, emb).path
