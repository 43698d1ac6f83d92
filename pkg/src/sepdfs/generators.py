"""Seeded instance generators."""

from __future__ import annotations

import itertools
import random
from collections.abc import Sequence

from .embedding import Embedding, euler_genus, planar_embed, trace_faces
from .graph import Graph, GraphError, is_connected


def grid(rows: int, cols: int) -> Graph:
    edges = []
    for i in range(rows):
        for j in range(cols):
            v = i * cols + j
            if j + 1 < cols:
                edges.append((v, v + 1))
            if i + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def toroidal(rows: int, cols: int) -> tuple[Graph, Embedding]:
    """Torus grid with the canonical rotation right, down, left, up."""
    if rows < 3 or cols < 3:
        raise GraphError("torus grid needs at least 3 rows and 3 columns")
    vid = lambda i, j: (i % rows) * cols + (j % cols)
    edges = []
    rot = []
    for i in range(rows):
        for j in range(cols):
            edges += [(vid(i, j), vid(i, j + 1)), (vid(i, j), vid(i + 1, j))]
            rot.append((vid(i, j + 1), vid(i + 1, j), vid(i, j - 1), vid(i - 1, j)))
    g = Graph.from_edges(rows * cols, edges)
    return g, Embedding(tuple(rot))


def _insert_after(rot: list[int], after: int, new: int) -> list[int]:
    i = rot.index(after)
    return rot[:i + 1] + [new] + rot[i + 1:]


def connected_sum(g1: Graph, e1: Embedding, g2: Graph, e2: Embedding) -> tuple[Graph, Embedding]:
    """Join two embedded graphs by a tube between a face of each (genera add)."""
    f1 = trace_faces(g1, e1).faces[0]
    f2 = trace_faces(g2, e2).faces[0]
    if len(f1) != len(f2):
        raise GraphError("tube faces must have equal length")
    k = len(f1)
    off = g1.n
    target = euler_genus(g1, e1) + euler_genus(g2, e2)
    for shift in range(k):
        a = [d[0] for d in f1]
        b = [d[0] for d in f2][::-1]
        b = b[shift:] + b[:shift]
        rot = [list(r) for r in e1.rotation] + [[w + off for w in r] for r in e2.rotation]
        for idx in range(k):
            x, y = a[idx], b[idx] + off
            # corner of face f1 at x lies after its predecessor on the face
            px = a[idx - 1]
            rot[x] = _insert_after(rot[x], px, y)
            qy = b[(idx + 1) % k] + off
            rot[y] = _insert_after(rot[y], qy, x)
        edges = list(g1.edges) + [(u + off, v + off) for u, v in g2.edges] + \
            [(a[i], b[i] + off) for i in range(k)]
        g = Graph.from_edges(g1.n + g2.n, edges)
        emb = Embedding(tuple(tuple(r) for r in rot))
        try:
            if euler_genus(g, emb) == target:
                return g, emb
        except GraphError:
            continue
    raise GraphError("could not realise the connected sum")


def double_torus(rows: int, cols: int) -> tuple[Graph, Embedding]:
    g, e = toroidal(rows, cols)
    return connected_sum(g, e, g, e)


def planar(n: int, seed: int, keep: float = 0.7) -> Graph:
    """Random maximal planar graph by incremental triangulation, then seeded edge deletion.

    Deletions keep the graph connected.
    """
    rng = random.Random(seed)
    if n < 3:
        return Graph.from_edges(n, [(0, 1)] if n == 2 else [])
    faces = [(0, 1, 2), (0, 2, 1)]
    edges = {(0, 1), (1, 2), (0, 2)}
    for v in range(3, n):
        f = faces.pop(rng.randrange(len(faces)))
        a, b, c = f
        faces += [(a, b, v), (b, c, v), (c, a, v)]
        edges |= {(min(a, v), max(a, v)), (min(b, v), max(b, v)), (min(c, v), max(c, v))}
    order = sorted(edges)
    rng.shuffle(order)
    current = set(order)
    for e in order:
        if rng.random() > keep:
            trial = current - {e}
            if is_connected(Graph.from_edges(n, trial)):
                current = trial
    return Graph.from_edges(n, sorted(current))


def maximal_planar(n: int, seed: int) -> Graph:
    return planar(n, seed, keep=1.0)


def random_digraph(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return Graph.from_edges(n, arcs, directed=True)


def orient(g: Graph, seed: int, both: float = 0.3) -> Graph:
    """Random orientation; each edge is kept both ways with probability ``both``."""
    rng = random.Random(seed)
    arcs = []
    for u, v in g.edges:
        r = rng.random()
        if r < both:
            arcs += [(u, v), (v, u)]
        elif r < (1 + both) / 2:
            arcs.append((u, v))
        else:
            arcs.append((v, u))
    return Graph.from_edges(g.n, arcs, directed=True)


def planted_multipath(n: int, k: int, alpha, seed: int) -> tuple[Graph, list[list[int]]]:
    """Strongly connected digraph with ``k`` disjoint directed paths whose union is an alpha-separator.

    Non-path vertices form strongly connected blobs of size <= alpha*n; arcs
    between blobs only go forward, so every blob is an SCC once the paths go.
    Vertex ids are shuffled.
    """
    from fractions import Fraction

    rng = random.Random(seed)
    if n < 2 * k + 1:
        raise GraphError("too few vertices for the requested paths")
    cap = max(1, int(Fraction(alpha) * n) // 2)
    npath = rng.randint(k, max(k, n // 3))
    cuts = sorted(rng.sample(range(1, npath), k - 1)) if k > 1 else []
    bounds = [0] + cuts + [npath]
    paths = [list(range(bounds[i], bounds[i + 1])) for i in range(k)]
    blobs, v = [], npath
    while v < n:
        size = min(rng.randint(1, cap), n - v)
        blobs.append(list(range(v, v + size)))
        v += size
    arcs = []
    for p in paths:
        arcs += list(zip(p, p[1:]))
    for i in range(k):
        arcs.append((paths[i][-1], paths[(i + 1) % k][0]))
    for b in blobs:
        if len(b) > 1:
            arcs += list(zip(b, b[1:] + b[:1]))
        arcs += [(rng.choice(b), rng.choice(b)) for _ in range(len(b))]
        arcs.append((rng.randrange(npath), rng.choice(b)))
        arcs.append((rng.choice(b), rng.randrange(npath)))
    for _ in range(n):
        i, j = sorted(rng.sample(range(len(blobs)), 2)) if len(blobs) > 1 else (0, 0)
        if i != j:
            arcs.append((rng.choice(blobs[i]), rng.choice(blobs[j])))
        a, b = rng.randrange(npath), rng.randrange(npath, n)
        arcs.append((a, b) if rng.random() < 0.5 else (b, a))
        a, b = rng.randrange(npath), rng.randrange(npath)
        if a != b:
            arcs.append((a, b))
    perm = list(range(n))
    rng.shuffle(perm)
    g = Graph.from_edges(n, [(perm[a], perm[b]) for a, b in arcs], directed=True)
    return g, [[perm[x] for x in p] for p in paths]


def ktree(n: int, k: int, seed: int, keep: float = 0.8) -> tuple[Graph, list[list[int]], list[tuple[int, int]]]:
    """Partial k-tree with its tree decomposition (bags, tree edges)."""
    rng = random.Random(seed)
    if n <= k:
        raise GraphError("need n > k")
    base = list(range(k + 1))
    edges = set(itertools.combinations(base, 2))
    bags = [base]
    tedges = []
    cliques = [(tuple(base), 0)]
    for v in range(k + 1, n):
        clique, bag_id = cliques[rng.randrange(len(cliques))]
        sub = rng.sample(list(clique), k)
        for u in sub:
            edges.add((min(u, v), max(u, v)))
        bags.append(sorted(sub + [v]))
        tedges.append((bag_id, len(bags) - 1))
        cliques.append((tuple(sub + [v]), len(bags) - 1))
    order = sorted(edges)
    rng.shuffle(order)
    current = set(order)
    for e in order:
        if rng.random() > keep:
            trial = current - {e}
            if is_connected(Graph.from_edges(n, trial)):
                current = trial
    return Graph.from_edges(n, sorted(current)), bags, tedges


def _triple_attachment(case: int, terms: tuple[int, int, int], start: int, rng: random.Random,
                       merged: bool = False) -> tuple[list[tuple[int, int]], int]:
    """Edges of an attached subgraph on ``terms`` realising the given path configuration.

    New vertices are numbered from ``start``; returns (edges, next free id).
    """
    v1, v2, v3 = terms
    nxt = start

    def new():
        nonlocal nxt
        nxt += 1
        return nxt - 1

    def leg(t, p):
        # a path of 1..2 edges from terminal t to port p
        if rng.random() < 0.5:
            return [(t, p)]
        a = new()
        return [(t, a), (a, p)]

    def link(u, v):
        # an edge, sometimes subdivided, inside a block
        if rng.random() < 0.5:
            return [(u, v)]
        a = new()
        return [(u, a), (a, v)]

    edges: list[tuple[int, int]] = []
    if case == 1:
        a, b = new(), new()
        edges += link(a, v1) + link(a, v2) + link(a, v3) + [(b, a)] + link(b, v1) + link(b, v2) + link(b, v3)
    elif case == 2:
        x, y = new(), new()
        edges += leg(v1, x) + link(x, v2) + link(x, v3) + [(x, y)] + link(y, v2) + link(y, v3)
    elif case == 3:
        x, y, z = new(), new(), new()
        edges += leg(v1, x) + leg(v2, y) + link(x, y) + link(x, v3) + link(y, v3) + [(z, x), (z, v3)]
    elif merged:
        w = new()
        edges += leg(v1, w) + leg(v2, w) + leg(v3, w)
    else:
        x, y, z = new(), new(), new()
        edges += leg(v1, x) + leg(v2, y) + leg(v3, z) + link(x, y) + link(y, z) + link(z, x)
    if rng.random() < 0.5:
        # a pendant vertex somewhere inside the attachment
        host = rng.randrange(start, nxt)
        edges.append((new(), host))
    return edges, nxt


def scm_assembly(seed: int, cases: Sequence[int] = (1, 2, 3, 4), center: int = 4,
                 pairs: int = 1, singles: int = 1, k5: bool = False, drop: float = 0.0):
    """Planar central piece with 3-clique attachments of the requested cases.

    Returns (graph, clique-sum tree).  ``center`` vertices of a maximal planar
    graph form the central piece; attachments go onto distinct triangular faces.
    """
    from .cliquesum import CliqueSumTree, Piece, _is_planar, treewidth_upper

    rng = random.Random(seed)
    core = maximal_planar(center, seed)
    emb = planar_embed(core)
    fs = trace_faces(core, emb)
    tris = sorted({tuple(sorted(set(fs.vertices(i)))) for i in range(len(fs)) if len(fs.faces[i]) == 3})
    rng.shuffle(tris)
    if len(tris) < len(cases) + (1 if k5 else 0):
        raise GraphError("not enough triangular faces for the requested attachments")
    edges = set(core.edges)
    nxt = center
    attached: list[tuple[tuple[int, ...], set[int], set[tuple[int, int]]]] = []
    for case, tri in zip(cases, tris):
        tri = tuple(rng.sample(tri, 3))
        es, new_nxt = _triple_attachment(case if case != 5 else 4, tri, nxt, rng, merged=case == 5)
        attached.append((tuple(sorted(tri)), set(tri) | set(range(nxt, new_nxt)), set(es)))
        nxt = new_nxt
    if k5:
        tri = tris[len(cases)]
        a, b = nxt, nxt + 1
        es = {(a, b)} | {(t, a) for t in tri} | {(t, b) for t in tri}
        attached.append((tuple(sorted(tri)), set(tri) | {a, b}, es))
        nxt += 2
    core_edges = sorted(core.edges)
    for _ in range(pairs):
        u, v = core_edges[rng.randrange(len(core_edges))]
        a, b = nxt, nxt + 1
        attached.append(((u, v), {u, v, a, b}, {(u, a), (a, b), (b, v)}))
        nxt += 2
    for _ in range(singles):
        u = rng.randrange(center)
        attached.append(((u,), {u, nxt}, {(u, nxt)}))
        nxt += 1
    for c, _, _ in attached:
        if len(c) == 3:
            for e in itertools.combinations(c, 2):
                if rng.random() < drop:
                    edges.discard(e)
    for _, _, es in attached:
        edges |= {(min(e), max(e)) for e in es}
    g = Graph.from_edges(nxt, sorted(edges))
    if not is_connected(g):
        raise GraphError("assembly came out disconnected")
    pieces = [Piece(tuple(range(center)), frozenset(core.edges),
                    frozenset(e for e in core.edges if e not in g.edge_set), "planar")]
    cliques, incidence = [], []
    for c, vs, es in attached:
        cl = {(min(p), max(p)) for p in itertools.combinations(c, 2)}
        pe = frozenset({(min(e), max(e)) for e in es} | cl)
        virtual = frozenset(e for e in pe if e not in g.edge_set)
        vt = tuple(sorted(vs))
        idx = {v: i for i, v in enumerate(vt)}
        pg = Graph.from_edges(len(vt), [(idx[u], idx[v]) for u, v in pe])
        kind = "planar" if _is_planar(pg) else ("tw" if treewidth_upper(pg)[0] <= 4 else "rest")
        pieces.append(Piece(vt, pe, virtual, kind))
        cliques.append(c)
        incidence += [(0, len(cliques) - 1), (len(pieces) - 1, len(cliques) - 1)]
    return g, CliqueSumTree(pieces, cliques, incidence)
