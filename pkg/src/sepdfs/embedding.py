"""Rotation systems, face tracing, genus and the homological separating test."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx

from .graph import Graph, GraphError, is_connected

Dart = tuple[int, int]


class NotPlanarError(GraphError):
    pass


@dataclass(frozen=True)
class Embedding:
    """Cyclic (clockwise, as serialized) neighbour order around every vertex.

    ``outer`` is a dart lying on the designated outer face, if any.
    """

    rotation: tuple[tuple[int, ...], ...]
    outer: Dart | None = None

    def succ(self, v: int, u: int) -> int:
        rot = self.rotation[v]
        return rot[(rot.index(u) + 1) % len(rot)]

    def pred(self, v: int, u: int) -> int:
        rot = self.rotation[v]
        return rot[(rot.index(u) - 1) % len(rot)]

    def with_outer(self, dart: Dart | None) -> "Embedding":
        return Embedding(self.rotation, dart)

    def validate(self, g: Graph) -> None:
        if len(self.rotation) != g.n:
            raise GraphError("rotation system has the wrong number of vertices")
        for v in range(g.n):
            rot = self.rotation[v]
            if len(set(rot)) != len(rot) or sorted(rot) != sorted(g.neighbors(v)):
                raise GraphError(f"rotation at vertex {v} does not match its neighbours")


@dataclass(frozen=True)
class FaceSet:
    faces: tuple[tuple[Dart, ...], ...]
    outer: int | None

    def __len__(self) -> int:
        return len(self.faces)

    def face_of(self) -> dict[Dart, int]:
        return {d: i for i, f in enumerate(self.faces) for d in f}

    def vertices(self, i: int) -> list[int]:
        return [d[0] for d in self.faces[i]]


def trace_faces(g: Graph, emb: Embedding) -> FaceSet:
    emb.validate(g)
    darts = sorted({(u, v) for u, v in g.edges} | {(v, u) for u, v in g.edges})
    seen: set[Dart] = set()
    faces = []
    for d in darts:
        if d in seen:
            continue
        face = []
        cur = d
        while cur not in seen:
            seen.add(cur)
            face.append(cur)
            u, v = cur
            cur = (v, emb.succ(v, u))
        if cur != d:
            raise GraphError("malformed rotation: face orbit does not close")
        faces.append(tuple(face))
    assert len(seen) == len(darts)
    outer = None
    if emb.outer is not None:
        for i, f in enumerate(faces):
            if emb.outer in f:
                outer = i
    return FaceSet(tuple(faces), outer)


def euler_genus(g: Graph, emb: Embedding) -> int:
    """Orientable genus of a connected embedded graph."""
    if not is_connected(g):
        raise GraphError("euler_genus requires a connected graph")
    if g.n == 0:
        return 0
    f = len(trace_faces(g, emb)) if g.m else 1
    num = 2 - g.n + g.m - f
    if num % 2 or num < 0:
        raise GraphError("odd Euler characteristic: malformed embedding")
    return num // 2


def total_genus(g: Graph, emb: Embedding) -> int:
    """Sum of genera over connected components."""
    from .graph import components_after_removal

    total = 0
    ug = g.underlying()
    for comp in components_after_removal(ug).components:
        sub, old = ug.subgraph(comp)
        total += euler_genus(sub, induced_embedding(ug, emb, comp, relabel=True))
    return total


def default_outer(g: Graph, faces: FaceSet) -> int:
    """Largest face, ties broken by smallest contained vertex id."""
    best = min(range(len(faces)), key=lambda i: (-len(faces.faces[i]), min(faces.vertices(i))))
    return best


def induced_embedding(g: Graph, emb: Embedding, keep: Iterable[int], relabel: bool = False) -> Embedding:
    keep = set(keep)
    if relabel:
        old = sorted(keep)
        idx = {v: i for i, v in enumerate(old)}
        rot = tuple(tuple(idx[w] for w in emb.rotation[v] if w in keep) for v in old)
        return Embedding(rot)
    rot = tuple(tuple(w for w in emb.rotation[v] if w in keep) if v in keep else ()
                for v in range(len(emb.rotation)))
    return Embedding(rot)


# -- GF(2) linear algebra over int bitsets --------------------------------

def gf2_basis(rows: Iterable[int]) -> dict[int, int]:
    """Reduced echelon basis keyed by pivot bit."""
    basis: dict[int, int] = {}
    for r in rows:
        r = gf2_reduce(r, basis)
        if r:
            p = r.bit_length() - 1
            for k in list(basis):
                if (basis[k] >> p) & 1:
                    basis[k] ^= r
            basis[p] = r
    return basis


def gf2_reduce(vec: int, basis: dict[int, int]) -> int:
    while vec:
        p = vec.bit_length() - 1
        if p not in basis:
            return vec
        vec ^= basis[p]
    return 0


def gf2_rank(rows: Sequence[int]) -> int:
    return len(gf2_basis(rows))


def _edge_index(g: Graph) -> dict[tuple[int, int], int]:
    ug = g.underlying()
    return {e: i for i, e in enumerate(ug.edges)}


def _cycle_vector(g: Graph, cycle: Sequence[int], eidx: dict[tuple[int, int], int]) -> int:
    vec = 0
    k = len(cycle)
    if k < 3 or len(set(cycle)) != k:
        raise GraphError("not a simple cycle")
    for i in range(k):
        u, v = cycle[i], cycle[(i + 1) % k]
        e = (min(u, v), max(u, v))
        if e not in eidx:
            raise GraphError(f"cycle uses non-edge {e}")
        vec ^= 1 << eidx[e]
    return vec


def face_boundary_basis(g: Graph, emb: Embedding) -> dict[int, int]:
    ug = g.underlying()
    eidx = _edge_index(ug)
    rows = []
    for f in trace_faces(ug, emb).faces:
        vec = 0
        for u, v in f:
            vec ^= 1 << eidx[(min(u, v), max(u, v))]
        rows.append(vec)
    return gf2_basis(rows)


def is_surface_separating(cycle: Sequence[int], g: Graph, emb: Embedding,
                          basis: dict[int, int] | None = None) -> bool:
    """True iff the cycle is null-homologous (a GF(2) sum of face boundaries)."""
    ug = g.underlying()
    vec = _cycle_vector(ug, cycle, _edge_index(ug))
    if basis is None:
        basis = face_boundary_basis(ug, emb)
    return gf2_reduce(vec, basis) == 0


# -- planar embedding -----------------------------------------------------

def planar_embed(g: Graph, outer_pair: tuple[int, int] | None = None) -> Embedding:
    """Genus-0 rotation system with a designated outer face.

    With ``outer_pair`` the outer face is chosen among faces containing both
    vertices (largest first).
    """
    ug = g.underlying()
    if not is_connected(ug):
        raise GraphError("planar_embed requires a connected graph")
    if ug.n == 1:
        return Embedding(((),))
    nxg = nx.Graph()
    nxg.add_nodes_from(range(ug.n))
    nxg.add_edges_from(ug.edges)
    ok, pe = nx.check_planarity(nxg)
    if not ok:
        raise NotPlanarError("graph is not planar")
    rot = tuple(tuple(pe.neighbors_cw_order(v)) for v in range(ug.n))
    emb = Embedding(rot)
    faces = trace_faces(ug, emb)
    cands = list(range(len(faces)))
    if outer_pair is not None:
        a, b = outer_pair
        cands = [i for i in cands if {a, b} <= set(faces.vertices(i))]
        if not cands:
            raise GraphError(f"no face contains both {a} and {b}")
    best = min(cands, key=lambda i: (-len(faces.faces[i]), min(faces.vertices(i))))
    return emb.with_outer(faces.faces[best][0])


def ensure_outer(g: Graph, emb: Embedding) -> Embedding:
    if emb.outer is not None:
        return emb
    faces = trace_faces(g.underlying(), emb)
    return emb.with_outer(faces.faces[default_outer(g, faces)][0])


@dataclass
class Regions:
    on_vertices: set[int]
    interior_vertices: set[int]
    exterior_vertices: set[int]
    interior_edges: set[tuple[int, int]]
    exterior_edges: set[tuple[int, int]]
    on_edges: set[tuple[int, int]]
    interior_faces: set[int]
    exterior_faces: set[int]


def interior_exterior(g: Graph, emb: Embedding, cycle: Sequence[int], faces: FaceSet | None = None) -> Regions:
    """Split vertices, edges and faces by the two sides of a simple cycle (genus 0)."""
    ug = g.underlying()
    emb = ensure_outer(ug, emb)
    if faces is None:
        faces = trace_faces(ug, emb)
    if 2 - ug.n + ug.m - len(faces) != 0 and is_connected(ug):
        raise GraphError("interior_exterior requires a genus-0 embedding")
    k = len(cycle)
    on_e = {(min(cycle[i], cycle[(i + 1) % k]), max(cycle[i], cycle[(i + 1) % k])) for i in range(k)}
    for e in on_e:
        if e not in ug.edge_set:
            raise GraphError(f"cycle uses non-edge {e}")
    fo = faces.face_of()
    side: dict[int, int] = {}
    outer = faces.outer
    assert outer is not None
    side[outer] = 0
    q = deque([outer])
    while q:
        f = q.popleft()
        for u, v in faces.faces[f]:
            if (min(u, v), max(u, v)) in on_e:
                continue
            h = fo[(v, u)]
            if h not in side:
                side[h] = side[f]
                q.append(h)
    for f in range(len(faces)):
        side.setdefault(f, 1)
    on_v = set(cycle)
    res = Regions(on_v, set(), set(), set(), set(), on_e, set(), set())
    for f, s in side.items():
        (res.exterior_faces if s == 0 else res.interior_faces).add(f)
        for u, v in faces.faces[f]:
            e = (min(u, v), max(u, v))
            if e not in on_e:
                (res.exterior_edges if s == 0 else res.interior_edges).add(e)
            if u not in on_v:
                (res.exterior_vertices if s == 0 else res.interior_vertices).add(u)
    for v in range(ug.n):
        if v not in on_v and v not in res.interior_vertices and v not in res.exterior_vertices:
            res.exterior_vertices.add(v)  # isolated vertex; only when disconnected
    return res
