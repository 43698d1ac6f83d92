"""Separators for graphs glued from planar and small-treewidth pieces.

The central piece gets the attached subgraphs projected onto it as weights;
3-clique attachments are replaced by small gadgets whose cycle segments can
be lifted back to real paths.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .cliquesum import CliqueSumTree, find_central_node, treewidth_upper
from .embedding import interior_exterior, planar_embed, trace_faces
from .graph import (BugSignal, Graph, GraphError, bfs_path, biconnected_blocks,
                    components_after_removal, vertex_disjoint_via)
from .separators import (TWO_THIRDS, WeightAssignment, check_separator_balance, cycle_separator,
                         merge_multipath)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DisjointPathConfiguration:
    terminals: tuple[int, int, int]
    # via[i]: a path joins the other two terminals through terminals[i]
    via: tuple[bool, bool, bool]

    @property
    def case(self) -> int:
        return 4 - sum(self.via)

    def flags(self) -> tuple[bool, bool, bool]:
        """(dpc(v1,v2,v3), dpc(v2,v3,v1), dpc(v3,v1,v2))."""
        return self.via[1], self.via[2], self.via[0]


def compute_dpc(sub: Graph, v1: int, v2: int, v3: int) -> DisjointPathConfiguration:
    t = (v1, v2, v3)
    via = tuple(vertex_disjoint_via(sub, t[(i + 1) % 3], t[i], t[(i + 2) % 3]) is not None for i in range(3))
    return DisjointPathConfiguration(t, via)


@dataclass
class Gadget:
    """Stand-in for one 3-clique attachment, in the attached subgraph's ids.

    ``ports[t]`` is where terminal t's leg meets the centre (t itself when
    there is no leg); ``hub`` is set when the centre is a single cut vertex.
    Every leg is a digon t = ports[t] whose face carries ``leg_weight[t]``;
    a block centre is a triangle on the ports with face weight ``center_weight``.
    """

    dpc: DisjointPathConfiguration
    size: int
    ports: dict[int, int]
    hub: int | None
    legs: dict[int, frozenset[int]]
    leg_weight: dict[int, int]
    center: frozenset[int]
    center_weight: int
    internal: tuple[int, ...]
    notes: list[str] = field(default_factory=list)

    @property
    def case(self) -> int:
        return self.dpc.case

    @property
    def terminals(self) -> tuple[int, int, int]:
        return self.dpc.terminals

    def triangle(self) -> list[tuple[int, int]]:
        if self.hub is not None:
            return []
        p = [self.ports[t] for t in self.terminals]
        return [(p[0], p[1]), (p[1], p[2]), (p[2], p[0])]

    def face_total(self) -> int:
        return sum(self.leg_weight.values()) + (self.center_weight if self.hub is None else 0)

    def conserved(self) -> bool:
        return self.face_total() + len(self.internal) == self.size - 3


def _bc_tree(sub: Graph):
    blocks, art = biconnected_blocks(sub)
    adj: dict[tuple, list[tuple]] = {}
    for i, b in enumerate(blocks):
        for v in sorted(b & art):
            adj.setdefault(("B", i), []).append(("C", v))
            adj.setdefault(("C", v), []).append(("B", i))
    return blocks, art, adj


def _tree_path(adj, a, b) -> list:
    if a == b:
        return [a]
    par = {a: None}
    q = deque([a])
    while q:
        x = q.popleft()
        for y in adj.get(x, []):
            if y not in par:
                par[y] = x
                q.append(y)
    out = [b]
    while out[-1] != a:
        out.append(par[out[-1]])
    return out[::-1]


def build_gadget(sub: Graph, dpc: DisjointPathConfiguration) -> Gadget:
    """Gadget from the block-cut structure of ``sub``; checked against ``dpc``."""
    terms = dpc.terminals
    blocks, art, adj = _bc_tree(sub)

    def node(t):
        if t in art:
            return ("C", t)
        return next(("B", i) for i, b in enumerate(blocks) if t in b)

    nodes = [node(t) for t in terms]
    paths = [set(_tree_path(adj, nodes[i], nodes[j])) for i, j in ((0, 1), (1, 2), (0, 2))]
    median = paths[0] & paths[1] & paths[2]
    if len(median) != 1:
        raise BugSignal(f"terminals {terms} have no unique block-cut median")
    med = median.pop()
    ports: dict[int, int] = {}
    for t, nd in zip(terms, nodes):
        if med[0] == "C":
            ports[t] = med[1]
        elif t in blocks[med[1]]:
            ports[t] = t
        else:
            ports[t] = _tree_path(adj, med, nd)[1][1]
    hub = med[1] if med[0] == "C" else None
    legs: dict[int, frozenset[int]] = {}
    leg_weight: dict[int, int] = {}
    for t in terms:
        p = ports[t]
        if p == t:
            continue
        cm = components_after_removal(sub, [p])
        legs[t] = frozenset(cm.components[cm.label[t]]) | {p}
        leg_weight[t] = len(legs[t]) - 2
    center = frozenset(range(sub.n)) - frozenset().union(*[legs[t] - {ports[t]} for t in legs])
    internal = tuple(sorted({ports[t] for t in legs} - set(terms)))
    if hub is not None:
        # branches at the hub carrying no terminal hang off the first leg's face
        leg_weight[next(t for t in terms if t in legs)] += len(center) - 1
        center_weight = 0
    else:
        center_weight = len(center) - 3
    g = Gadget(dpc, sub.n, ports, hub, legs, leg_weight, center, center_weight, internal)
    no_leg = {t for t in terms if t not in legs}
    expected = {t for t, f in zip(terms, dpc.via) if f}
    if no_leg != expected:
        raise BugSignal(f"gadget structure {sorted(no_leg)} disagrees with path configuration {dpc.via}")
    if not g.conserved():
        raise BugSignal("gadget weights are not conserved")
    return g


# -- projection onto the central piece ------------------------------------

@dataclass
class Attachment:
    clique: tuple[int, ...]
    vertices: frozenset[int]        # V(G_k), global ids, clique included
    local: list[int] | None = None  # gadget ids -> global ids
    gadget: Gadget | None = None

    @property
    def weight(self) -> int:
        return len(self.vertices) - len(self.clique)

    def to_local(self, v: int) -> int:
        return self.local.index(v)


@dataclass
class Projection:
    kind: str                       # "planar" | "clique" | "heavy-clique" | "bag"
    separator: tuple[int, ...] = ()
    graph: Graph | None = None
    emb: object = None
    weights: WeightAssignment | None = None
    label: list[int | None] = field(default_factory=list)   # projected id -> global id (None: subdivision)
    attachments: list[Attachment] = field(default_factory=list)
    owner: dict[tuple[int, int], tuple] = field(default_factory=dict)
    legs: dict[int, tuple[int, int, int]] = field(default_factory=dict)   # dummy -> (attachment, t, port)
    notes: list[str] = field(default_factory=list)


def _key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def central_bag(g: Graph, bags) -> tuple[int, ...]:
    """A bag whose removal leaves components of size < n/2, else the best one found."""
    best = None
    for b in bags:
        bag = tuple(b)
        worst = max(components_after_removal(g, bag).sizes, default=0)
        if best is None or worst < best[0]:
            best = (worst, bag)
        if 2 * worst < g.n:
            return bag
    return best[1] if best else ()


def _central_bag(g: Graph, piece) -> tuple[int, ...]:
    pg = Graph.from_edges(len(piece.vertices), [(piece.vertices.index(u), piece.vertices.index(v))
                                                for u, v in piece.edges])
    _, bags, _ = treewidth_upper(pg)
    return central_bag(g, [[piece.vertices[i] for i in b] for b in bags])


def tw_path_separator(g: Graph, bags=None, alpha=TWO_THIRDS) -> list[int]:
    """Central bag of a tree decomposition, merged into one path."""
    if bags is None:
        _, bags, _ = treewidth_upper(g)
    bag = central_bag(g, bags)
    return merge_multipath(g, [[v] for v in bag], alpha)


def project_weights(g: Graph, t: CliqueSumTree, center: tuple[str, int]) -> Projection:
    if center[0] == "C":
        return Projection("clique", tuple(t.cliques[center[1]]))
    piece = t.pieces[center[1]]
    atts = []
    for c in t.neighbors(center):
        vs = frozenset(t.side_vertices(c, center))
        att = Attachment(t.cliques[c[1]], vs)
        if 3 * att.weight >= 2 * g.n:
            return Projection("heavy-clique", att.clique, attachments=[att])
        atts.append(att)
    if piece.kind == "tw":
        return Projection("bag", _central_bag(g, piece), attachments=atts)
    if piece.kind != "planar":
        raise GraphError(f"central piece of kind {piece.kind!r} is neither planar nor of small treewidth")

    label: list[int | None] = list(piece.vertices)
    pid = {v: i for i, v in enumerate(label)}
    owner: dict[tuple[int, int], tuple] = {}
    legs: dict[int, tuple[int, int, int]] = {}
    vweight = {i: Fraction(1) for i in range(len(label))}
    eweight: dict[tuple[int, int], Fraction] = {}
    wanted_faces: list[tuple[frozenset, int]] = []
    triple_edges = set()

    for k, att in enumerate(atts):
        c = att.clique
        if len(c) == 1:
            vweight[pid[c[0]]] += att.weight
        elif len(c) == 2:
            e = _key(pid[c[0]], pid[c[1]])
            eweight[e] = eweight.get(e, Fraction(0)) + att.weight
            if not g.adjacent(*c):
                owner.setdefault(e, ("pair", k))
        else:
            triple_edges |= {_key(pid[a], pid[b]) for a, b in itertools.combinations(c, 2)}
            att.local = sorted(att.vertices)
            loc = {v: i for i, v in enumerate(att.local)}
            sub = Graph.from_edges(len(att.local), [(loc[u], loc[v]) for u, v in g.edges
                                                    if u in loc and v in loc and not (u in c and v in c)])
            gad = build_gadget(sub, compute_dpc(sub, *(loc[v] for v in c)))
            att.gadget = gad
            glob = att.local
            for x in gad.internal:
                pid[glob[x]] = len(label)
                label.append(glob[x])
                vweight[pid[glob[x]]] = Fraction(1)
            for a, b in gad.triangle():
                owner.setdefault(_key(pid[glob[a]], pid[glob[b]]), ("gadget", k))
            for tt, p in gad.ports.items():
                if tt in gad.legs:
                    a, b = pid[glob[tt]], pid[glob[p]]
                    s = len(label)
                    label.append(None)
                    legs[s] = (k, a, b)
                    for e in (_key(a, b), _key(a, s), _key(s, b)):
                        owner[e] = ("gadget", k)
                    wanted_faces.append((frozenset({a, b, s}), gad.leg_weight[tt]))
            if gad.hub is None:
                wanted_faces.append((frozenset(pid[glob[p]] for p in gad.ports.values()), gad.center_weight))

    # gadget edges keep their owner even when real, so a segment runs terminal to terminal
    edges = set(owner)
    for u, v in piece.edges:
        e = _key(pid[u], pid[v])
        if e in owner and owner[e][0] == "gadget":
            continue
        if g.adjacent(u, v):
            edges.add(e)
            owner[e] = ("real",)
        elif e in owner:
            edges.add(e)
        elif e not in triple_edges:
            edges.add(e)
            owner[e] = ("orphan",)
    pg = Graph.from_edges(len(label), sorted(edges))
    emb = planar_embed(pg)
    faces = trace_faces(pg, emb)
    fweight: dict[int, Fraction] = {}
    for vs, wt in wanted_faces:
        cands = [i for i in range(len(faces)) if frozenset(faces.vertices(i)) == vs and i not in fweight]
        if not cands:
            raise GraphError(f"gadget face on {sorted(vs)} is missing from the spliced embedding")
        fweight[cands[0]] = Fraction(wt)
    w = WeightAssignment(vweight, eweight, {f: x for f, x in fweight.items() if x})
    return Projection("planar", (), pg, emb, w, label, atts, {e: owner[e] for e in pg.edges}, legs)


# -- lifting ---------------------------------------------------------------

@dataclass
class Segment:
    owner: tuple
    waypoints: list[int]            # global ids
    case: int | None = None
    subcase: int | None = None


@dataclass
class LiftResult:
    cycle: list[int]
    segments: list[Segment]


def _accept(proj: Projection):
    def ok(c: list[int]) -> bool:
        cs = set(c)
        for s, (_, a, b) in proj.legs.items():
            if cs == {s, a, b}:
                return False
        owners = {proj.owner[_key(c[i], c[(i + 1) % len(c)])] for i in range(len(c))}
        return not (len(owners) == 1 and owners.pop()[0] != "real")
    return ok


def _classify(gad: Gadget, wp_local: list[int], used_leg: bool) -> int:
    terms = set(gad.terminals)
    inner = wp_local[1:-1]
    if any(v in terms for v in inner):
        return 4
    if used_leg:
        return 3
    if not inner and wp_local[0] in terms and wp_local[-1] in terms:
        return 1
    return 2


def feasible_subcases(gad: Gadget) -> set[int]:
    """Subcases reachable by some terminal-to-terminal walk through the abstract gadget."""
    adj: dict[int, set[tuple[int, bool]]] = {}

    def link(a, b, leg):
        adj.setdefault(a, set()).add((b, leg))
        adj.setdefault(b, set()).add((a, leg))

    for a, b in gad.triangle():
        link(a, b, False)
    for t, p in gad.ports.items():
        if t in gad.legs:
            link(t, p, True)
    terms = set(gad.terminals)
    out = set()

    def walk(path, leg):
        for nb, is_leg in adj.get(path[-1], ()):
            if nb in path:
                continue
            if nb in terms:
                out.add(_classify(gad, path + [nb], leg or is_leg))
            walk(path + [nb], leg or is_leg)

    for t in terms:
        walk([t], False)
    return out


def _lift_gadget(g: Graph, att: Attachment, wp: list[int]) -> list[int]:
    gad = att.gadget
    loc = [att.to_local(v) for v in wp]
    sub = Graph.from_edges(len(att.local), [(att.to_local(u), att.to_local(v)) for u, v in g.edges
                                            if u in att.vertices and v in att.vertices
                                            and not (u in att.clique and v in att.clique)])
    special = set(gad.terminals) | set(gad.internal)
    cuts = [i for i in range(1, len(loc) - 1) if loc[i] in gad.internal]
    bounds = [0] + cuts + [len(loc) - 1]
    used: set[int] = set()
    out: list[int] = []
    for a, b in zip(bounds, bounds[1:]):
        part = loc[a:b + 1]
        alive = set(range(sub.n)) - (special - set(part)) - used
        if len(part) == 2:
            p = bfs_path(sub, part[0], part[1], alive)
        elif len(part) == 3:
            r = vertex_disjoint_via(sub, part[0], part[1], part[2], alive)
            p = None if r is None else r[0] + r[1][1:]
        else:
            p = None
        if p is None:
            raise BugSignal(f"no real path realises gadget segment {wp}")
        used |= set(p[:-1])
        out.extend(p if not out else p[1:])
    return [att.local[v] for v in out]


def _check_sidedness(proj: Projection, cbar: list[int]) -> None:
    """Each attachment's clique lies weakly on one side of the projected cycle."""
    reg = interior_exterior(proj.graph, proj.emb, cbar)
    where = {v: i for i, v in enumerate(proj.label) if v is not None}
    for att in proj.attachments:
        ids = [where[v] for v in att.clique if v in where]
        if any(i in reg.interior_vertices for i in ids) and any(i in reg.exterior_vertices for i in ids):
            raise BugSignal(f"attachment on {att.clique} straddles the cycle")


def lift_cycle(g: Graph, proj: Projection, cbar: list[int]) -> LiftResult:
    k = len(cbar)
    _check_sidedness(proj, cbar)
    leg_edges = {_key(a, b) for _, a, b in proj.legs.values()}
    # steps are (from, to, owner, is_leg) with subdivision vertices contracted
    steps: list[tuple[int, int, tuple, bool]] = []
    seq = list(cbar)
    # rotate so we never start on a subdivision vertex
    while proj.label[seq[0]] is None:
        seq = seq[1:] + seq[:1]
    j = 0
    while j < k:
        a = seq[j]
        b = seq[(j + 1) % k]
        if proj.label[b] is None:
            c = seq[(j + 2) % k]
            steps.append((a, c, proj.owner[_key(a, b)], True))
            j += 2
        else:
            own = proj.owner[_key(a, b)]
            steps.append((a, b, own, own[0] == "gadget" and _key(a, b) in leg_edges))
            j += 1
    # group consecutive steps with the same non-real owner
    groups: list[list] = []
    for st in steps:
        if groups and st[2][0] != "real" and groups[-1][0][2] == st[2]:
            groups[-1].append(st)
        else:
            groups.append([st])
    if len(groups) > 1 and groups[0][0][2][0] != "real" and groups[0][0][2] == groups[-1][0][2]:
        groups[0] = groups.pop() + groups[0]
    cycle: list[int] = []
    segments: list[Segment] = []
    for grp in groups:
        own = grp[0][2]
        wp = [proj.label[grp[0][0]]] + [proj.label[st[1]] for st in grp]
        if own[0] == "real":
            path = wp
        elif own[0] == "pair":
            att = proj.attachments[own[1]]
            path = bfs_path(g, wp[0], wp[1], set(att.vertices))
            if path is None:
                raise BugSignal(f"pair attachment {att.clique} has no real path")
            segments.append(Segment(own, wp))
        elif own[0] == "gadget":
            att = proj.attachments[own[1]]
            path = _lift_gadget(g, att, wp)
            loc = [att.to_local(v) for v in wp]
            segments.append(Segment(own, wp, att.gadget.case,
                                    _classify(att.gadget, loc, any(st[3] for st in grp))))
        else:
            raise BugSignal(f"virtual edge {wp} belongs to no attachment")
        cycle.extend(path[:-1])
    if len(set(cycle)) != len(cycle) or len(cycle) < 3:
        raise BugSignal(f"lifted cycle is not simple: {cycle}")
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        if not g.adjacent(a, b):
            raise BugSignal(f"lifted cycle uses non-edge {(a, b)}")
    return LiftResult(cycle, segments)


# -- dispatch --------------------------------------------------------------

@dataclass
class ScmSeparation:
    vertices: list[int]
    kind: str
    center: tuple[str, int]
    lift: LiftResult | None = None
    fallback: bool = False
    notes: list[str] = field(default_factory=list)


def scm_separation(g: Graph, t: CliqueSumTree | None = None, alpha=TWO_THIRDS,
                   mode: str = "heuristic") -> ScmSeparation:
    from .cliquesum import build_clique_sum_tree
    from .separators import undirected_dfs_path_separator

    alpha = Fraction(alpha)
    if t is None:
        t = build_clique_sum_tree(g)
    center = find_central_node(g, t)
    proj = project_weights(g, t, center)
    res = ScmSeparation([], proj.kind, center, notes=list(proj.notes))
    if proj.kind != "planar":
        res.vertices = sorted(proj.separator)
    else:
        try:
            cbar = cycle_separator(proj.graph, proj.emb, proj.weights, TWO_THIRDS, mode, accept=_accept(proj))
            res.lift = lift_cycle(g, proj, cbar)
            res.vertices = sorted(res.lift.cycle)
        except BugSignal as exc:
            res.notes.append(f"projection pipeline failed: {exc}")
            res.fallback = True
    if res.fallback or not check_separator_balance(g, res.vertices, alpha).passed:
        res.fallback = True
        res.notes.append("fell back to the DFS path separator")
        log.info("scm separator fell back to the DFS path separator")
        res.vertices = sorted(undirected_dfs_path_separator(g, alpha))
    return res


def scm_separator(g: Graph, t: CliqueSumTree | None = None, alpha=TWO_THIRDS, mode: str = "heuristic") -> list[int]:
    return scm_separation(g, t, alpha, mode).vertices
