"""Schema-versioned JSON files for instances and artifacts.

Rationals are written as "p/q" strings so balance decisions survive
round-trips exactly. Output is byte-deterministic (sorted keys, fixed
separators).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .cliquesum import CliqueSumTree, Piece
from .embedding import Embedding, trace_faces
from .graph import Graph, GraphError, RootedTree
from .separators import WeightAssignment

INSTANCE_SCHEMA = "sepdfs/instance@1"
ARTIFACT_SCHEMA = "sepdfs/artifact@1"
ARTIFACT_KINDS = ("separator", "dfs", "maxpath", "embedding")


class SchemaError(GraphError):
    """Malformed or inconsistent instance/artifact file."""


def fmt_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, bool):
        raise SchemaError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise SchemaError(f"rationals must be 'p/q' strings or integers, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational {s!r}") from exc


@dataclass
class InstanceFile:
    graph: Graph
    embedding: Embedding | None = None
    weights: WeightAssignment | None = None
    clique_sum_tree: CliqueSumTree | None = None
    bags: list[list[int]] | None = None
    bag_edges: list[tuple[int, int]] | None = None
    order: list[int] | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    def validate(self) -> None:
        g = self.graph
        if self.embedding is not None:
            self.embedding.validate(g)
            if self.embedding.outer is not None and not g.adjacent(*self.embedding.outer):
                raise SchemaError(f"outer dart {self.embedding.outer} is not an edge")
        if self.weights is not None:
            self.weights.validate()
            for v in self.weights.vertex:
                if not 0 <= v < g.n:
                    raise SchemaError(f"vertex weight on unknown vertex {v}")
            for e in self.weights.edge:
                if e not in g.edge_set:
                    raise SchemaError(f"edge weight on unknown edge {e}")
            if self.weights.face:
                if self.embedding is None:
                    raise SchemaError("face weights need a rotation system")
                nf = len(trace_faces(g, self.embedding).faces)
                for f in self.weights.face:
                    if not 0 <= f < nf:
                        raise SchemaError(f"face weight on unknown face {f}")
        if self.clique_sum_tree is not None:
            self.clique_sum_tree.validate(g)
        if self.bags is not None:
            _validate_decomposition(g, self.bags, self.bag_edges or [])
        if self.order is not None and sorted(self.order) != list(range(g.n)):
            raise SchemaError("order must be a permutation of 0..n-1")


def _validate_decomposition(g: Graph, bags, tedges) -> None:
    for b in bags:
        for v in b:
            if not 0 <= v < g.n:
                raise SchemaError(f"bag vertex {v} out of range")
    for a, b in tedges:
        if not (0 <= a < len(bags) and 0 <= b < len(bags)):
            raise SchemaError(f"tree edge ({a}, {b}) names a missing bag")
    if bags and len(tedges) != len(bags) - 1:
        raise SchemaError("tree decomposition edges do not form a tree")
    sets = [set(b) for b in bags]
    for u, v in g.edges:
        if not any(u in s and v in s for s in sets):
            raise SchemaError(f"edge ({u}, {v}) is in no bag")
    covered = set().union(*sets) if sets else set()
    if covered != set(range(g.n)) and g.n:
        raise SchemaError("some vertex is in no bag")
    # bags holding each vertex must be connected in the tree
    adj = {i: [] for i in range(len(bags))}
    for a, b in tedges:
        adj[a].append(b)
        adj[b].append(a)
    for v in range(g.n):
        hold = {i for i, s in enumerate(sets) if v in s}
        start = next(iter(hold))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in hold and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != hold:
            raise SchemaError(f"bags containing {v} are not connected")


# -- encoding -------------------------------------------------------------

def _graph_doc(g: Graph) -> dict:
    return {"n": g.n, "directed": g.directed, "edges": [list(e) for e in g.edges]}


def instance_to_doc(inst: InstanceFile) -> dict:
    doc: dict[str, Any] = {"schema": INSTANCE_SCHEMA, "graph": _graph_doc(inst.graph)}
    if inst.embedding is not None:
        doc["rotation"] = {"order": [list(r) for r in inst.embedding.rotation],
                           "outer": list(inst.embedding.outer) if inst.embedding.outer else None}
    if inst.weights is not None:
        w = inst.weights
        doc["weights"] = {
            "vertex": [[v, fmt_rational(x)] for v, x in sorted(w.vertex.items())],
            "edge": [[u, v, fmt_rational(x)] for (u, v), x in sorted(w.edge.items())],
            "face": [[f, fmt_rational(x)] for f, x in sorted(w.face.items())],
        }
    if inst.clique_sum_tree is not None:
        t = inst.clique_sum_tree
        doc["clique_sum_tree"] = {
            "pieces": [{"vertices": list(p.vertices), "edges": sorted(list(e) for e in p.edges),
                        "virtual": sorted(list(e) for e in p.virtual), "kind": p.kind} for p in t.pieces],
            "cliques": [list(c) for c in t.cliques],
            "incidence": [list(x) for x in t.incidence],
            "diagnostics": list(t.diagnostics),
        }
    if inst.bags is not None:
        doc["tree_decomposition"] = {"bags": [sorted(b) for b in inst.bags],
                                     "edges": [list(e) for e in inst.bag_edges or []]}
    if inst.order is not None:
        doc["order"] = list(inst.order)
    if inst.meta:
        doc["meta"] = inst.meta
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _need(doc: dict, key: str, typ):
    if key not in doc:
        raise SchemaError(f"missing field {key!r}")
    if not isinstance(doc[key], typ):
        raise SchemaError(f"field {key!r} has the wrong type")
    return doc[key]


def instance_from_doc(doc: dict) -> InstanceFile:
    if not isinstance(doc, dict) or doc.get("schema") != INSTANCE_SCHEMA:
        raise SchemaError(f"expected schema {INSTANCE_SCHEMA!r}")
    gd = _need(doc, "graph", dict)
    try:
        g = Graph(int(_need(gd, "n", int)), bool(_need(gd, "directed", bool)),
                  tuple(tuple(e) for e in _need(gd, "edges", list)))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad graph: {exc}") from exc
    inst = InstanceFile(g, meta=doc.get("meta", {}))
    if doc.get("rotation") is not None:
        rd = _need(doc, "rotation", dict)
        outer = rd.get("outer")
        inst.embedding = Embedding(tuple(tuple(r) for r in _need(rd, "order", list)),
                                   tuple(outer) if outer else None)
    if doc.get("weights") is not None:
        wd = _need(doc, "weights", dict)
        inst.weights = WeightAssignment(
            {int(v): parse_rational(x) for v, x in wd.get("vertex", [])},
            {(min(u, v), max(u, v)): parse_rational(x) for u, v, x in wd.get("edge", [])},
            {int(f): parse_rational(x) for f, x in wd.get("face", [])})
    if doc.get("clique_sum_tree") is not None:
        td = _need(doc, "clique_sum_tree", dict)
        pieces = [Piece(tuple(p["vertices"]), frozenset(tuple(e) for e in p["edges"]),
                        frozenset(tuple(e) for e in p["virtual"]), p["kind"]) for p in td["pieces"]]
        inst.clique_sum_tree = CliqueSumTree(pieces, [tuple(c) for c in td["cliques"]],
                                             [tuple(x) for x in td["incidence"]],
                                             list(td.get("diagnostics", [])))
    if doc.get("tree_decomposition") is not None:
        dd = _need(doc, "tree_decomposition", dict)
        inst.bags = [list(b) for b in _need(dd, "bags", list)]
        inst.bag_edges = [tuple(e) for e in dd.get("edges", [])]
    if doc.get("order") is not None:
        inst.order = list(_need(doc, "order", list))
    try:
        inst.validate()
    except SchemaError:
        raise
    except GraphError as exc:
        raise SchemaError(str(exc)) from exc
    return inst


def read_instance(path: str | Path) -> InstanceFile:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not JSON: {exc}") from exc
    return instance_from_doc(doc)


def write_instance(inst: InstanceFile, path: str | Path | None = None) -> str:
    text = dumps(instance_to_doc(inst))
    if path is not None:
        Path(path).write_text(text)
    return text


# -- artifacts ------------------------------------------------------------

def tree_to_doc(t: RootedTree) -> dict:
    return {"root": t.root,
            "parent": [[v, p] for v, p in sorted(t.parent.items())],
            "children": [[v, list(c)] for v, c in sorted(t.children.items())]}


def tree_from_doc(d: dict) -> RootedTree:
    return RootedTree(int(d["root"]), {int(v): p for v, p in d["parent"]},
                      {int(v): list(c) for v, c in d["children"]})


def artifact_doc(kind: str, result: dict, verdict: dict) -> dict:
    if kind not in ARTIFACT_KINDS:
        raise SchemaError(f"unknown artifact kind {kind!r}")
    return {"schema": ARTIFACT_SCHEMA, "kind": kind, "result": result, "verdict": verdict}


def read_artifact(path: str | Path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != ARTIFACT_SCHEMA:
        raise SchemaError(f"expected schema {ARTIFACT_SCHEMA!r}")
    if doc.get("kind") not in ARTIFACT_KINDS:
        raise SchemaError(f"unknown artifact kind {doc.get('kind')!r}")
    _need(doc, "result", dict)
    return doc
