"""Command line interface.

Exit codes: 0 success/verified, 1 verification failed, 2 precondition or
schema error, 3 internal bug signal.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import generators
from .dfs import lex_dfs, lex_tree_edges, separator_dfs, verify_dfs_tree
from .embedding import Embedding, ensure_outer, euler_genus, planar_embed
from .genus import genus_multipath_separator
from .graph import BugSignal, Graph, GraphError
from .io import (InstanceFile, SchemaError, artifact_doc, dumps, fmt_rational, parse_rational,
                 read_artifact, read_instance, tree_from_doc, tree_to_doc, write_instance)
from .maxpath import maximal_path_detailed, verify_maximal
from .scm import scm_separation, tw_path_separator
from .separators import (WeightAssignment, check_separator_balance, cycle_separator, directed_path_separator,
                         merge_multipath, side_weights, undirected_dfs_path_separator)

log = logging.getLogger("sepdfs")

STRATEGIES = ("dfs", "directed", "kao-merge", "cycle", "genus", "scm", "tw")
EXIT_OK, EXIT_FAIL, EXIT_PRE, EXIT_BUG = 0, 1, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _embedding(inst: InstanceFile) -> Embedding:
    if inst.embedding is not None:
        return inst.embedding
    return planar_embed(inst.graph)


def _uniform(g: Graph) -> WeightAssignment:
    return WeightAssignment({v: Fraction(1) for v in range(g.n)})


# -- separator ------------------------------------------------------------

def run_separator(inst: InstanceFile, strategy: str, alpha: Fraction) -> tuple[dict, dict]:
    g = inst.graph
    result: dict = {"strategy": strategy, "alpha": fmt_rational(alpha)}
    fallbacks: list[str] = []
    verdict: dict = {}
    if strategy == "dfs":
        sep = undirected_dfs_path_separator(g, alpha)
    elif strategy == "directed":
        sep = directed_path_separator(g, alpha)
    elif strategy == "kao-merge":
        paths = inst.meta.get("paths")
        if not paths:
            raise GraphError("kao-merge needs planted paths in meta.paths")
        sep = merge_multipath(g, paths, alpha)
    elif strategy == "cycle":
        emb = ensure_outer(g, _embedding(inst))
        w = inst.weights or _uniform(g)
        cyc = cycle_separator(g, emb, w, alpha)
        inside, outside = side_weights(g, emb, w, cyc)
        total = w.total()
        sep = cyc
        result["cycle"] = cyc
        verdict["interior"] = fmt_rational(inside / total)
        verdict["exterior"] = fmt_rational(outside / total)
        verdict["cycle_balanced"] = inside <= alpha * total and outside <= alpha * total
    elif strategy == "genus":
        if inst.embedding is None:
            raise GraphError("genus strategy needs a rotation system")
        gs = genus_multipath_separator(g, inst.embedding, alpha)
        result["paths"] = gs.paths
        result["genus"] = gs.genus
        sep = [v for p in gs.paths for v in p]
        if gs.fallback:
            fallbacks.append("genus pipeline fell back")
        fallbacks += gs.notes
    elif strategy == "scm":
        res = scm_separation(g, inst.clique_sum_tree, alpha)
        sep = res.vertices
        result["kind"] = res.kind
        if res.fallback:
            fallbacks.append("scm pipeline fell back")
        fallbacks += res.notes
    elif strategy == "tw":
        sep = tw_path_separator(g, inst.bags, alpha)
    else:
        raise GraphError(f"unknown strategy {strategy!r}")
    result["separator"] = list(sep)
    rep = check_separator_balance(g, sep, alpha)
    verdict.update(rep.to_dict())
    verdict["fallbacks"] = fallbacks
    verdict["passed"] = rep.passed and verdict.get("cycle_balanced", True)
    return result, verdict


# -- dfs --------------------------------------------------------------------

def _dot(t) -> str:
    lines = ["digraph dfs {"]
    lines += [f"  {v};" for v in t.preorder()]
    for v in t.preorder():
        for c in t.children.get(v, []):
            lines.append(f"  {v} -> {c};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_dot(text: str) -> tuple[set[int], set[tuple[int, int]]]:
    nodes, edges = set(), set()
    for line in text.splitlines():
        line = line.strip().rstrip(";")
        if "->" in line:
            a, b = (int(x) for x in line.split("->"))
            edges.add((a, b))
        elif line.isdigit():
            nodes.add(int(line))
    return nodes, edges


def run_dfs(inst: InstanceFile, root: int, mode: str, order) -> tuple[dict, dict]:
    g = inst.graph
    result: dict = {"mode": mode, "root": root}
    verdict: dict = {}
    if mode == "lex":
        t = lex_dfs(g, root, order)
        result["order"] = list(order) if order is not None else None
        v = verify_dfs_tree(g, t, respect_order=False)
    else:
        res = separator_dfs(g, root)
        t = res.tree
        verdict["depth"] = res.depth
        verdict["depth_bound"] = res.depth_bound(g.n)
        verdict["fallbacks"] = res.fallbacks
        v = verify_dfs_tree(g, t)
    result["tree"] = tree_to_doc(t)
    verdict["passed"] = v.ok
    verdict["reason"] = v.reason
    return result, verdict


# -- verify -----------------------------------------------------------------

def verify_artifact(inst: InstanceFile, what: str, art: dict) -> dict:
    if art["kind"] != what:
        raise SchemaError(f"artifact is a {art['kind']!r}, not a {what!r}")
    g = inst.graph
    res = art["result"]
    if what == "separator":
        alpha = parse_rational(res.get("alpha", "2/3"))
        rep = check_separator_balance(g, res["separator"], alpha)
        out = rep.to_dict()
        ok = rep.passed
        if "cycle" in res:
            emb = ensure_outer(g, _embedding(inst))
            w = inst.weights or _uniform(g)
            inside, outside = side_weights(g, emb, w, res["cycle"])
            total = w.total()
            ok = ok and inside <= alpha * total and outside <= alpha * total
        out["passed"] = ok
        return out
    if what == "dfs":
        t = tree_from_doc(res["tree"])
        v = verify_dfs_tree(g, t)
        out = {"passed": v.ok, "reason": v.reason}
        if v.ok and res.get("mode") == "lex":
            order = res.get("order")
            ok = t.tree_edges() == lex_tree_edges(g, t.root, order)
            out["passed"] = ok
            out["reason"] = "" if ok else "tree is not the lex-first DFS tree"
        return out
    if what == "maxpath":
        p = res["path"]
        return {"passed": verify_maximal(g, p, p[0]) if p else False}
    if what == "embedding":
        emb = Embedding(tuple(tuple(r) for r in res["rotation"]))
        emb.validate(g)
        genus = euler_genus(g, emb)
        return {"passed": genus == res.get("genus", genus), "genus": genus}
    raise SchemaError(f"unknown artifact kind {what!r}")


# -- gen ----------------------------------------------------------------------

SCM_PROFILES = {"case1": (1,), "case2": (2,), "case3": (3,), "case4": (4,),
                "merged": (5,), "all": (1, 2, 3, 4)}


def run_gen(args) -> InstanceFile:
    if args.family == "planar":
        g = generators.planar(args.n, args.seed)
        return InstanceFile(g, embedding=planar_embed(g), meta={"family": "planar", "seed": args.seed})
    if args.family == "toroidal":
        if args.handles == 1:
            g, emb = generators.toroidal(args.rows, args.cols)
        else:
            g, emb = generators.double_torus(args.rows, args.cols)
        return InstanceFile(g, embedding=emb, meta={"family": "toroidal", "handles": args.handles})
    if args.family == "scm":
        if args.profile not in SCM_PROFILES:
            raise GraphError(f"unknown scm profile {args.profile!r}; choose from {sorted(SCM_PROFILES)}")
        g, t = generators.scm_assembly(args.seed, cases=SCM_PROFILES[args.profile])
        triples = [list(c) for c in t.cliques if len(c) == 3]
        return InstanceFile(g, clique_sum_tree=t,
                            meta={"family": "scm", "profile": args.profile, "seed": args.seed,
                                  "triples": triples})
    if args.family == "treewidth":
        g, bags, tedges = generators.ktree(args.n, args.w, args.seed)
        return InstanceFile(g, bags=bags, bag_edges=tedges,
                            meta={"family": "treewidth", "width": args.w, "seed": args.seed})
    raise GraphError(f"unknown family {args.family!r}")


# -- argument parsing ---------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sepdfs", description="Separator-driven DFS and maximal paths.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("separator", help="compute a balanced separator")
    s.add_argument("--strategy", choices=STRATEGIES, default="dfs")
    s.add_argument("--alpha", default="2/3")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out")

    d = sub.add_parser("dfs", help="compute and verify a DFS tree")
    d.add_argument("--in", dest="inp", required=True)
    d.add_argument("--root", type=int, default=0)
    d.add_argument("--mode", choices=("lex", "separator"), default="lex")
    d.add_argument("--strategy", choices=("directed",), default="directed")
    d.add_argument("--order", help="comma-separated vertex order")
    d.add_argument("--out")
    d.add_argument("--out-dot")

    m = sub.add_parser("maxpath", help="maximal path from a root")
    m.add_argument("--in", dest="inp", required=True)
    m.add_argument("--root", type=int, default=0)
    m.add_argument("--out")

    gen = sub.add_parser("gen", help="seeded instance generators")
    gsub = gen.add_subparsers(dest="family", required=True)
    gp = gsub.add_parser("planar")
    gp.add_argument("n", type=int)
    gp.add_argument("seed", type=int)
    gt = gsub.add_parser("toroidal")
    gt.add_argument("rows", type=int)
    gt.add_argument("cols", type=int)
    gt.add_argument("--handles", type=int, choices=(1, 2), default=1)
    gs = gsub.add_parser("scm")
    gs.add_argument("profile")
    gs.add_argument("seed", type=int)
    gw = gsub.add_parser("treewidth")
    gw.add_argument("n", type=int)
    gw.add_argument("w", type=int)
    gw.add_argument("seed", type=int)
    for x in (gp, gt, gs, gw):
        x.add_argument("--out")

    v = sub.add_parser("verify", help="re-verify an artifact against its instance")
    v.add_argument("--what", choices=("separator", "dfs", "maxpath", "embedding"), required=True)
    v.add_argument("--in", dest="inp", required=True)
    v.add_argument("--artifact", required=True)
    v.add_argument("--out")
    return ap


def _run(args) -> int:
    if args.command == "gen":
        inst = run_gen(args)
        inst.validate()
        _emit(write_instance(inst), args.out)
        return EXIT_OK
    inst = read_instance(args.inp)
    if args.command == "separator":
        result, verdict = run_separator(inst, args.strategy, parse_rational(args.alpha))
        _emit(dumps(artifact_doc("separator", result, verdict)), args.out)
        return EXIT_OK if verdict["passed"] else EXIT_FAIL
    if args.command == "dfs":
        order = [int(x) for x in args.order.split(",")] if args.order else inst.order
        result, verdict = run_dfs(inst, args.root, args.mode, order)
        _emit(dumps(artifact_doc("dfs", result, verdict)), args.out)
        if args.out_dot:
            Path(args.out_dot).write_text(_dot(tree_from_doc(result["tree"])))
        return EXIT_OK if verdict["passed"] else EXIT_FAIL
    if args.command == "maxpath":
        if not 0 <= args.root < inst.graph.n:
            raise GraphError(f"root {args.root} is not a vertex")
        res = maximal_path_detailed(inst.graph, args.root, inst.embedding)
        ok = verify_maximal(inst.graph, res.path, args.root)
        verdict = {"passed": ok, "fallback": res.fallback, "stages": res.stages}
        _emit(dumps(artifact_doc("maxpath", {"root": args.root, "path": res.path}, verdict)), args.out)
        return EXIT_OK if ok else EXIT_FAIL
    if args.command == "verify":
        verdict = verify_artifact(inst, args.what, read_artifact(args.artifact))
        _emit(dumps({"what": args.what, "verdict": verdict}), args.out)
        return EXIT_OK if verdict["passed"] else EXIT_FAIL
    raise GraphError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _run(args)
    except BugSignal as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_BUG
    except (GraphError, OSError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRE


if __name__ == "__main__":
    sys.exit(main())
