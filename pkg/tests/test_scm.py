from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from oracles import balanced, component_sizes, is_simple_cycle, via_path_exists
from sepdfs.cliquesum import CliqueSumTree, Piece, build_clique_sum_tree, find_central_node, treewidth_upper
from sepdfs.embedding import ensure_outer, planar_embed, trace_faces
from sepdfs.generators import grid, ktree, maximal_planar, scm_assembly
from sepdfs.graph import Graph, GraphError
from sepdfs.scm import (_accept, build_gadget, central_bag, compute_dpc, feasible_subcases, lift_cycle,
                        project_weights, scm_separation, scm_separator, tw_path_separator)
from sepdfs.separators import HALF, TWO_THIRDS, enumerate_cycles, side_weights


def two_k4s():
    return Graph.from_edges(5, [e for e in itertools.combinations(range(4), 2)]
                            + [(0, 4), (1, 4), (2, 4)])


def glued(center: Graph, clique, extra_edges, n_extra):
    """``center`` with one attachment on ``clique``; new vertices follow the center's."""
    n = center.n + n_extra
    g = Graph.from_edges(n, list(center.edges) + list(extra_edges))
    cl = {tuple(sorted(p)) for p in itertools.combinations(clique, 2)}
    att_vs = tuple(sorted(set(clique) | set(range(center.n, n))))
    att_edges = frozenset({tuple(sorted(e)) for e in extra_edges} | cl)
    pieces = [Piece(tuple(range(center.n)), frozenset(center.edges), frozenset(), "planar"),
              Piece(att_vs, att_edges, frozenset(e for e in att_edges if e not in g.edge_set), "planar")]
    return g, CliqueSumTree(pieces, [tuple(sorted(clique))], [(0, 0), (1, 0)])


class TestCliqueSumTree:
    def test_planar_single_piece(self):
        t = build_clique_sum_tree(grid(4, 4))
        assert len(t.pieces) == 1 and not t.cliques

    def test_two_k4s_on_a_triangle(self):
        g = two_k4s()
        t = build_clique_sum_tree(g)
        assert len(t.pieces) == 2 and t.cliques == [(0, 1, 2)]
        t.validate(g)

    def test_nonplanar_low_treewidth(self):
        g = Graph.from_edges(6, [(a, b) for a in range(3) for b in range(3, 6)])
        t = build_clique_sum_tree(g)
        assert [p.kind for p in t.pieces] == ["tw"]

    def test_directed_rejected(self):
        with pytest.raises(GraphError):
            build_clique_sum_tree(Graph.from_edges(2, [(0, 1)], directed=True))

    @pytest.mark.parametrize("seed", range(6))
    def test_assembly_glues_back(self, seed):
        g, t = scm_assembly(seed)
        t.validate(g)
        rebuilt = build_clique_sum_tree(g)
        rebuilt.validate(g)


class TestCentralNode:
    def test_single_piece(self):
        g = grid(3, 3)
        assert find_central_node(g, build_clique_sum_tree(g)) == ("P", 0)

    @pytest.mark.parametrize("seed", range(10))
    def test_against_component_oracle(self, seed):
        g, t = scm_assembly(seed, center=4 + seed % 3)
        node = find_central_node(g, t)
        assert all(2 * s < g.n for s in component_sizes(g, t.node_vertices(node)))

    def test_chain_of_k4s(self):
        # K4s glued in a row at triangles: the central node sits in the middle
        edges = set()
        for i in range(6):
            edges |= set(itertools.combinations(range(i, i + 4), 2))
        g = Graph.from_edges(9, sorted(edges))
        t = build_clique_sum_tree(g)
        node = find_central_node(g, t)
        assert all(2 * s < g.n for s in component_sizes(g, t.node_vertices(node)))


class TestDpc:
    def test_k4_case1(self):
        sub = Graph.from_edges(4, list(itertools.combinations(range(4), 2)))
        d = compute_dpc(sub, 0, 1, 2)
        assert d.via == (True, True, True) and d.case == 1

    def test_spider_case4(self):
        sub = Graph.from_edges(4, [(3, 0), (3, 1), (3, 2)])
        d = compute_dpc(sub, 0, 1, 2)
        assert d.via == (False, False, False) and d.case == 4

    def test_case2(self):
        # v1 - x, then a block on {x, v2, v3}
        sub = Graph.from_edges(4, [(0, 3), (3, 1), (3, 2), (1, 2)])
        d = compute_dpc(sub, 0, 1, 2)
        assert d.case == 2 and d.flags() == (True, True, False)

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_enumeration(self, seed):
        g, t = scm_assembly(seed)
        for att_vs, c in ((set(t.pieces[p].vertices), t.cliques[ci]) for p, ci in t.incidence if p > 0):
            if len(c) != 3:
                continue
            loc = sorted(att_vs)
            idx = {v: i for i, v in enumerate(loc)}
            sub = Graph.from_edges(len(loc), [(idx[u], idx[v]) for u, v in g.edges
                                              if u in idx and v in idx and not (u in c and v in c)])
            a, b, m = (idx[v] for v in c)
            d = compute_dpc(sub, a, b, m)
            assert d.via == (via_path_exists(sub, b, a, m), via_path_exists(sub, m, b, a),
                             via_path_exists(sub, a, m, b))


class TestGadget:
    def test_case2_face_weights(self):
        # v1=0 - x=1, K4 on {x, v2=2, v3=3, w=4}
        sub = Graph.from_edges(5, [(0, 1)] + list(itertools.combinations([1, 2, 3, 4], 2)))
        gad = build_gadget(sub, compute_dpc(sub, 0, 2, 3))
        assert gad.case == 2 and gad.ports[0] == 1
        assert (gad.leg_weight[0], gad.center_weight) == (0, 1)

    def test_spider_merged(self):
        sub = Graph.from_edges(4, [(3, 0), (3, 1), (3, 2)])
        gad = build_gadget(sub, compute_dpc(sub, 0, 1, 2))
        assert gad.hub == 3 and gad.internal == (3,)
        assert gad.leg_weight == {0: 0, 1: 0, 2: 0}

    @pytest.mark.parametrize("seed", range(30))
    def test_generated_cases_and_conservation(self, seed):
        cases = (1, 2, 3, 4) if seed % 2 else (2, 3, 5)
        g, t = scm_assembly(seed, cases=cases, center=5)
        proj = project_weights(g, t, ("P", 0))
        got = [a.gadget.case for a in proj.attachments if a.gadget is not None]
        assert got == [min(c, 4) for c in cases]
        for a in proj.attachments:
            if a.gadget is not None:
                gad = a.gadget
                assert gad.conserved()
                if gad.case == 2:
                    v1 = next(iter(gad.legs))
                    # the cut vertex x is counted in both blocks
                    assert len(gad.legs[v1]) + len(gad.center) == gad.size + 1


class TestProjection:
    def test_pair_attachment_edge_weight(self):
        center = maximal_planar(7, 1)
        u, v = center.edges[0]
        n = center.n
        g, t = glued(center, (u, v), [(u, n), (n, n + 1), (n + 1, n + 2), (n + 2, v)], 3)
        proj = project_weights(g, t, ("P", 0))
        assert proj.weights.edge[(u, v)] == 3

    def test_triple_attachment_face_weight(self):
        center = maximal_planar(9, 2)
        center_emb = planar_embed(center)
        fs = trace_faces(center, center_emb)
        tri = tuple(sorted(set(fs.vertices(0))))
        n = center.n
        inner = list(range(n, n + 4))
        extra = [(a, b) for a in tri for b in inner] + [(inner[i], inner[i + 1]) for i in range(3)]
        g, t = glued(center, tri, extra, 4)
        proj = project_weights(g, t, ("P", 0))
        assert proj.attachments[0].gadget.case == 1
        assert Fraction(4) in proj.weights.face.values()

    def test_heavy_clique(self):
        center = Graph.from_edges(4, list(itertools.combinations(range(4), 2)))
        # ten extra vertices in five small branches hanging off the triangle
        extra = [e for k in range(5) for e in ((k % 3, 4 + 2 * k), (4 + 2 * k, 5 + 2 * k), ((k + 1) % 3, 5 + 2 * k))]
        g, t = glued(center, (0, 1, 2), extra, 10)
        assert find_central_node(g, t) == ("P", 0)
        proj = project_weights(g, t, ("P", 0))
        assert proj.kind == "heavy-clique" and len(proj.separator) <= 3
        assert balanced(g, proj.separator, HALF)

    def test_bag_answer(self):
        g, bags, _ = ktree(30, 3, 4)
        sep = central_bag(g, bags)
        assert len(sep) <= 4 and balanced(g, sep, HALF)


class TestLift:
    def test_real_cycle_is_identity(self):
        g = grid(4, 4)
        t = build_clique_sum_tree(g)
        proj = project_weights(g, t, ("P", 0))
        res = lift_cycle(g, proj, [0, 1, 5, 4])
        assert res.cycle == [0, 1, 5, 4] and not res.segments

    @pytest.mark.parametrize("seed", range(8))
    def test_every_separating_cycle_lifts(self, seed):
        g, t = scm_assembly(seed, cases=(1, 2, 3, 4) if seed % 2 else (2, 3, 5), center=4 + seed % 2, drop=0.7)
        proj = project_weights(g, t, ("P", 0))
        pg, emb = proj.graph, ensure_outer(proj.graph, proj.emb)
        fs, tot, ok = trace_faces(pg, emb), proj.weights.total(), _accept(proj)
        for cyc in enumerate_cycles(pg):
            if not ok(cyc):
                continue
            i, e = side_weights(pg, emb, proj.weights, cyc, fs)
            if 3 * i > 2 * tot or 3 * e > 2 * tot:
                continue
            res = lift_cycle(g, proj, cyc)
            assert is_simple_cycle(g, res.cycle)
            assert balanced(g, res.cycle, TWO_THIRDS)
            for seg in res.segments:
                if seg.case is not None:
                    assert seg.subcase in feasible_subcases(proj.attachments[seg.owner[1]].gadget)


class TestScmSeparator:
    def test_planar_single_piece(self):
        g = grid(5, 5)
        sep = scm_separator(g)
        assert balanced(g, sep, TWO_THIRDS)

    def test_two_k4s(self):
        g = two_k4s()
        assert balanced(g, scm_separator(g), TWO_THIRDS)

    @pytest.mark.parametrize("seed", range(10))
    def test_assemblies(self, seed):
        g, t = scm_assembly(seed, center=6, k5=seed % 2 == 1)
        res = scm_separation(g, t)
        assert balanced(g, res.vertices, TWO_THIRDS)

    @pytest.mark.parametrize("seed", range(5))
    def test_tw_path_separator(self, seed):
        g, bags, _ = ktree(40, 3, seed)
        p = tw_path_separator(g, bags)
        assert balanced(g, p, TWO_THIRDS)
        assert treewidth_upper(g)[0] <= 3
