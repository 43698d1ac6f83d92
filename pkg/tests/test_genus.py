from __future__ import annotations

import itertools

import pytest

from oracles import balanced, is_simple_path
from sepdfs.embedding import Embedding, euler_genus, is_surface_separating, planar_embed
from sepdfs.generators import double_torus, grid, orient, toroidal
from sepdfs.genus import find_nonseparating_fundamental_cycle, genus_multipath_separator, genus_path_separator
from sepdfs.graph import Graph, GraphError, bfs_arborescence
from sepdfs.separators import TWO_THIRDS, directed_path_separator


def k5_torus():
    g = Graph.from_edges(5, [(u, v) for u in range(5) for v in range(u + 1, 5)])
    choices = [[(g.neighbors(v)[0],) + p for p in itertools.permutations(g.neighbors(v)[1:])] for v in range(5)]
    for combo in itertools.product(*choices):
        emb = Embedding(tuple(combo))
        if euler_genus(g, emb) == 1:
            return g, emb
    raise AssertionError("K5 has a toroidal rotation")


def check_cycle(g, emb, c):
    assert is_simple_path(g, c.first) and is_simple_path(g, c.second) or not c.second
    assert not set(c.first) & set(c.second)
    assert not is_surface_separating(c.cycle, g.underlying(), emb)


class TestFundamentalCycle:
    def test_torus_grid(self):
        g, emb = toroidal(5, 5)
        dg = g.bidirected()
        c = find_nonseparating_fundamental_cycle(dg, emb, bfs_arborescence(dg, 0))
        check_cycle(dg, emb, c)
        assert c.closing in dg.edge_set

    def test_planar_rejected(self):
        g = grid(3, 3)
        emb = planar_embed(g)
        with pytest.raises(GraphError):
            find_nonseparating_fundamental_cycle(g.bidirected(), emb, bfs_arborescence(g.bidirected(), 0))

    def test_k5_on_torus(self):
        g, emb = k5_torus()
        dg = g.bidirected()
        c = find_nonseparating_fundamental_cycle(dg, emb, bfs_arborescence(dg, 0))
        check_cycle(dg, emb, c)

    def test_common_ancestor_in_first_path(self):
        g, emb = toroidal(4, 4)
        dg = g.bidirected()
        arb = bfs_arborescence(dg, 0)
        c = find_nonseparating_fundamental_cycle(dg, emb, arb)
        u, v = c.closing
        assert c.first[-1] == u and (not c.second or c.second[-1] == v)
        assert arb.parent[c.first[1]] == c.first[0] if len(c.first) > 1 else True


class TestGenusSeparator:
    def test_planar_digraph_single_path(self):
        g = grid(5, 5).bidirected()
        res = genus_multipath_separator(g, planar_embed(grid(5, 5)))
        assert len(res.paths) == 1 and not res.cycles

    def test_torus_5x5(self):
        g, emb = toroidal(5, 5)
        res = genus_multipath_separator(g.bidirected(), emb)
        assert len(res.paths) <= 3
        assert balanced(g.bidirected(), [v for p in res.paths for v in p], TWO_THIRDS)
        for c in res.cycles:
            assert not is_surface_separating(c.cycle, g, emb)

    def test_two_small_components(self):
        g1, e1 = toroidal(3, 3)
        edges = list(g1.edges) + [(u + 9, v + 9) for u, v in g1.edges]
        g = Graph.from_edges(18, edges)
        dg = Graph.from_edges(18, [a for u, v in g.edges for a in ((u, v), (v, u))], directed=True)
        emb = Embedding(tuple(e1.rotation) + tuple(tuple(w + 9 for w in r) for r in e1.rotation))
        res = genus_multipath_separator(dg, emb)
        assert res.paths == []

    def test_cycles_are_disjoint(self):
        g, emb = double_torus(4, 4)
        res = genus_multipath_separator(g.bidirected(), emb)
        seen = set()
        for c in res.cycles:
            assert not seen & set(c.cycle)
            seen |= set(c.cycle)
        assert len(res.cycles) <= 2 * res.genus

    @pytest.mark.parametrize("seed", range(5))
    def test_oriented_torus(self, seed):
        g, emb = toroidal(6, 6)
        dg = orient(g, seed, both=0.6)
        res = genus_multipath_separator(dg, emb)
        assert balanced(dg, [v for p in res.paths for v in p], TWO_THIRDS)
        for p in res.paths:
            assert is_simple_path(dg, p)


class TestGenusPathSeparator:
    def test_planar_matches_directed(self):
        g = grid(5, 5).bidirected()
        assert genus_path_separator(g, planar_embed(grid(5, 5))) == directed_path_separator(g)

    @pytest.mark.parametrize("rows", [4, 6, 8])
    def test_torus(self, rows):
        g, emb = toroidal(rows, rows)
        p = genus_path_separator(g.bidirected(), emb)
        assert is_simple_path(g.bidirected(), p) and balanced(g.bidirected(), p, TWO_THIRDS)

    def test_double_torus(self):
        g, emb = double_torus(5, 5)
        res = genus_multipath_separator(g.bidirected(), emb)
        assert len(res.paths) <= 5
        p = genus_path_separator(g.bidirected(), emb)
        assert is_simple_path(g.bidirected(), p) and balanced(g.bidirected(), p, TWO_THIRDS)
