from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import balanced, component_sizes, exact_cycle_separator_exists, is_simple_cycle, is_simple_path
from sepdfs.embedding import ensure_outer, planar_embed, trace_faces
from sepdfs.generators import grid, maximal_planar, planted_multipath, random_digraph
from sepdfs.graph import Graph, GraphError, is_biconnected
from sepdfs.separators import (HALF, TWO_THIRDS, WeightAssignment, check_separator_balance, cycle_separator,
                               directed_path_separator, kao_merge_pair, merge_multipath, side_weights,
                               undirected_dfs_path_separator)


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def dicycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], directed=True)


def wheel(k):
    rim = list(range(1, k + 1))
    return Graph.from_edges(k + 1, [(0, v) for v in rim] + [(rim[i], rim[(i + 1) % k]) for i in range(k)])


def biconnected_planar(n, seed):
    """Maximal planar graph thinned by edge deletions that keep it biconnected."""
    rng = random.Random(seed)
    g = maximal_planar(n, seed)
    edges = list(g.edges)
    rng.shuffle(edges)
    keep = set(g.edges)
    for e in edges[: len(edges) // 3]:
        trial = Graph.from_edges(n, sorted(keep - {e}))
        if is_biconnected(trial):
            keep.discard(e)
    return Graph.from_edges(n, sorted(keep))


def random_weights(g, emb, seed):
    rng = random.Random(seed)
    nf = len(trace_faces(g, emb).faces)
    while True:
        w = WeightAssignment({v: Fraction(rng.randint(0, 4)) for v in range(g.n)},
                             {e: Fraction(rng.randint(0, 2)) for e in g.edges if rng.random() < 0.3},
                             {f: Fraction(rng.randint(0, 6)) for f in range(nf) if rng.random() < 0.5})
        t = w.total()
        if t > 0 and all(3 * x <= 2 * t for x in w.face.values()):
            return w


class TestBalanceOracle:
    def test_p5_middle(self):
        rep = check_separator_balance(path_graph(5), [2], HALF)
        assert rep.passed and sorted(rep.sizes) == [2, 2]

    def test_c6_directed_empty(self):
        assert not check_separator_balance(dicycle(6), [], TWO_THIRDS).passed

    def test_grid_middle_row(self):
        rep = check_separator_balance(grid(5, 5), [10, 11, 12, 13, 14], HALF)
        assert rep.passed and sorted(rep.sizes) == [10, 10]

    def test_alpha_out_of_range(self):
        with pytest.raises(GraphError):
            check_separator_balance(path_graph(3), [1], Fraction(1, 3))

    @settings(max_examples=80, deadline=None)
    @given(st.integers(2, 12), st.integers(0, 10_000), st.sets(st.integers(0, 11)))
    def test_agrees_with_reference(self, n, seed, sep):
        g = random_digraph(n, 0.3, seed)
        sep = {v for v in sep if v < n}
        rep = check_separator_balance(g, sep, TWO_THIRDS)
        assert sorted(rep.sizes, reverse=True) == component_sizes(g, sep)
        assert rep.passed == balanced(g, sep, TWO_THIRDS)


class TestUndirectedDfsPath:
    def test_star(self):
        g = Graph.from_edges(6, [(0, v) for v in range(1, 6)])
        assert undirected_dfs_path_separator(g) == [0]

    def test_path_graph(self):
        p = undirected_dfs_path_separator(path_graph(9))
        assert p == list(range(len(p)))
        assert 9 - len(p) <= 5

    @pytest.mark.parametrize("seed", range(20))
    def test_random_connected(self, seed):
        g = maximal_planar(50, seed)
        p = undirected_dfs_path_separator(g)
        assert is_simple_path(g, p) and balanced(g, p, HALF)

    def test_disconnected(self):
        with pytest.raises(GraphError):
            undirected_dfs_path_separator(Graph.from_edges(4, [(0, 1), (2, 3)]))


class TestDirectedPath:
    def test_cycle_single_vertex(self):
        assert len(directed_path_separator(dicycle(6))) == 1

    def test_dag(self):
        g = Graph.from_edges(5, [(0, 1), (1, 2), (0, 3), (3, 4)], directed=True)
        assert len(directed_path_separator(g)) == 1

    @pytest.mark.parametrize("seed", range(20))
    def test_random_strong(self, seed):
        g = random_digraph(40, 0.08, seed)
        p = directed_path_separator(g)
        assert is_simple_path(g, p) and balanced(g, p, TWO_THIRDS)


class TestKaoMerge:
    def test_one_path_already_separates(self):
        g, paths = planted_multipath(30, 2, HALF, 4)
        p1 = directed_path_separator(g, HALF)
        rest = [v for v in paths[0] if v not in p1][:1]
        out = kao_merge_pair(g, p1, rest, HALF) if rest else p1
        assert is_simple_path(g, out) and balanced(g, out, HALF)

    def test_c8(self):
        g = dicycle(8)
        out = kao_merge_pair(g, [0], [4], HALF)
        assert is_simple_path(g, out) and balanced(g, out, HALF)

    @pytest.mark.parametrize("seed", range(20))
    def test_planted_pair(self, seed):
        g, paths = planted_multipath(40, 2, HALF, seed)
        out = kao_merge_pair(g, paths[0], paths[1], HALF)
        assert is_simple_path(g, out) and balanced(g, out, HALF)

    def test_overlapping_rejected(self):
        g = dicycle(6)
        with pytest.raises(GraphError):
            kao_merge_pair(g, [0, 1], [1, 2], HALF)

    def test_non_separator_rejected(self):
        g = Graph.from_edges(6, [(u, v) for u in range(6) for v in range(6) if u != v], directed=True)
        with pytest.raises(GraphError):
            kao_merge_pair(g, [0], [1], HALF)


class TestMergeMultipath:
    def test_single_path_identity(self):
        g, paths = planted_multipath(30, 2, TWO_THIRDS, 1)
        p = directed_path_separator(g, TWO_THIRDS)
        assert merge_multipath(g, [p], TWO_THIRDS) == p

    def test_two_equals_pair(self):
        g, paths = planted_multipath(30, 2, HALF, 2)
        assert merge_multipath(g, paths, HALF) == kao_merge_pair(g, paths[0], paths[1], HALF)

    def test_three_paths_on_grid(self):
        g = grid(6, 6).bidirected()
        paths = [[6 * r + 2 for r in range(6)], [6 * r + 4 for r in range(6)], [0, 1]]
        assert balanced(g, [v for p in paths for v in p], HALF)
        out = merge_multipath(g, paths, HALF)
        assert is_simple_path(g, out) and balanced(g, out, HALF)

    def test_limit(self):
        g = dicycle(40)
        with pytest.raises(GraphError):
            merge_multipath(g, [[v] for v in range(17)], HALF)

    @pytest.mark.parametrize("k", [3, 5])
    @pytest.mark.parametrize("seed", range(10))
    def test_planted(self, k, seed):
        g, paths = planted_multipath(50, k, TWO_THIRDS, seed)
        out = merge_multipath(g, paths, TWO_THIRDS)
        assert is_simple_path(g, out) and balanced(g, out, TWO_THIRDS)


class TestCycleSeparator:
    def test_c4_uniform(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        emb = ensure_outer(g, planar_embed(g))
        w = WeightAssignment({v: Fraction(1, 4) for v in range(4)})
        c = cycle_separator(g, emb, w, mode="exact")
        assert sorted(c) == [0, 1, 2, 3]
        assert side_weights(g, emb, w, c) == (0, 0)

    def test_wheel_heavy_hub(self):
        g = wheel(6)
        emb = ensure_outer(g, planar_embed(g))
        w = WeightAssignment({0: Fraction(1, 2), **{v: Fraction(1, 12) for v in range(1, 7)}})
        c = cycle_separator(g, emb, w)
        i, e = side_weights(g, emb, w, c)
        assert is_simple_cycle(g, c) and i <= TWO_THIRDS and e <= TWO_THIRDS

    def test_octahedron_faces(self):
        eq = [1, 2, 3, 4]
        g = Graph.from_edges(6, [(0, v) for v in eq] + [(5, v) for v in eq]
                             + [(eq[i], eq[(i + 1) % 4]) for i in range(4)])
        emb = ensure_outer(g, planar_embed(g))
        w = WeightAssignment(face={f: Fraction(1, 8) for f in range(8)})
        c = cycle_separator(g, emb, w, mode="exact")
        i, e = side_weights(g, emb, w, c)
        assert i <= TWO_THIRDS and e <= TWO_THIRDS

    def test_heavy_face_rejected(self):
        g = wheel(5)
        emb = ensure_outer(g, planar_embed(g))
        w = WeightAssignment(face={0: Fraction(1)})
        with pytest.raises(GraphError):
            cycle_separator(g, emb, w)

    @pytest.mark.parametrize("mode", ["exact", "heuristic"])
    @pytest.mark.parametrize("seed", range(12))
    def test_agrees_with_enumeration(self, mode, seed):
        g = biconnected_planar(9, seed)
        emb = ensure_outer(g, planar_embed(g))
        w = random_weights(g, emb, seed)
        t = w.total()
        assert exact_cycle_separator_exists(g, lambda c: side_weights(g, emb, w, c), t, TWO_THIRDS)
        c = cycle_separator(g, emb, w, mode=mode)
        i, e = side_weights(g, emb, w, c)
        assert is_simple_cycle(g, c) and 3 * i <= 2 * t and 3 * e <= 2 * t
