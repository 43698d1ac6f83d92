from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import component_sizes, is_simple_path, to_nx, via_path_exists
from sepdfs.generators import grid, random_digraph
from sepdfs.graph import (Graph, GraphError, bfs_arborescence, block_cut_tree, components_after_removal,
                          is_connected, reachable, scc, vertex_disjoint_via)


def small_graph(n, p, seed, directed=False):
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(n)
             if (u != v if directed else u < v) and rng.random() < p]
    return Graph.from_edges(n, edges, directed=directed)


@st.composite
def graphs(draw, max_n=10, directed=False):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if (u != v if directed else u < v)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen, directed=directed)


class TestGraphType:
    def test_rejects_self_loop(self):
        with pytest.raises(GraphError):
            Graph(2, False, ((1, 1),))

    def test_rejects_parallel_edges(self):
        with pytest.raises(GraphError):
            Graph(2, False, ((0, 1), (1, 0)))

    def test_rejects_bad_endpoint(self):
        with pytest.raises(GraphError):
            Graph(2, False, ((0, 2),))

    def test_undirected_edges_stored_tail_below_head(self):
        g = Graph(3, False, ((2, 0), (1, 2)))
        assert g.edges == ((0, 2), (1, 2))

    def test_subgraph_relabels(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        sub, old = g.subgraph([1, 2, 3])
        assert old == [1, 2, 3]
        assert set(sub.edges) == {(0, 1), (1, 2)}


class TestScc:
    def test_directed_triangle(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2), (2, 0)], directed=True)
        assert scc(g).sizes == [3]

    def test_directed_path_is_singletons(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2)], directed=True)
        assert scc(g).sizes == [1, 1, 1]

    def test_two_cycles_joined_by_one_arc(self):
        g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)], directed=True)
        assert scc(g).components == ((0, 1, 2), (3, 4, 5))

    def test_rejects_undirected(self):
        with pytest.raises(GraphError):
            scc(Graph.from_edges(2, [(0, 1)]))

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_mutual_reachability(self, seed):
        rng = random.Random(seed)
        g = random_digraph(rng.randint(1, 30), rng.choice([0.05, 0.1, 0.2]), seed)
        reach = [reachable(g, v) for v in range(g.n)]
        comps = scc(g)
        for u in range(g.n):
            for v in range(g.n):
                same = v in reach[u] and u in reach[v]
                assert (comps.label[u] == comps.label[v]) == same

    def test_ids_ordered_by_smallest_vertex(self):
        g = Graph.from_edges(4, [(3, 2), (2, 3), (0, 1)], directed=True)
        assert [c[0] for c in scc(g).components] == sorted(c[0] for c in scc(g).components)


class TestComponentsAfterRemoval:
    def test_path_middle(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        assert components_after_removal(g, {1}).components == ((0,), (2,))

    def test_remove_nothing(self):
        assert components_after_removal(grid(3, 3)).sizes == [9]

    def test_grid_middle_column(self):
        g = grid(4, 4)
        col = [r * 4 + 1 for r in range(4)]
        assert sorted(components_after_removal(g, col).sizes) == [4, 8]

    @settings(max_examples=60, deadline=None)
    @given(graphs(), st.data())
    def test_partition_matches_oracle(self, g, data):
        removed = data.draw(st.sets(st.integers(0, g.n - 1)))
        cm = components_after_removal(g, removed)
        flat = [v for c in cm.components for v in c]
        assert sorted(flat) == sorted(set(range(g.n)) - removed)
        assert sorted(cm.sizes, reverse=True) == component_sizes(g, removed)


class TestBfsArborescence:
    def test_star(self):
        g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)], directed=True)
        t = bfs_arborescence(g, 0)
        assert t.children[0] == [1, 2, 3]

    def test_directed_four_cycle(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)], directed=True)
        t = bfs_arborescence(g, 2)
        assert max(t.depth(v) for v in range(4)) == 3

    def test_unreachable_vertex_named(self):
        g = Graph.from_edges(3, [(0, 1)], directed=True)
        with pytest.raises(GraphError, match="2"):
            bfs_arborescence(g, 0)

    @pytest.mark.parametrize("seed", range(10))
    def test_parent_is_least_in_neighbour_on_previous_layer(self, seed):
        import networkx as nx
        g = random_digraph(20, 0.25, seed)
        h = to_nx(g)
        if not nx.is_strongly_connected(h):
            pytest.skip("sample not strongly connected")
        dist = nx.single_source_shortest_path_length(h, 0)
        t = bfs_arborescence(g, 0)
        for v in range(1, g.n):
            best = min(u for u in h.predecessors(v) if dist[u] == dist[v] - 1)
            assert t.parent[v] == best


class TestBlockCutTree:
    def test_triangle(self):
        t = block_cut_tree(Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)]))
        assert len(t.blocks) == 1 and t.articulation == []

    def test_two_triangles_sharing_vertex(self):
        g = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
        t = block_cut_tree(g)
        assert len(t.blocks) == 2 and t.articulation == [2]

    def test_random_tree(self):
        rng = random.Random(3)
        edges = [(v, rng.randrange(v)) for v in range(1, 15)]
        g = Graph.from_edges(15, edges)
        t = block_cut_tree(g)
        assert sorted(sorted(b) for b in t.blocks) == sorted(sorted(e) for e in g.edges)
        internal = {v for v in range(15) if g.degree(v) > 1}
        assert set(t.articulation) == internal

    def test_disconnected_rejected(self):
        with pytest.raises(GraphError):
            block_cut_tree(Graph.from_edges(4, [(0, 1), (2, 3)]))

    @settings(max_examples=60, deadline=None)
    @given(graphs(max_n=9))
    def test_articulation_iff_removal_disconnects(self, g):
        if not is_connected(g) or g.n < 2:
            return
        t = block_cut_tree(g)
        for v in range(g.n):
            assert (v in t.articulation) == (len(components_after_removal(g, {v}).components) >= 2)


class TestVertexDisjointVia:
    def test_triangle(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
        assert vertex_disjoint_via(g, 0, 1, 2) == ([0, 1], [1, 2])

    def test_star_is_absent(self):
        g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        assert vertex_disjoint_via(g, 1, 2, 3) is None

    def test_k4_present(self):
        g = Graph.from_edges(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
        assert vertex_disjoint_via(g, 0, 1, 2) is not None

    def test_terminals_distinct(self):
        with pytest.raises(GraphError):
            vertex_disjoint_via(Graph.from_edges(2, [(0, 1)]), 0, 0, 1)

    @settings(max_examples=120, deadline=None)
    @given(graphs(max_n=9), st.data())
    def test_matches_path_enumeration(self, g, data):
        if g.n < 3:
            return
        a, mid, b = data.draw(st.permutations(range(g.n)))[:3]
        res = vertex_disjoint_via(g, a, mid, b)
        assert (res is not None) == via_path_exists(g, a, mid, b)
        if res is not None:
            p, q = res
            assert p[0] == a and p[-1] == mid and q[0] == mid and q[-1] == b
            assert is_simple_path(g, p[:-1] + q)
