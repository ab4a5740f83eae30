import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twcert.errors import GraphMismatchError, NotACycle
from twcert.generators import make_grid, make_wheel
from twcert.graph import (
    Cycle,
    EdgeSet,
    Graph,
    VertexSet,
    as_cycle,
    components,
    decompose_in_span,
    f2_sum,
    subdivide_edges,
    unit_distances,
)

from corpus import random_connected_graph

K6 = Graph(6, itertools.combinations(range(6), 2))
edge_sets = st.integers(min_value=0, max_value=(1 << K6.edge_count) - 1).map(lambda b: EdgeSet(K6, b))


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.vertex_count))
    h.add_edges_from(g.edges)
    return h


class TestGraph:
    def test_rejects_loops_and_parallel_edges(self):
        with pytest.raises(ValueError, match="loop"):
            Graph(3, [(1, 1)])
        with pytest.raises(ValueError, match="parallel"):
            Graph(3, [(0, 1), (1, 0)])
        with pytest.raises(ValueError):
            Graph(2, [(0, 2)])

    def test_edge_ids_follow_input_order(self):
        g = Graph(4, [(2, 3), (1, 0), (0, 2)])
        assert g.edges == ((2, 3), (0, 1), (0, 2))
        assert g.edge_id(1, 0) == 1
        assert g.neighbors(0) == [1, 2]

    def test_bitsets_are_immutable(self):
        s = EdgeSet(K6, 3)
        with pytest.raises(AttributeError):
            s.bits = 4


class TestF2Sum:
    def test_self_inverse(self):
        d = Cycle.from_vertices(K6, [0, 1, 2])
        assert not f2_sum([d.edges, d.edges])

    def test_grid_faces_sum_to_outer_cycle(self):
        grid = make_grid(3)
        total = f2_sum([f.edges for f in grid.faces])
        assert total == grid.outer.edges
        assert len(total) == 8

    def test_wheel_triangles_sum_to_rim(self):
        wheel = make_wheel(5)
        assert f2_sum([t.edges for t in wheel.triangles]) == wheel.rim.edges

    def test_graph_mismatch(self):
        other = Graph(6, itertools.combinations(range(6), 2))
        small = Graph(3, [(0, 1)])
        with pytest.raises(GraphMismatchError):
            f2_sum([EdgeSet(K6, 1), EdgeSet(small, 1)])
        # structurally equal graphs are interchangeable
        assert f2_sum([EdgeSet(K6, 1), EdgeSet(other, 1)]).bits == 0

    def test_empty_input_needs_graph(self):
        assert not f2_sum([], K6)
        with pytest.raises(ValueError):
            f2_sum([])

    @given(edge_sets, edge_sets, edge_sets)
    def test_group_laws(self, a, b, c):
        assert f2_sum([a, b]) == f2_sum([b, a])
        assert (a ^ b) ^ c == a ^ (b ^ c)
        assert not f2_sum([a, a])


class TestAsCycle:
    def test_triangle_in_k4(self):
        k4 = Graph(4, itertools.combinations(range(4), 2))
        c = as_cycle(k4, EdgeSet.from_walk(k4, [0, 1, 2]))
        assert len(c) == 3
        assert c.vertices == (0, 1, 2)

    def test_two_disjoint_triangles(self):
        g = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        with pytest.raises(NotACycle) as info:
            as_cycle(g, EdgeSet(g, (1 << 6) - 1))
        assert info.value.reason == "disconnected"

    def test_path_is_rejected(self):
        g = Graph(3, [(0, 1), (1, 2)])
        with pytest.raises(NotACycle) as info:
            as_cycle(g, EdgeSet(g, 0b11))
        assert info.value.reason == "degree"

    def test_empty_is_rejected(self):
        with pytest.raises(NotACycle) as info:
            as_cycle(K6, EdgeSet(K6))
        assert info.value.reason == "empty"

    def test_vertex_order_is_canonical(self):
        c1 = Cycle.from_vertices(K6, [3, 5, 1, 4])
        c2 = Cycle.from_vertices(K6, [4, 1, 5, 3])
        assert c1 == c2
        assert c1.vertices == (1, 4, 3, 5)

    @given(edge_sets)
    def test_accepted_cycles_traverse_their_edges(self, s):
        try:
            c = as_cycle(K6, s)
        except NotACycle:
            return
        assert len(c.vertices) == len(s)
        assert EdgeSet.from_walk(K6, c.vertices) == s
        assert sorted(c.edge_ids()) == sorted(s)


class TestDecomposeInSpan:
    def test_grid_outer_cycle(self):
        grid = make_grid(3)
        assert decompose_in_span(grid.outer.edges, [f.edges for f in grid.faces]) == [0, 1, 2, 3]

    def test_empty_target(self):
        grid = make_grid(3)
        assert decompose_in_span(EdgeSet(grid.graph), [f.edges for f in grid.faces]) == []

    def test_empty_span(self):
        g = Graph(8, [(i, (i + 1) % 8) for i in range(8)])
        assert decompose_in_span(EdgeSet(g, (1 << 8) - 1), []) is None

    def test_dependent_generators(self):
        grid = make_grid(3)
        gens = [f.edges for f in grid.faces] + [grid.outer.edges]
        chosen = decompose_in_span(grid.outer.edges, gens)
        assert f2_sum([gens[i] for i in chosen]) == grid.outer.edges

    @settings(max_examples=60)
    @given(st.lists(edge_sets, max_size=6), edge_sets)
    def test_result_resums(self, gens, target):
        chosen = decompose_in_span(target, gens)
        if chosen is None:
            # independent check: target is outside the span of all 2^k subsets
            for r in range(len(gens) + 1):
                for combo in itertools.combinations(gens, r):
                    assert f2_sum(list(combo), K6) != target
        else:
            assert f2_sum([gens[i] for i in chosen], K6) == target


class TestComponents:
    def test_grid_minus_center(self):
        grid = make_grid(3)
        parts = components(grid.graph, VertexSet.from_ids(grid.graph, [grid.vertex(2, 2)]))
        assert len(parts) == 1 and len(parts[0]) == 8

    def test_path_minus_middle(self):
        g = Graph(3, [(0, 1), (1, 2)])
        parts = components(g, VertexSet.from_ids(g, [1]))
        assert [sorted(p) for p in parts] == [[0], [2]]

    def test_everything_removed(self):
        assert components(K6, VertexSet(K6, (1 << 6) - 1)) == []

    @settings(max_examples=50)
    @given(st.integers(0, 10**6), st.integers(0, 2**10 - 1))
    def test_partition_matches_networkx(self, seed, removed_bits):
        g = random_connected_graph(random.Random(seed), 10, 0.15)
        removed = VertexSet(g, removed_bits)
        parts = components(g, removed)
        h = to_nx(g)
        h.remove_nodes_from(list(removed))
        assert sorted(sorted(p) for p in parts) == sorted(sorted(c) for c in nx.connected_components(h))
        where = {v: i for i, p in enumerate(parts) for v in p}
        assert all(where[u] == where[v] for u, v in g.edges if u in where and v in where)


def test_unit_distances_match_networkx():
    rng = random.Random(7)
    for _ in range(20):
        g = random_connected_graph(rng, 9, 0.2)
        expected = nx.single_source_shortest_path_length(to_nx(g), 0)
        assert unit_distances(g, [0]) == [expected[v] for v in range(g.vertex_count)]


class TestSubdivideEdges:
    def test_identity(self):
        sub = subdivide_edges(K6, [1] * K6.edge_count)
        assert sub.graph == K6

    def test_triangle_doubled_is_hexagon(self):
        tri = Graph(3, [(0, 1), (1, 2), (0, 2)])
        sub = subdivide_edges(tri, [2, 2, 2])
        assert sub.graph.vertex_count == 6
        c = as_cycle(sub.graph, EdgeSet(sub.graph, (1 << 6) - 1))
        assert len(c) == 6

    def test_vertex_growth(self):
        counts = [1, 3, 2, 1, 4, 1, 1, 2, 1, 1, 1, 1, 5, 1, 1]
        sub = subdivide_edges(K6, counts)
        assert sub.graph.vertex_count == 6 + sum(k - 1 for k in counts)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            subdivide_edges(K6, [0] + [1] * 14)
