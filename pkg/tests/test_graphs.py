import numpy as np
import pytest

from homdist.errors import Graph6Error
from homdist.graphs import (
    AttributedGraph,
    Graph,
    Permutation,
    apply_permutation,
    from_json,
    parse_graph6,
    to_json,
    write_graph6,
)
from homdist.hom_engine import substream
from homdist.patterns import complete_graph, cycle_graph, path_graph


class TestGraphConstruction:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError, match="self-loop"):
            Graph(3, ((0, 0),))

    def test_rejects_duplicate_edge(self):
        with pytest.raises(ValueError, match="duplicate"):
            Graph(3, ((0, 1), (1, 0)))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            Graph(2, ((0, 2),))

    def test_edges_normalized_and_sorted(self):
        g = Graph(4, ((3, 1), (2, 0)))
        assert g.edges == ((0, 2), (1, 3))

    def test_adjacency_symmetric(self):
        g = Graph(5, ((0, 1), (1, 2), (2, 4)))
        for u in range(g.n):
            for v in g.adjacency[u]:
                assert u in g.adjacency[v]

    def test_edge_count_is_half_degree_sum(self):
        g = Graph(6, ((0, 1), (1, 2), (3, 4), (4, 5), (0, 5)))
        assert sum(g.degrees) == 2 * g.m

    def test_structure_predicates(self):
        assert path_graph(4).is_tree()
        assert not cycle_graph(4).is_tree()
        assert cycle_graph(5).is_cycle()
        assert not path_graph(3).is_cycle()
        assert not Graph(2).is_connected()
        assert Graph(1).is_tree()


class TestGraph6:
    def test_k2(self):
        g = parse_graph6("A_")
        assert g.n == 2 and g.edges == ((0, 1),)

    def test_empty_two_vertices(self):
        g = parse_graph6("A?")
        assert g.n == 2 and g.edges == ()

    def test_single_vertex(self):
        assert parse_graph6("@") == Graph(1)

    def test_write_k2_and_c3(self):
        assert write_graph6(Graph(2, ((0, 1),))) == "A_"
        assert write_graph6(cycle_graph(3)) == "Bw"
        assert write_graph6(Graph(1)) == "@"

    def test_trailing_newline_tolerated(self):
        assert parse_graph6("A_\n") == parse_graph6("A_")

    def test_empty_record(self):
        with pytest.raises(Graph6Error) as err:
            parse_graph6("")
        assert err.value.offset == 0

    def test_long_form_rejected(self):
        with pytest.raises(Graph6Error, match="long-form") as err:
            parse_graph6("~??")
        assert err.value.offset == 0

    def test_malformed_header(self):
        with pytest.raises(Graph6Error, match="header") as err:
            parse_graph6(" A")
        assert err.value.offset == 0

    def test_body_too_short(self):
        with pytest.raises(Graph6Error, match="too short") as err:
            parse_graph6("D")  # n=5 needs 2 body bytes
        assert err.value.offset == 1

    def test_trailing_garbage(self):
        with pytest.raises(Graph6Error, match="trailing garbage") as err:
            parse_graph6("A_X")
        assert err.value.offset == 2

    def test_body_byte_out_of_range(self):
        with pytest.raises(Graph6Error, match="out of range") as err:
            parse_graph6("A ")
        assert err.value.offset == 1

    def test_write_rejects_large_graphs(self):
        with pytest.raises(ValueError, match="n < 63"):
            write_graph6(Graph(63))

    def test_roundtrip_exhaustive_small(self):
        # every graph on up to 5 vertices, bit for bit
        for n in range(6):
            pair_count = n * (n - 1) // 2
            all_pairs = [(i, j) for j in range(n) for i in range(j)]
            for bits in range(1 << pair_count):
                edges = tuple(
                    all_pairs[k] for k in range(pair_count) if (bits >> k) & 1
                )
                g = Graph(n, edges)
                assert parse_graph6(write_graph6(g)) == g

    def test_roundtrip_random_up_to_62(self):
        for i in range(100):
            rng = substream(21, i)
            n = int(rng.integers(0, 63))
            edges = tuple(
                (u, v)
                for u in range(n)
                for v in range(u + 1, n)
                if rng.random() < 0.3
            )
            g = Graph(n, edges)
            assert parse_graph6(write_graph6(g)) == g


class TestPermutation:
    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Permutation((0, 0, 2))

    def test_inverse_roundtrip(self):
        rng = substream(3, "perm")
        for _ in range(20):
            p = Permutation.random(7, rng)
            q = p.inverse()
            assert [q(p(v)) for v in range(7)] == list(range(7))

    def test_identity_keeps_graph(self):
        g = Graph(2, ((0, 1),))
        ag = AttributedGraph(g, np.array([[1.0], [2.0]]))
        out = apply_permutation(ag, Permutation.identity(2))
        assert out.graph == g
        assert np.array_equal(out.features, ag.features)

    def test_path_swap_is_symmetric(self):
        g = path_graph(3)
        assert g.permuted(Permutation((2, 1, 0))) == g

    def test_c4_rotation_moves_rows_and_keeps_edges(self):
        g = cycle_graph(4)
        feats = np.arange(8, dtype=float).reshape(4, 2)
        rot = Permutation((1, 2, 3, 0))
        out = apply_permutation(AttributedGraph(g, feats), rot)
        assert out.graph == g  # C4 is rotation invariant
        for v in range(4):
            assert np.array_equal(out.features[rot(v)], feats[v])

    def test_degree_sequence_invariant(self):
        rng = substream(9, "deg")
        for i in range(20):
            n = int(rng.integers(2, 9))
            edges = tuple(
                (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5
            )
            g = Graph(n, edges)
            p = Permutation.random(n, rng)
            assert sorted(g.permuted(p).degrees) == sorted(g.degrees)

    def test_size_mismatch(self):
        ag = AttributedGraph(Graph(2, ((0, 1),)), np.zeros((2, 1)))
        with pytest.raises(ValueError, match="permutation on"):
            apply_permutation(ag, Permutation.identity(3))

    def test_inverse_permutation_restores_attributed(self):
        rng = substream(10, "inv")
        g = Graph(5, ((0, 1), (1, 2), (2, 3), (3, 4)))
        ag = AttributedGraph(g, rng.random((5, 3)))
        p = Permutation.random(5, rng)
        back = apply_permutation(apply_permutation(ag, p), p.inverse())
        assert back.graph == ag.graph
        assert np.array_equal(back.features, ag.features)


class TestAttributedGraph:
    def test_row_count_must_match(self):
        with pytest.raises(ValueError, match="feature rows"):
            AttributedGraph(Graph(3), np.zeros((2, 4)))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="non-finite"):
            AttributedGraph(Graph(1), np.array([[np.inf]]))

    def test_features_are_read_only_float64(self):
        ag = AttributedGraph(Graph(2, ((0, 1),)), np.array([[1], [2]], dtype=int))
        assert ag.features.dtype == np.float64
        with pytest.raises(ValueError):
            ag.features[0, 0] = 5.0


class TestJsonSchema:
    def test_plain_graph_roundtrip(self):
        g = complete_graph(4)
        assert from_json(to_json(g)) == g

    def test_attributed_roundtrip(self):
        ag = AttributedGraph(path_graph(3), np.array([[0.5, 1.25], [2.0, 3.0], [4.0, 0.1]]))
        back = from_json(to_json(ag))
        assert back.graph == ag.graph
        assert np.array_equal(back.features, ag.features)
