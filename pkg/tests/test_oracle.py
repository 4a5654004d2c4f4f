import math

import numpy as np
import pytest

from homdist.errors import GuardExceeded
from homdist.graphs import AttributedGraph, Graph, Permutation
from homdist.hom_engine import substream
from homdist.oracle import (
    are_isomorphic_bruteforce,
    distortion_bidirectional_bruteforce,
    distortion_one_sided_bruteforce,
    enumerate_homs_bruteforce,
    iter_homs_bruteforce,
    min_bottleneck_bruteforce,
)
from homdist.patterns import complete_graph, cycle_graph, path_graph, star_graph
from homdist.verify import random_attributed, random_graph, random_hom_connected

K2 = complete_graph(2)
K3 = complete_graph(3)
C3 = cycle_graph(3)
C4 = cycle_graph(4)


class TestEnumeration:
    def test_k2_to_k2(self):
        maps = [h.mapping for h in enumerate_homs_bruteforce(K2, K2)]
        assert maps == [(0, 1), (1, 0)]

    def test_c3_to_k3(self):
        assert len(enumerate_homs_bruteforce(C3, K3)) == 6

    def test_c3_to_c4_empty(self):
        assert enumerate_homs_bruteforce(C3, C4) == []

    def test_lexicographic_order_and_uniqueness(self):
        maps = list(iter_homs_bruteforce(path_graph(3), K3))
        assert maps == sorted(maps)
        assert len(maps) == len(set(maps))

    def test_k2_count_is_twice_edges(self):
        for i in range(25):
            g = random_graph(substream(1, i), 1, 7)
            assert len(enumerate_homs_bruteforce(K2, g)) == 2 * g.m

    def test_closed_walk_identity(self):
        # hom(C_k, G) equals trace(A^k), checked by independent matrix powers
        for i in range(25):
            g = random_graph(substream(2, i), 1, 7)
            a = g.adjacency_matrix.astype(object)
            power = np.linalg.matrix_power(a, 1)
            for k in range(2, 9):
                power = power @ a
                if k >= 3:
                    want = int(np.trace(power))
                    got = len(enumerate_homs_bruteforce(cycle_graph(k), g))
                    assert got == want

    def test_empty_pattern_has_one_hom(self):
        assert [h.mapping for h in enumerate_homs_bruteforce(Graph(0), K3)] == [()]

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            enumerate_homs_bruteforce(Graph(9), K2)


class TestIsomorphism:
    def test_relabelled_c4(self):
        g = C4.permuted(Permutation((2, 0, 3, 1)))
        assert are_isomorphic_bruteforce(C4, g)

    def test_path_vs_star(self):
        assert not are_isomorphic_bruteforce(path_graph(4), star_graph(3))

    def test_k3_is_c3(self):
        assert are_isomorphic_bruteforce(K3, C3)

    def test_invariant_under_permutation(self):
        for i in range(20):
            rng = substream(4, i)
            g = random_graph(rng, 1, 6)
            assert are_isomorphic_bruteforce(g, g.permuted(Permutation.random(g.n, rng)))


class TestBottleneckBruteforce:
    def test_spec_example(self):
        value, witness = min_bottleneck_bruteforce(K2, K2, [[0.3, 0.1], [0.2, 0.4]])
        assert value == 0.2 and witness == (1, 0)

    def test_empty(self):
        value, witness = min_bottleneck_bruteforce(C3, C4, [[0.0] * 4] * 3)
        assert math.isinf(value) and witness is None


class TestDistortionBruteforce:
    def test_self_distance_zero(self):
        for i in range(10):
            g = random_attributed(substream(5, i), 1, 6)
            assert distortion_bidirectional_bruteforce(g, g) == 0.0

    def test_no_hom_gives_infinity(self):
        a = AttributedGraph(C3, np.zeros((3, 1)))
        b = AttributedGraph(C4, np.zeros((4, 1)))
        assert math.isinf(distortion_bidirectional_bruteforce(a, b))

    def test_k2_feature_gap(self):
        a = AttributedGraph(K2, np.array([[0.0], [1.0]]))
        b = AttributedGraph(K2, np.array([[0.0], [0.5]]))
        assert distortion_bidirectional_bruteforce(a, b) == 0.5

    def test_one_sided_is_half_of_bidirectional(self):
        for i in range(15):
            rng = substream(6, i)
            a = random_hom_connected(rng, 3, 5)
            b = random_hom_connected(rng, 3, 5)
            both = distortion_bidirectional_bruteforce(a, b)
            assert both == max(
                distortion_one_sided_bruteforce(a, b),
                distortion_one_sided_bruteforce(b, a),
            )

    def test_dimension_mismatch(self):
        a = AttributedGraph(K2, np.zeros((2, 1)))
        b = AttributedGraph(K2, np.zeros((2, 2)))
        with pytest.raises(ValueError, match="dimension"):
            distortion_bidirectional_bruteforce(a, b)

    def test_pseudo_metric_properties(self):
        tol = 1e-9
        for i in range(40):
            rng = substream(7, i)
            a = random_hom_connected(rng, 3, 5)
            b = random_hom_connected(rng, 3, 5)
            c = random_hom_connected(rng, 3, 5)
            dab = distortion_bidirectional_bruteforce(a, b)
            assert dab >= 0
            assert dab == distortion_bidirectional_bruteforce(b, a)
            dac = distortion_bidirectional_bruteforce(a, c)
            dcb = distortion_bidirectional_bruteforce(c, b)
            assert dab <= dac + dcb + tol

    def test_supremum_norm_bound(self):
        for i in range(40):
            rng = substream(8, i)
            g = random_graph(rng, 1, 6)
            f1 = rng.integers(0, 6, size=(g.n, 2)).astype(float)
            f2 = rng.integers(0, 6, size=(g.n, 2)).astype(float)
            d = distortion_bidirectional_bruteforce(
                AttributedGraph(g, f1), AttributedGraph(g, f2)
            )
            bound = max(
                (float(np.linalg.norm(f1[v] - f2[v])) for v in range(g.n)), default=0.0
            )
            assert d <= bound + 1e-12

    def test_linf_norm_variant(self):
        a = AttributedGraph(K2, np.array([[0.0, 0.0], [3.0, 4.0]]))
        b = AttributedGraph(K2, np.array([[0.0, 0.0], [0.0, 0.0]]))
        assert distortion_bidirectional_bruteforce(a, b, norm="linf") == 4.0
        assert distortion_bidirectional_bruteforce(a, b, norm="l2") == 5.0
