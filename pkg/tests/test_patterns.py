import heapq
from itertools import combinations, product

import pytest

from homdist.graphs import Graph, write_graph6
from homdist.oracle import are_isomorphic_bruteforce
from homdist.patterns import (
    PatternFamily,
    ahu_key,
    canonical_tree,
    custom_family,
    cycle_graph,
    gen_cycles,
    gen_trees,
    gen_trees_range,
    tree_centers,
)

FREE_TREE_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 3, 6: 6, 7: 11, 8: 23, 9: 47, 10: 106, 11: 235, 12: 551}


def tree_from_prufer(seq: tuple[int, ...], n: int) -> Graph:
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
        degree[leaf] -= 1
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return Graph(n, tuple(edges))


def rooted_and_free_tree_counts(n_max: int) -> list[int]:
    """Independent count oracle: rooted-tree recurrence plus Otter's formula."""
    r = [0] * (n_max + 1)
    r[1] = 1
    for n in range(1, n_max):
        total = 0
        for k in range(1, n + 1):
            dsum = sum(d * r[d] for d in range(1, k + 1) if k % d == 0)
            total += dsum * r[n - k + 1]
        assert total % n == 0
        r[n + 1] = total // n
    free = []
    for n in range(1, n_max + 1):
        conv = sum(r[i] * r[n - i] for i in range(1, n))
        middle = r[n // 2] if n % 2 == 0 else 0
        assert (conv - middle) % 2 == 0
        free.append(r[n] - (conv - middle) // 2)
    return free


class TestCycles:
    def test_triangle(self):
        fam = gen_cycles(3, 3)
        assert len(fam.members) == 1
        assert fam.members[0].edges == ((0, 1), (0, 2), (1, 2))

    def test_table_one_footprint(self):
        fam = gen_cycles(3, 8)
        assert [g.n for g in fam.members] == [3, 4, 5, 6, 7, 8]
        assert fam.treewidth_class == 2

    def test_c4_degrees(self):
        fam = gen_cycles(4, 4)
        assert fam.members[0].degrees == (2, 2, 2, 2)

    def test_members_are_cycles(self):
        for g in gen_cycles(3, 10).members:
            assert g.is_cycle() and g.m == g.n

    def test_invalid_ranges(self):
        with pytest.raises(ValueError):
            gen_cycles(2, 5)
        with pytest.raises(ValueError):
            gen_cycles(5, 4)


class TestTrees:
    def test_order_four(self):
        fam = gen_trees(4)
        assert len(fam.members) == 2

    def test_order_eight(self):
        assert len(gen_trees(8).members) == 23

    def test_order_one(self):
        fam = gen_trees(1)
        assert fam.members == (Graph(1),)

    @pytest.mark.parametrize("order,count", sorted(FREE_TREE_COUNTS.items()))
    def test_cardinalities(self, order, count):
        assert len(gen_trees(order).members) == count

    def test_counts_match_generating_function_oracle(self):
        want = rooted_and_free_tree_counts(12)
        got = [len(gen_trees(n).members) for n in range(1, 13)]
        assert got == want

    def test_prufer_cross_oracle_small(self):
        # every labeled tree, deduplicated by canonical encoding
        for n in range(2, 8):
            keys = set()
            for seq in product(range(n), repeat=n - 2):
                keys.add(ahu_key(tree_from_prufer(seq, n)))
            assert len(keys) == FREE_TREE_COUNTS[n]

    def test_members_pairwise_non_isomorphic(self):
        for n in range(1, 8):
            members = gen_trees(n).members
            for a, b in combinations(members, 2):
                assert not are_isomorphic_bruteforce(a, b)

    def test_members_are_trees(self):
        for n in range(1, 10):
            for t in gen_trees(n).members:
                assert t.is_tree()

    def test_deterministic_and_canonically_sorted(self):
        a = [write_graph6(t) for t in gen_trees(7).members]
        b = [write_graph6(t) for t in gen_trees(7).members]
        assert a == b
        assert a == sorted(a)

    def test_members_are_canonical_forms(self):
        for t in gen_trees(6).members:
            assert canonical_tree(t) == t

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            gen_trees(0)
        with pytest.raises(ValueError):
            gen_trees(13)

    def test_range_union(self):
        fam = gen_trees_range(1, 4)
        assert len(fam.members) == 1 + 1 + 1 + 2
        assert fam.params == (1, 4)


class TestCanonicalForm:
    def test_centers_of_path(self):
        assert tree_centers(Graph(5, ((0, 1), (1, 2), (2, 3), (3, 4)))) == [2]
        assert tree_centers(Graph(4, ((0, 1), (1, 2), (2, 3)))) == [1, 2]

    def test_canonical_tree_is_relabeling_invariant(self):
        from homdist.graphs import Permutation
        from homdist.hom_engine import substream

        for i in range(30):
            rng = substream(31, i)
            trees = gen_trees(int(rng.integers(2, 9))).members
            t = trees[int(rng.integers(0, len(trees)))]
            relabeled = t.permuted(Permutation.random(t.n, rng))
            assert canonical_tree(relabeled) == canonical_tree(t)

    def test_ahu_separates_non_isomorphic(self):
        members = gen_trees(7).members
        keys = {ahu_key(t) for t in members}
        assert len(keys) == len(members)


class TestFamilyMetadata:
    def test_checksum_changes_with_members(self):
        assert gen_cycles(3, 5).checksum != gen_cycles(3, 6).checksum

    def test_checksum_stable(self):
        assert gen_trees(5).checksum == gen_trees(5).checksum

    def test_custom_family(self):
        fam = custom_family((cycle_graph(3), Graph(2, ((0, 1),))))
        assert fam.kind == "custom"
        assert fam.params == (2, 3)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            PatternFamily("spasm", (), (1, 1), 0)
