"""Constructed benchmark pairs for the substitute distinguishing suite.

Non-isomorphic pairs come in two flavors: degree-distinct graphs (orders
comparable to the pattern order, moderate density so distance profiles
carry structure) and 2-regular pairs (one long cycle vs a union of two
shorter ones, which no degree- or 1-WL-style invariant separates).
Isomorphic control pairs are random graphs with a random relabeling.
"""

from __future__ import annotations

import os

from homdist.graphs import Graph, Permutation, write_graph6
from homdist.hom_engine import substream
from homdist.patterns import cycle_graph, disjoint_union, path_graph, star_graph


def _random_graph(rng, n: int, p: float) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(n, tuple(edges))


def degree_distinct_pairs(count: int, seed: int) -> list[tuple[Graph, Graph]]:
    pairs = [(path_graph(n), star_graph(n - 1)) for n in range(8, 13)]
    rng = substream(seed, "degree_distinct")
    while len(pairs) < count:
        n = int(rng.integers(8, 13))
        p = 0.25 + 0.2 * float(rng.random())
        g, h = _random_graph(rng, n, p), _random_graph(rng, n, p)
        if sorted(g.degrees) != sorted(h.degrees):
            pairs.append((g, h))
    return pairs[:count]


def cfi_style_pairs(count: int) -> list[tuple[Graph, Graph]]:
    """(C_{a+b}, C_a + C_b): same order, 2-regular, never isomorphic."""
    pairs = []
    for total in range(6, 64):
        for a in range(3, total // 2 + 1):
            b = total - a
            if b < 3 or b < a:
                continue
            pairs.append(
                (cycle_graph(total), disjoint_union(cycle_graph(a), cycle_graph(b)))
            )
            if len(pairs) == count:
                return pairs
    raise ValueError(f"cannot build {count} pairs")


def isomorphic_pairs(count: int, seed: int) -> list[tuple[Graph, Graph]]:
    rng = substream(seed, "isomorphic")
    out = []
    for _ in range(count):
        g = _random_graph(rng, int(rng.integers(5, 13)), 0.4)
        out.append((g, g.permuted(Permutation.random(g.n, rng))))
    return out


def substitute_categories() -> dict[str, list[tuple[Graph, Graph]]]:
    """The 50 + 50 pair layout used when the public benchmark is absent."""
    return {
        "noniso": degree_distinct_pairs(25, seed=11) + cfi_style_pairs(25),
        "iso": isomorphic_pairs(50, seed=12),
    }


def write_brec_layout(dirpath: str, categories: dict[str, list[tuple[Graph, Graph]]]) -> None:
    """Write per-category .g6 files with consecutive-pair records."""
    os.makedirs(dirpath, exist_ok=True)
    for name, pairs in categories.items():
        lines = []
        for a, b in pairs:
            lines.append(write_graph6(a))
            lines.append(write_graph6(b))
        with open(os.path.join(dirpath, name + ".g6"), "w") as fh:
            fh.write("\n".join(lines) + "\n")
