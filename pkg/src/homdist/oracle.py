"""Brute-force reference implementations.

Everything here favors obviousness over speed and is guarded to small
inputs. The fast paths in hom_engine and distortion are tested against
these functions; keep them free of shared machinery so the two routes
stay independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, Optional

from .errors import GuardExceeded
from .graphs import AttributedGraph, Graph

# Worst case host_n ** pattern_n = 8**8 ~ 1.7e7 candidate maps per call.
GUARD_N = 8


@dataclass(frozen=True)
class Homomorphism:
    """Total adjacency-preserving map from pattern vertices into a host."""

    pattern_n: int
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != self.pattern_n:
            raise ValueError("mapping length does not match pattern order")

    def is_valid(self, pattern: Graph, host: Graph) -> bool:
        return all(host.has_edge(self.mapping[u], self.mapping[v]) for u, v in pattern.edges)


def _check_guard(*graphs: Graph) -> None:
    for g in graphs:
        if g.n > GUARD_N:
            raise GuardExceeded(f"brute force guard: n={g.n} exceeds {GUARD_N}")


def iter_homs_bruteforce(pattern: Graph, host: Graph) -> Iterator[tuple[int, ...]]:
    """Yield every homomorphism pattern -> host, in lexicographic map order."""
    _check_guard(pattern, host)
    p, h = pattern.n, host.n
    if p == 0:
        yield ()
        return
    if h == 0:
        return
    earlier = [tuple(w for w in pattern.adjacency[u] if w < u) for u in range(p)]
    partial = [0] * p

    def rec(u: int) -> Iterator[tuple[int, ...]]:
        for w in range(h):
            ok = True
            for j in earlier[u]:
                if not host.has_edge(partial[j], w):
                    ok = False
                    break
            if not ok:
                continue
            partial[u] = w
            if u + 1 == p:
                yield tuple(partial)
            else:
                yield from rec(u + 1)

    yield from rec(0)


def enumerate_homs_bruteforce(pattern: Graph, host: Graph) -> list[Homomorphism]:
    return [Homomorphism(pattern.n, m) for m in iter_homs_bruteforce(pattern, host)]


def are_isomorphic_bruteforce(g1: Graph, g2: Graph) -> bool:
    """Isomorphism test by exhaustive vertex bijection."""
    _check_guard(g1, g2)
    if g1.n != g2.n or g1.m != g2.m:
        return False
    target = g2.edge_set
    for perm in permutations(range(g1.n)):
        ok = True
        for u, v in g1.edges:
            a, b = perm[u], perm[v]
            if (a, b) not in target and (b, a) not in target:
                ok = False
                break
        if ok:
            return True
    return False


def min_bottleneck_bruteforce(
    pattern: Graph, host: Graph, cost: "list[list[float]]"
) -> tuple[float, Optional[tuple[int, ...]]]:
    """Min over all homomorphisms of the max per-vertex cost, by enumeration.

    Returns (+inf, None) when no homomorphism exists. Ties keep the
    lexicographically smallest map (first in enumeration order).
    """
    best = math.inf
    witness = None
    for mapping in iter_homs_bruteforce(pattern, host):
        worst = 0.0
        for u, w in enumerate(mapping):
            c = cost[u][w]
            if c > worst:
                worst = c
        if worst < best:
            best = worst
            witness = mapping
    return best, witness


def _vertex_gap(fu, fv, norm: str) -> float:
    if norm == "linf":
        return max((abs(a - b) for a, b in zip(fu, fv)), default=0.0)
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(fu, fv)))


def _map_distance(mapping, pat_rows, host_rows, norm: str) -> float:
    best = 0.0
    for u, w in enumerate(mapping):
        gap = _vertex_gap(pat_rows[u], host_rows[w], norm)
        if gap > best:
            best = gap
    return best


def distortion_one_sided_bruteforce(
    pattern: AttributedGraph, host: AttributedGraph, norm: str = "l2"
) -> float:
    """inf over Hom(pattern -> host) of the max per-vertex feature gap."""
    if pattern.dim != host.dim:
        raise ValueError(f"feature dimension mismatch: {pattern.dim} vs {host.dim}")
    pat_rows = pattern.features.tolist()
    host_rows = host.features.tolist()
    best = math.inf
    for mapping in iter_homs_bruteforce(pattern.graph, host.graph):
        d = _map_distance(mapping, pat_rows, host_rows, norm)
        if d < best:
            best = d
            if best == 0.0:
                break
    return best


def distortion_bidirectional_bruteforce(
    g: AttributedGraph, h: AttributedGraph, norm: str = "l2"
) -> float:
    """The full two-direction distortion; +inf when either hom set is empty."""
    return max(
        distortion_one_sided_bruteforce(g, h, norm),
        distortion_one_sided_bruteforce(h, g, norm),
    )
