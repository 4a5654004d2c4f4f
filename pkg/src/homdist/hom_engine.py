"""Homomorphism algorithms: counting, min-bottleneck search, and sampling.

Counting and bottleneck optimization from tree and cycle patterns run as
dynamic programs over the host (polynomial; the host may be large).
General patterns fall back to branch-and-bound backtracking guarded by a
node budget, which raises instead of returning a possibly-wrong answer.

Counting uses Python integers throughout: hom counts overflow 64 bits
already for modest hosts.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import BudgetExceeded, GuardExceeded
from .graphs import AttributedGraph, Graph
from .oracle import Homomorphism

DEFAULT_NODE_BUDGET = 100_000_000
MAX_GENERAL_PATTERN = 12

SeedLike = Union[int, np.random.Generator]


def substream(seed: int, *ids) -> np.random.Generator:
    """Independent reproducible RNG stream for (seed, ids).

    Counter-based (Philox) and keyed by a hash, so parallel workers can
    derive disjoint streams from the same run seed.
    """
    material = repr((int(seed),) + tuple(ids)).encode()
    key = int.from_bytes(hashlib.sha256(material).digest()[:16], "little")
    return np.random.Generator(np.random.Philox(key=key))


def _as_generator(seed: SeedLike, *ids) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return substream(seed, *ids)


@dataclass(frozen=True)
class CostMatrix:
    """Per-(pattern vertex, host vertex) assignment costs."""

    entries: np.ndarray
    norm_kind: str = "l2"

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.float64)
        if e.ndim != 2:
            raise ValueError("cost matrix must be 2-D")
        if e.size and (not np.isfinite(e).all() or (e < 0).any()):
            raise ValueError("cost entries must be finite and non-negative")
        e = e.copy()
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


def cost_matrix(pattern: AttributedGraph, host: AttributedGraph, norm: str = "l2") -> CostMatrix:
    """cost[u][v] = norm of (pattern feature row u - host feature row v)."""
    if pattern.dim != host.dim:
        raise ValueError(f"feature dimension mismatch: {pattern.dim} vs {host.dim}")
    diff = pattern.features[:, None, :] - host.features[None, :, :]
    if norm == "linf":
        entries = np.abs(diff).max(axis=2)
    elif norm == "l2":
        entries = np.sqrt((diff * diff).sum(axis=2))
    else:
        raise ValueError(f"unknown norm {norm!r}")
    return CostMatrix(entries, norm)


@dataclass(frozen=True)
class HomSample:
    """Sampled homomorphisms plus how they were proposed."""

    maps: tuple[Homomorphism, ...]
    seed: int
    proposal: str  # "tree_dp" | "cycle_dp" | "restart_backtrack"
    hom_empty: bool = False


# ---------------------------------------------------------------------------
# rooting / ring helpers
# ---------------------------------------------------------------------------


def _root_tree(g: Graph) -> tuple[list[int], list[list[int]], list[int]]:
    """BFS order from vertex 0, children lists, and parent array."""
    parent = [-2] * g.n
    parent[0] = -1
    order = [0]
    for v in order:
        for w in g.adjacency[v]:
            if parent[w] == -2:
                parent[w] = v
                order.append(w)
    children: list[list[int]] = [[] for _ in range(g.n)]
    for v in order[1:]:
        children[parent[v]].append(v)
    return order, children, parent


def _cycle_order(g: Graph) -> list[int]:
    """Vertices of a cycle graph in ring order, starting at 0."""
    ring = [0]
    prev, cur = -1, 0
    for _ in range(g.n - 1):
        a, b = g.adjacency[cur]
        nxt = a if a != prev else b
        ring.append(nxt)
        prev, cur = cur, nxt
    return ring


def _neighbor_min(host: Graph, vec: np.ndarray) -> np.ndarray:
    """out[v] = min over neighbors w of v of vec[w]; +inf for isolated v."""
    flat, offsets = host.csr
    out = np.full(host.n, np.inf)
    if flat.size:
        nonempty = np.diff(offsets) > 0
        out[nonempty] = np.minimum.reduceat(vec[flat], offsets[:-1][nonempty])
    return out


def _neighbor_min_rows(host: Graph, mat: np.ndarray) -> np.ndarray:
    flat, offsets = host.csr
    out = np.full(mat.shape, np.inf)
    if flat.size:
        nonempty = np.diff(offsets) > 0
        out[:, nonempty] = np.minimum.reduceat(mat[:, flat], offsets[:-1][nonempty], axis=1)
    return out


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------


def count_homs_tree(pattern: Graph, host: Graph) -> int:
    """Exact hom count from a tree pattern via the rooted product-sum DP."""
    if not pattern.is_tree():
        raise ValueError("pattern is not a tree")
    if host.n == 0:
        return 0
    order, children, _ = _root_tree(pattern)
    adj = host.adjacency
    cnt: dict[int, list[int]] = {}
    for u in reversed(order):
        acc = [1] * host.n
        for child in children[u]:
            child_cnt = cnt.pop(child)
            for v in range(host.n):
                s = 0
                for w in adj[v]:
                    s += child_cnt[w]
                acc[v] *= s
        cnt[u] = acc
    return sum(cnt[order[0]])


def count_homs_cycle(k: int, host: Graph) -> int:
    """Hom count from the k-cycle = number of closed k-walks in the host.

    Computed by per-start walk DP (no eigensolve), exact in big integers.
    """
    if k < 3:
        raise ValueError(f"cycle order must be >= 3, got {k}")
    n = host.n
    adj = host.adjacency
    total = 0
    for a in range(n):
        if not adj[a]:
            continue
        vec = [0] * n
        vec[a] = 1
        for _ in range(k):
            vec = [sum(vec[w] for w in adj[v]) for v in range(n)]
        total += vec[a]
    return total


# ---------------------------------------------------------------------------
# min-bottleneck homomorphism
# ---------------------------------------------------------------------------


def _tree_bottleneck_value(pattern: Graph, host: Graph, entries: np.ndarray) -> float:
    order, children, _ = _root_tree(pattern)
    bot: dict[int, np.ndarray] = {}
    for u in reversed(order):
        b = entries[u].copy()
        for child in children[u]:
            b = np.maximum(b, _neighbor_min(host, bot.pop(child)))
        bot[u] = b
    return float(bot[order[0]].min())


def _cycle_bottleneck_value(pattern: Graph, host: Graph, entries: np.ndarray) -> float:
    ring = _cycle_order(pattern)
    k = len(ring)
    mask = host.adjacency_matrix.astype(bool)
    c0 = entries[ring[0]]
    c1 = entries[ring[1]]
    d = np.where(mask, np.maximum(c0[:, None], c1[None, :]), np.inf)
    for t in range(2, k):
        d = np.maximum(entries[ring[t]][None, :], _neighbor_min_rows(host, d))
    return float(np.where(mask, d, np.inf).min())


def _lex_first_hom_within(
    pattern: Graph, host: Graph, cost_rows: list[list[float]], bound: float, budget: int
) -> Optional[tuple[int, ...]]:
    """First hom in lex map order whose max cost does not exceed bound."""
    p, h = pattern.n, host.n
    earlier = [tuple(w for w in pattern.adjacency[u] if w < u) for u in range(p)]
    has_edge = host.has_edge
    partial = [0] * p
    nodes = 0

    def rec(u: int) -> Optional[tuple[int, ...]]:
        nonlocal nodes
        row = cost_rows[u]
        for w in range(h):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"witness search exceeded {budget} nodes")
            if row[w] > bound:
                continue
            ok = True
            for j in earlier[u]:
                if not has_edge(partial[j], w):
                    ok = False
                    break
            if not ok:
                continue
            partial[u] = w
            if u + 1 == p:
                return tuple(partial)
            found = rec(u + 1)
            if found is not None:
                return found
        return None

    return rec(0)


def _branch_and_bound(
    pattern: Graph, host: Graph, cost_rows: list[list[float]], budget: int
) -> tuple[float, Optional[tuple[int, ...]]]:
    """Exact min bottleneck by DFS in lex order, pruning at the incumbent.

    Because complete maps are visited in lexicographic order and only
    strictly better values replace the incumbent, the returned witness is
    the lex-smallest optimal map.
    """
    p, h = pattern.n, host.n
    earlier = [tuple(w for w in pattern.adjacency[u] if w < u) for u in range(p)]
    has_edge = host.has_edge
    best = math.inf
    best_map: Optional[tuple[int, ...]] = None
    partial = [0] * p
    nodes = 0

    def rec(u: int, running: float) -> None:
        nonlocal best, best_map, nodes
        row = cost_rows[u]
        for w in range(h):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"backtracking exceeded {budget} nodes")
            c = row[w]
            worst = c if c > running else running
            if worst >= best:
                continue
            ok = True
            for j in earlier[u]:
                if not has_edge(partial[j], w):
                    ok = False
                    break
            if not ok:
                continue
            partial[u] = w
            if u + 1 == p:
                best = worst
                best_map = tuple(partial)
            else:
                rec(u + 1, worst)

    rec(0, 0.0)
    return best, best_map


def min_bottleneck_hom(
    pattern: Graph,
    host: Graph,
    cost: CostMatrix,
    want_witness: bool = True,
    budget: int = DEFAULT_NODE_BUDGET,
) -> tuple[float, Optional[Homomorphism]]:
    """Minimize the max assignment cost over all homomorphisms pattern -> host.

    Returns (value, witness); (+inf, None) when no homomorphism exists.
    Ties are broken toward the lexicographically smallest witness map.
    """
    if cost.shape != (pattern.n, host.n):
        raise ValueError(
            f"cost shape {cost.shape} does not match ({pattern.n},{host.n})"
        )
    if pattern.n == 0:
        return 0.0, Homomorphism(0, ())
    if host.n == 0:
        return math.inf, None
    entries = cost.entries
    if pattern.is_tree():
        value = _tree_bottleneck_value(pattern, host, entries)
    elif pattern.is_cycle():
        value = _cycle_bottleneck_value(pattern, host, entries)
    elif pattern.n <= MAX_GENERAL_PATTERN:
        value, mapping = _branch_and_bound(pattern, host, entries.tolist(), budget)
        if mapping is None:
            return math.inf, None
        return value, Homomorphism(pattern.n, mapping)
    else:
        raise GuardExceeded(
            f"pattern order {pattern.n} exceeds general backtracking guard "
            f"{MAX_GENERAL_PATTERN} (and is neither a tree nor a cycle)"
        )
    if not math.isfinite(value):
        return math.inf, None
    if not want_witness:
        return value, None
    mapping = _lex_first_hom_within(pattern, host, entries.tolist(), value, budget)
    if mapping is None:  # cannot happen: value was attained by some hom
        raise RuntimeError("bottleneck witness search failed to reproduce DP value")
    return value, Homomorphism(pattern.n, mapping)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def _bigint_uniform(rng: np.random.Generator, n: int) -> int:
    """Uniform integer in [0, n) for arbitrary-precision n."""
    bits = n.bit_length()
    words = (bits + 31) // 32
    while True:
        r = 0
        for _ in range(words):
            r = (r << 32) | int(rng.integers(0, 1 << 32))
        r >>= words * 32 - bits
        if r < n:
            return r


def _weighted_pick(rng: np.random.Generator, weights: list[int]) -> int:
    total = sum(weights)
    r = _bigint_uniform(rng, total)
    acc = 0
    for i, w in enumerate(weights):
        acc += w
        if r < acc:
            return i
    raise AssertionError("unreachable")


def _sample_tree_homs(
    pattern: Graph, host: Graph, count: int, rng: np.random.Generator
) -> list[tuple[int, ...]]:
    """Exactly uniform draws via count-weighted top-down sampling."""
    order, children, parent = _root_tree(pattern)
    adj = host.adjacency
    cnt: dict[int, list[int]] = {}
    for u in reversed(order):
        acc = [1] * host.n
        for child in children[u]:
            child_cnt = cnt[child]
            for v in range(host.n):
                acc[v] *= sum(child_cnt[w] for w in adj[v])
        cnt[u] = acc
    root = order[0]
    total = sum(cnt[root])
    if total == 0:
        return []
    maps = []
    for _ in range(count):
        m = [0] * pattern.n
        m[root] = _weighted_pick(rng, cnt[root])
        for u in order[1:]:
            anchor = m[parent[u]]
            choices = adj[anchor]
            idx = _weighted_pick(rng, [cnt[u][w] for w in choices])
            m[u] = choices[idx]
        maps.append(tuple(m))
    return maps


def _sample_cycle_homs(
    pattern: Graph, host: Graph, count: int, rng: np.random.Generator
) -> list[tuple[int, ...]]:
    """Uniform draws: anchor weighted by its closed-walk count, walk sampled backward."""
    ring = _cycle_order(pattern)
    k = len(ring)
    n = host.n
    adj = host.adjacency
    tables: dict[int, list[list[int]]] = {}

    def walk_table(a: int) -> list[list[int]]:
        if a not in tables:
            w = [[0] * n for _ in range(k)]
            w[0][a] = 1
            for t in range(1, k):
                prev = w[t - 1]
                w[t] = [sum(prev[x] for x in adj[v]) for v in range(n)]
            tables[a] = w
        return tables[a]

    closed = []
    for a in range(n):
        if adj[a]:
            w = walk_table(a)
            closed.append(sum(w[k - 1][v] for v in adj[a]))
        else:
            closed.append(0)
    total = sum(closed)
    if total == 0:
        return []
    maps = []
    for _ in range(count):
        a = _weighted_pick(rng, closed)
        w = walk_table(a)
        pos = [0] * k
        pos[0] = a
        cur = a  # walk backward from the closing edge
        for t in range(k - 1, 0, -1):
            choices = adj[cur]
            idx = _weighted_pick(rng, [w[t][v] for v in choices])
            cur = choices[idx]
            pos[t] = cur
        m = [0] * pattern.n
        for i, v in enumerate(ring):
            m[v] = pos[i]
        maps.append(tuple(m))
    return maps


def _random_expansion_order(pattern: Graph, rng: np.random.Generator) -> list[int]:
    """Random vertex order that keeps each new vertex adjacent to a chosen one."""
    n = pattern.n
    visited = [False] * n
    order: list[int] = []
    for comp_root in range(n):
        if visited[comp_root]:
            continue
        comp = []
        stack = [comp_root]
        seen = {comp_root}
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in pattern.adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        start = comp[int(rng.integers(0, len(comp)))]
        order.append(start)
        visited[start] = True
        frontier = {w for w in pattern.adjacency[start] if not visited[w]}
        while frontier:
            pool = sorted(frontier)
            pick = pool[int(rng.integers(0, len(pool)))]
            frontier.discard(pick)
            order.append(pick)
            visited[pick] = True
            for w in pattern.adjacency[pick]:
                if not visited[w]:
                    frontier.add(w)
    return order


def _sample_general_homs(
    pattern: Graph, host: Graph, count: int, rng: np.random.Generator, budget: int
) -> tuple[list[tuple[int, ...]], bool]:
    """Random-restart backtracking; every homomorphism has positive probability.

    The distribution is not uniform. Exhausting the search space in a
    restart proves Hom is empty (the DFS is complete).
    """
    p, h = pattern.n, host.n
    has_edge = host.has_edge
    nodes = 0
    maps: list[tuple[int, ...]] = []
    for _ in range(count):
        order = _random_expansion_order(pattern, rng)
        position = {v: i for i, v in enumerate(order)}
        earlier = [
            tuple(w for w in pattern.adjacency[v] if position[w] < i)
            for i, v in enumerate(order)
        ]
        assignment = [0] * p
        candidates = [
            [int(x) for x in rng.permutation(h)] for _ in range(p)
        ]

        def rec(i: int) -> bool:
            nonlocal nodes
            v = order[i]
            for w in candidates[i]:
                nodes += 1
                if nodes > budget:
                    raise BudgetExceeded(f"hom sampling exceeded {budget} nodes")
                ok = True
                for x in earlier[i]:
                    if not has_edge(assignment[x], w):
                        ok = False
                        break
                if not ok:
                    continue
                assignment[v] = w
                if i + 1 == p or rec(i + 1):
                    return True
            return False

        if rec(0):
            maps.append(tuple(assignment))
        else:
            return [], True  # complete search found nothing: Hom is empty
    return maps, False


def sample_homs(
    pattern: Graph,
    host: Graph,
    count: int,
    seed: int,
    budget: int = DEFAULT_NODE_BUDGET,
) -> HomSample:
    """Draw `count` homomorphisms pattern -> host (repetition allowed).

    Trees and cycles are sampled exactly uniformly from the counting DPs.
    Other patterns use randomized-restart backtracking, which is not
    uniform but gives every homomorphism positive probability.
    """
    if count < 1:
        raise ValueError(f"sample count must be >= 1, got {count}")
    rng = substream(seed, "sample_homs")
    if pattern.n == 0:
        return HomSample(tuple(Homomorphism(0, ()) for _ in range(count)), seed, "tree_dp")
    if host.n == 0:
        return HomSample((), seed, "restart_backtrack", hom_empty=True)
    if pattern.is_tree():
        raw = _sample_tree_homs(pattern, host, count, rng)
        proposal = "tree_dp"
        empty = not raw
    elif pattern.is_cycle():
        raw = _sample_cycle_homs(pattern, host, count, rng)
        proposal = "cycle_dp"
        empty = not raw
    else:
        raw, empty = _sample_general_homs(pattern, host, count, rng, budget)
        proposal = "restart_backtrack"
    maps = tuple(Homomorphism(pattern.n, m) for m in raw)
    for hom in maps:
        if not hom.is_valid(pattern, host):
            raise RuntimeError(f"sampler produced an invalid map {hom.mapping}")
    return HomSample(maps, seed, proposal, hom_empty=empty)


def sample_pattern(n_max: int, seed: SeedLike) -> Graph:
    """One random graph: order uniform in [1, n_max], then each edge with prob 1/2.

    Every isomorphism class on at most n_max vertices has positive
    probability under this distribution.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    rng = _as_generator(seed, "sample_pattern")
    m = int(rng.integers(1, n_max + 1))
    edges = [
        (i, j) for i in range(m) for j in range(i + 1, m) if rng.random() < 0.5
    ]
    return Graph(m, tuple(edges))
