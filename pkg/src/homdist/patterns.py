"""Pattern family generation: cycles and free trees.

Free trees are generated by growing every tree of order m into order m+1
by attaching a leaf to each vertex, deduplicating isomorphism classes by
an AHU canonical encoding rooted at the tree center(s). This visits every
isomorphism class because removing a leaf from any tree of order m+1
yields a tree of order m. Member order is fixed by sorting canonically
relabeled graph6 strings, so family files are reproducible byte for byte.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property

from .graphs import Graph, write_graph6

MAX_TREE_ORDER = 12

TREEWIDTH_TREES = 1
TREEWIDTH_CYCLES = 2
TREEWIDTH_UNCLASSIFIED = 0


@dataclass(frozen=True)
class PatternFamily:
    """Ordered list of pattern graphs with generation metadata."""

    kind: str  # "cycles" | "trees" | "custom"
    members: tuple[Graph, ...]
    params: tuple[int, int]  # order range [lo, hi]
    treewidth_class: int

    def __post_init__(self):
        if self.kind not in ("cycles", "trees", "custom"):
            raise ValueError(f"unknown family kind {self.kind!r}")

    def __len__(self) -> int:
        return len(self.members)

    @cached_property
    def checksum(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.kind};{self.params[0]},{self.params[1]};".encode())
        for g in self.members:
            h.update(write_graph6(g).encode())
            h.update(b"\n")
        return h.hexdigest()


def cycle_graph(k: int) -> Graph:
    if k < 3:
        raise ValueError(f"cycle order must be >= 3, got {k}")
    return Graph(k, tuple((i, (i + 1) % k) for i in range(k)))


def path_graph(k: int) -> Graph:
    return Graph(k, tuple((i, i + 1) for i in range(k - 1)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def complete_graph(k: int) -> Graph:
    return Graph(k, tuple((i, j) for i in range(k) for j in range(i + 1, k)))


def disjoint_union(a: Graph, b: Graph) -> Graph:
    shifted = tuple((u + a.n, v + a.n) for u, v in b.edges)
    return Graph(a.n + b.n, a.edges + shifted)


def gen_cycles(lo: int, hi: int) -> PatternFamily:
    """Cycles C_lo .. C_hi with vertices 0..k-1 and edges {i, (i+1) mod k}."""
    if lo < 3:
        raise ValueError(f"cycle order must be >= 3, got lo={lo}")
    if lo > hi:
        raise ValueError(f"empty order range [{lo},{hi}]")
    members = tuple(cycle_graph(k) for k in range(lo, hi + 1))
    return PatternFamily("cycles", members, (lo, hi), TREEWIDTH_CYCLES)


# ---------------------------------------------------------------------------
# free tree enumeration
# ---------------------------------------------------------------------------


def tree_centers(g: Graph) -> list[int]:
    """The 1 or 2 center vertices of a tree, by iterated leaf removal."""
    n = g.n
    if n <= 2:
        return list(range(n))
    deg = list(g.degrees)
    layer = [v for v in range(n) if deg[v] == 1]
    remaining = n
    while remaining > 2:
        nxt = []
        for v in layer:
            deg[v] = 0
            for w in g.adjacency[v]:
                if deg[w] > 1:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        remaining -= len(layer)
        layer = nxt
    return sorted(layer)


def _ahu_rooted(g: Graph, root: int) -> str:
    def rec(v: int, parent: int) -> str:
        subs = sorted(rec(w, v) for w in g.adjacency[v] if w != parent)
        return "(" + "".join(subs) + ")"

    return rec(root, -1)


def ahu_key(g: Graph) -> str:
    """Canonical encoding of a free tree (min over center rootings)."""
    return min(_ahu_rooted(g, c) for c in tree_centers(g))


def _canonical_rooted(g: Graph, root: int) -> Graph:
    enc: dict[tuple[int, int], str] = {}

    def encode(v: int, parent: int) -> str:
        key = (v, parent)
        if key not in enc:
            subs = sorted(encode(w, v) for w in g.adjacency[v] if w != parent)
            enc[key] = "(" + "".join(subs) + ")"
        return enc[key]

    encode(root, -1)
    labels = {}
    edges = []
    counter = 0

    def assign(v: int, parent: int) -> None:
        nonlocal counter
        labels[v] = counter
        counter += 1
        kids = sorted(
            (w for w in g.adjacency[v] if w != parent), key=lambda w: encode(w, v)
        )
        for w in kids:
            edges.append((labels[v], counter))
            assign(w, v)

    assign(root, -1)
    return Graph(g.n, tuple(edges))


def canonical_tree(g: Graph) -> Graph:
    """Canonically labeled copy of a free tree (same graph for isomorphic inputs)."""
    if not g.is_tree():
        raise ValueError("canonical_tree requires a tree")
    best = None
    best_key = None
    for c in tree_centers(g):
        cand = _canonical_rooted(g, c)
        key = write_graph6(cand)
        if best_key is None or key < best_key:
            best, best_key = cand, key
    return best


def gen_trees(order: int) -> PatternFamily:
    """All free trees on `order` vertices, one canonical representative per class."""
    if not 1 <= order <= MAX_TREE_ORDER:
        raise ValueError(f"tree order must be in [1,{MAX_TREE_ORDER}], got {order}")
    level: dict[str, Graph] = {ahu_key(Graph(1)): Graph(1)}
    for m in range(2, order + 1):
        nxt: dict[str, Graph] = {}
        for t in level.values():
            for v in range(t.n):
                grown = Graph(t.n + 1, t.edges + ((v, t.n),))
                key = ahu_key(grown)
                if key not in nxt:
                    nxt[key] = grown
        level = nxt
    members = tuple(
        sorted((canonical_tree(t) for t in level.values()), key=write_graph6)
    )
    return PatternFamily("trees", members, (order, order), TREEWIDTH_TREES)


def gen_trees_range(lo: int, hi: int) -> PatternFamily:
    """Union of gen_trees over an order range (kept in ascending order blocks)."""
    if lo > hi:
        raise ValueError(f"empty order range [{lo},{hi}]")
    members: list[Graph] = []
    for order in range(lo, hi + 1):
        members.extend(gen_trees(order).members)
    return PatternFamily("trees", tuple(members), (lo, hi), TREEWIDTH_TREES)


def custom_family(members: tuple[Graph, ...]) -> PatternFamily:
    orders = [g.n for g in members] or [0]
    return PatternFamily(
        "custom", tuple(members), (min(orders), max(orders)), TREEWIDTH_UNCLASSIFIED
    )
