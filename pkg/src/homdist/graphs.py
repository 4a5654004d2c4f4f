"""Core graph types, permutations, and the graph6 text codec.

Vertices are dense 0-based integers. Only simple undirected graphs are
supported: self-loops and duplicate edges are rejected at construction.
All types are immutable after construction; operations are pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Union

import numpy as np

from .errors import Graph6Error

if TYPE_CHECKING:
    from .features import FeatureConfig

# Short-form graph6 header only; records with n >= 63 are rejected.
GRAPH6_MAX_N = 62


def _normalize_edges(n: int, edges: Iterable) -> tuple[tuple[int, int], ...]:
    seen = set()
    out = []
    for edge in edges:
        u, v = edge
        u, v = int(u), int(v)
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        if u > v:
            u, v = v, u
        if (u, v) in seen:
            raise ValueError(f"duplicate edge ({u},{v})")
        seen.add((u, v))
        out.append((u, v))
    out.sort()
    return tuple(out)


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph on vertices 0..n-1."""

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        object.__setattr__(self, "edges", _normalize_edges(self.n, self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbr = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbr[u].append(v)
            nbr[v].append(u)
        return tuple(tuple(sorted(ns)) for ns in nbr)

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edge_set if u < v else (v, u) in self.edge_set

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(ns) for ns in self.adjacency)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(flat neighbor array, offsets of length n+1) for vectorized kernels."""
        offsets = np.zeros(self.n + 1, dtype=np.intp)
        for i, ns in enumerate(self.adjacency):
            offsets[i + 1] = offsets[i] + len(ns)
        flat = np.fromiter(
            (w for ns in self.adjacency for w in ns), dtype=np.intp, count=int(offsets[-1])
        )
        flat.flags.writeable = False
        offsets.flags.writeable = False
        return flat, offsets

    @cached_property
    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = 1
            a[v, u] = 1
        a.flags.writeable = False
        return a

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = [False] * self.n
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            v = stack.pop()
            for w in self.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        return count == self.n

    def is_tree(self) -> bool:
        return self.n >= 1 and self.m == self.n - 1 and self.is_connected()

    def is_cycle(self) -> bool:
        return self.n >= 3 and all(d == 2 for d in self.degrees) and self.is_connected()

    def permuted(self, perm: "Permutation") -> "Graph":
        if perm.n != self.n:
            raise ValueError(f"permutation on {perm.n} vertices, graph has {self.n}")
        p = perm.mapping
        return Graph(self.n, tuple((p[u], p[v]) for u, v in self.edges))


@dataclass(frozen=True)
class Permutation:
    """Bijection on {0..n-1} stored as an image array: v -> mapping[v]."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(int(v) for v in self.mapping))
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise ValueError("mapping is not a bijection on {0..n-1}")

    @property
    def n(self) -> int:
        return len(self.mapping)

    def __call__(self, v: int) -> int:
        return self.mapping[v]

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for v, w in enumerate(self.mapping):
            inv[w] = v
        return Permutation(tuple(inv))

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(n)))

    @staticmethod
    def random(n: int, rng: np.random.Generator) -> "Permutation":
        return Permutation(tuple(int(v) for v in rng.permutation(n)))


@dataclass(frozen=True, eq=False)
class AttributedGraph:
    """Graph plus per-vertex feature rows (n x d float64, read-only)."""

    graph: Graph
    features: np.ndarray
    feature_kind: str = "external"
    config: "FeatureConfig | None" = None

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        if feats.ndim != 2:
            raise ValueError(f"feature matrix must be 2-D, got shape {feats.shape}")
        if feats.shape[0] != self.graph.n:
            raise ValueError(
                f"feature rows ({feats.shape[0]}) != vertex count ({self.graph.n})"
            )
        if feats.size and not np.isfinite(feats).all():
            raise ValueError("feature matrix contains non-finite entries")
        feats = feats.copy()
        feats.flags.writeable = False
        object.__setattr__(self, "features", feats)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def dim(self) -> int:
        return int(self.features.shape[1])


def apply_permutation(g: AttributedGraph, perm: Permutation) -> AttributedGraph:
    """Relabel vertices: edge {u,v} becomes {p(u),p(v)}, feature row v moves to p(v)."""
    if perm.n != g.n:
        raise ValueError(f"permutation on {perm.n} vertices, graph has {g.n}")
    feats = np.empty_like(g.features)
    feats[list(perm.mapping)] = g.features
    return AttributedGraph(g.graph.permuted(perm), feats, g.feature_kind, g.config)


# ---------------------------------------------------------------------------
# graph6 codec (short form, n < 63)
# ---------------------------------------------------------------------------


def parse_graph6(line: str) -> Graph:
    """Decode a single graph6 record.

    The record may carry one trailing newline; anything else after the body
    is rejected. Errors report the byte offset of the first defect.
    """
    record = line
    if record.endswith("\n"):
        record = record[:-1]
    if record.endswith("\r"):
        record = record[:-1]
    if not record:
        raise Graph6Error("empty record: missing header byte", 0)
    c0 = ord(record[0])
    if c0 == 126:
        raise Graph6Error("long-form record (n >= 63) is not supported", 0)
    if not 63 <= c0 <= 125:
        raise Graph6Error(f"malformed header byte {c0}", 0)
    n = c0 - 63
    need_bits = n * (n - 1) // 2
    need_bytes = (need_bits + 5) // 6
    body = record[1:]
    if len(body) < need_bytes:
        raise Graph6Error(
            f"body too short: need {need_bytes} bytes for n={n}, got {len(body)}",
            1 + len(body),
        )
    if len(body) > need_bytes:
        raise Graph6Error("trailing garbage after record body", 1 + need_bytes)
    vals = []
    for i, ch in enumerate(body):
        b = ord(ch)
        if not 63 <= b <= 126:
            raise Graph6Error(f"body byte {b} out of range [63,126]", 1 + i)
        vals.append(b - 63)
    edges = []
    bit = 0
    for j in range(1, n):
        for i in range(j):
            if (vals[bit // 6] >> (5 - bit % 6)) & 1:
                edges.append((i, j))
            bit += 1
    return Graph(n, tuple(edges))


def write_graph6(g: Graph) -> str:
    """Encode a graph as a short-form graph6 record (no trailing newline)."""
    if g.n > GRAPH6_MAX_N:
        raise ValueError(f"graph6 short form supports n < 63, got n={g.n}")
    out = [chr(g.n + 63)]
    edge_set = g.edge_set
    acc = 0
    nbits = 0
    for j in range(1, g.n):
        for i in range(j):
            acc = (acc << 1) | ((i, j) in edge_set)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc, nbits = 0, 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


# ---------------------------------------------------------------------------
# JSON graph schema: {"n": int, "edges": [[u,v],...], "features": [[...],...]}
# ---------------------------------------------------------------------------


def to_json_dict(g: Union[Graph, AttributedGraph]) -> dict:
    if isinstance(g, AttributedGraph):
        return {
            "n": g.graph.n,
            "edges": [[u, v] for u, v in g.graph.edges],
            "features": g.features.tolist(),
        }
    return {"n": g.n, "edges": [[u, v] for u, v in g.edges]}


def from_json_dict(d: dict) -> Union[Graph, AttributedGraph]:
    g = Graph(int(d["n"]), tuple((u, v) for u, v in d.get("edges", ())))
    if "features" in d and d["features"] is not None:
        return AttributedGraph(g, np.asarray(d["features"], dtype=np.float64))
    return g


def to_json(g: Union[Graph, AttributedGraph]) -> str:
    return json.dumps(to_json_dict(g), separators=(",", ":"))


def from_json(s: str) -> Union[Graph, AttributedGraph]:
    return from_json_dict(json.loads(s))
