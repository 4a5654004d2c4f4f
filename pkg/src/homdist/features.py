"""Structural attribute functions: random-walk and shortest-path encodings.

Both encodings depend only on unlabeled structure, so features of a
relabeled graph are the row-permuted features of the original. Shortest
path rows are sorted ascending and padded with a sentinel so graphs of
different orders stay comparable; the sentinel must be shared across a
run (see resolve_config).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Iterable, Optional

import numpy as np

from .graphs import AttributedGraph, Graph
from .patterns import PatternFamily

KIND_RWPE = "rwpe"
KIND_SPE = "spe"
KIND_EXTERNAL = "external"


@dataclass(frozen=True)
class FeatureConfig:
    """Which encoding to compute and at what dimension.

    dim is the number of walk steps for rwpe and the row length for spe.
    sp_pad is the spe sentinel for unreachable/padding entries; None means
    "resolve to the graph's own vertex count at compute time".
    """

    kind: str
    dim: int
    sp_pad: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (KIND_RWPE, KIND_SPE, KIND_EXTERNAL):
            raise ValueError(f"unknown feature kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError(f"feature dimension must be >= 1, got {self.dim}")
        if self.kind != KIND_SPE and self.sp_pad is not None:
            raise ValueError("sp_pad only applies to spe features")
        if self.sp_pad is not None and self.sp_pad <= 0:
            raise ValueError("sp_pad must be positive")


def rwpe(g: Graph, dim: int) -> np.ndarray:
    """Return probabilities: entry (v, k-1) is the k-step walk return prob at v.

    Rows of isolated vertices are all zeros.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    n = g.n
    out = np.zeros((n, dim), dtype=np.float64)
    if n == 0:
        return out
    a = g.adjacency_matrix.astype(np.float64)
    deg = a.sum(axis=1)
    inv = np.divide(1.0, deg, out=np.zeros(n), where=deg > 0)
    walk = a * inv[:, None]
    power = np.eye(n)
    for k in range(dim):
        power = power @ walk
        out[:, k] = np.diag(power)
    return out


def bfs_distances(g: Graph, source: int) -> list[int]:
    """Unweighted shortest path lengths from source; -1 for unreachable."""
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in g.adjacency[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def spe(g: Graph, dim: int, sp_pad: Optional[float] = None) -> np.ndarray:
    """Sorted shortest-path profile per vertex, padded/truncated to dim.

    Row v lists distances from v to every other vertex (self excluded,
    unreachable = sp_pad) in ascending order.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    pad = float(g.n) if sp_pad is None else float(sp_pad)
    out = np.empty((g.n, dim), dtype=np.float64)
    for v in range(g.n):
        dist = bfs_distances(g, v)
        row = sorted(float(d) if d > 0 else pad for u, d in enumerate(dist) if u != v)
        if row and row[-1] > pad:
            raise ValueError(
                f"sp_pad={pad} is below the largest finite distance {row[-1]}"
            )
        row = row[:dim] + [pad] * max(0, dim - len(row))
        out[v] = row[:dim]
    return out


def compute_features(g: Graph, config: FeatureConfig) -> AttributedGraph:
    """Attach computed features; the stored config has sp_pad resolved."""
    if config.kind == KIND_RWPE:
        feats = rwpe(g, config.dim)
        resolved = config
    elif config.kind == KIND_SPE:
        pad = float(g.n) if config.sp_pad is None else config.sp_pad
        feats = spe(g, config.dim, pad)
        resolved = replace(config, sp_pad=pad)
    else:
        raise ValueError("external features cannot be computed")
    return AttributedGraph(g, feats, config.kind, resolved)


def resolve_config(
    config: FeatureConfig,
    graphs: Iterable[Graph] = (),
    family: Optional[PatternFamily] = None,
) -> FeatureConfig:
    """Fill in a run-level spe sentinel: the max order over everything compared."""
    if config.kind != KIND_SPE or config.sp_pad is not None:
        return config
    orders = [g.n for g in graphs]
    if family is not None:
        orders.extend(g.n for g in family.members)
    if not orders:
        raise ValueError("cannot resolve sp_pad without any graphs")
    return replace(config, sp_pad=float(max(max(orders), 1)))


@dataclass(frozen=True, eq=False)
class AttributedFamily:
    """Pattern family with features precomputed under one shared config."""

    family: PatternFamily
    members: tuple[AttributedGraph, ...]
    config: FeatureConfig

    @property
    def checksum(self) -> str:
        return self.family.checksum

    def __len__(self) -> int:
        return len(self.members)


def attribute_family(family: PatternFamily, config: FeatureConfig) -> AttributedFamily:
    config = resolve_config(config, family=family)
    members = tuple(compute_features(g, config) for g in family.members)
    return AttributedFamily(family, members, config)
