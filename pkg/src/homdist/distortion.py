"""Homomorphism distortion: one-sided values, embeddings, and the sampled variant.

The embedding direction is pattern -> graph only; homomorphisms out of an
arbitrary graph are intractable in general and are available solely
through the brute-force oracle at guard sizes. Infinite entries (no
homomorphism from the pattern) survive in raw embeddings and map to 1.0
under normalization.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from multiprocessing import get_context
from typing import Optional, Sequence

import numpy as np

from . import hom_engine, oracle
from .errors import BudgetExceeded, ChecksumMismatch, ConfigMismatch, NormalizationError
from .features import AttributedFamily, FeatureConfig, compute_features
from .graphs import AttributedGraph, Graph, write_graph6
from .hom_engine import DEFAULT_NODE_BUDGET, cost_matrix, substream
from .patterns import PatternFamily


@dataclass(frozen=True)
class DistortionEmbedding:
    """Vector of distortions from one graph to every member of a family."""

    values: np.ndarray
    family_checksum: str
    normalized: bool
    feature_config: FeatureConfig

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise ValueError("embedding values must be a 1-D vector")
        if np.isnan(v).any():
            raise ValueError("embedding values must not contain NaN")
        if self.normalized and v.size and (not np.isfinite(v).all() or v.min() < 0 or v.max() > 1):
            raise ValueError("normalized embeddings must lie in [0,1]")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return int(self.values.size)


def _require_same_config(a: Optional[FeatureConfig], b: Optional[FeatureConfig]) -> None:
    if a is None or b is None or a != b:
        raise ConfigMismatch(f"feature configs differ: {a} vs {b}")


def distortion_to_pattern(
    g: AttributedGraph, pattern: AttributedGraph, norm: str = "l2"
) -> float:
    """min over Hom(pattern -> g) of the max per-vertex feature gap; +inf if none."""
    _require_same_config(g.config, pattern.config)
    cost = cost_matrix(pattern, g, norm)
    value, _ = hom_engine.min_bottleneck_hom(
        pattern.graph, g.graph, cost, want_witness=False
    )
    return value


def embed(g: AttributedGraph, fam: AttributedFamily, norm: str = "l2") -> DistortionEmbedding:
    """Distortion embedding of g over the family, in member order."""
    values = np.array(
        [distortion_to_pattern(g, member, norm) for member in fam.members],
        dtype=np.float64,
    )
    return DistortionEmbedding(values, fam.checksum, False, fam.config)


# Worker state is inherited by forked processes; see embed_dataset.
_POOL_STATE: Optional[tuple] = None


def _embed_worker(index: int) -> np.ndarray:
    graphs, fam, norm = _POOL_STATE
    return embed(graphs[index], fam, norm).values


def embed_dataset(
    graphs: Sequence[AttributedGraph],
    fam: AttributedFamily,
    norm: str = "l2",
    threads: int = 1,
) -> list[DistortionEmbedding]:
    """Embed every graph; results are in input order regardless of threads."""
    if threads <= 1 or len(graphs) < 2:
        return [embed(g, fam, norm) for g in graphs]
    global _POOL_STATE
    _POOL_STATE = (list(graphs), fam, norm)
    try:
        ctx = get_context("fork")
        chunk = max(1, len(graphs) // (threads * 4))
        with ProcessPoolExecutor(max_workers=threads, mp_context=ctx) as ex:
            value_rows = list(ex.map(_embed_worker, range(len(graphs)), chunksize=chunk))
    finally:
        _POOL_STATE = None
    return [
        DistortionEmbedding(v, fam.checksum, False, fam.config) for v in value_rows
    ]


def pairwise_distance(a: DistortionEmbedding, b: DistortionEmbedding) -> float:
    """max over family members of |a - b|.

    Coordinates infinite on both sides contribute 0; infinite on exactly
    one side contributes 1 (the normalized image of infinity).
    """
    if a.family_checksum != b.family_checksum:
        raise ChecksumMismatch("embeddings come from different families")
    if a.normalized != b.normalized:
        raise NormalizationError("embeddings have different normalization states")
    if len(a) == 0:
        return 0.0
    x, y = a.values, b.values
    inf_x, inf_y = np.isinf(x), np.isinf(y)
    diff = np.where(
        inf_x & inf_y, 0.0, np.where(inf_x ^ inf_y, 1.0, np.abs(x - y))
    )
    return float(diff.max())


def normalize(dataset: Sequence[DistortionEmbedding]) -> list[DistortionEmbedding]:
    """Coordinate-wise min-max scaling over the dataset's finite entries.

    Infinite entries map to exactly 1.0; coordinates whose finite entries
    are all equal map to 0.
    """
    if not dataset:
        return []
    checksum = dataset[0].family_checksum
    config = dataset[0].feature_config
    for e in dataset:
        if e.family_checksum != checksum:
            raise ChecksumMismatch("cannot normalize embeddings from mixed families")
        if e.feature_config != config:
            raise ConfigMismatch("cannot normalize embeddings from mixed feature configs")
        if e.normalized:
            raise NormalizationError("dataset is already normalized")
    vals = np.stack([e.values for e in dataset])
    out = np.zeros_like(vals)
    finite = np.isfinite(vals)
    out[~finite] = 1.0
    for j in range(vals.shape[1]):
        col_finite = finite[:, j]
        if not col_finite.any():
            continue
        col = vals[col_finite, j]
        lo, hi = col.min(), col.max()
        if hi > lo:
            out[col_finite, j] = (col - lo) / (hi - lo)
    return [
        replace(e, values=out[i], normalized=True) for i, e in enumerate(dataset)
    ]


def distinguish(a: DistortionEmbedding, b: DistortionEmbedding, eps: float) -> bool:
    """Deem the graphs non-isomorphic iff the embedding distance reaches eps."""
    if not (a.normalized and b.normalized):
        raise NormalizationError("distinguish requires normalized embeddings")
    return pairwise_distance(a, b) >= eps


def hom_count_vector(g: Graph, family: PatternFamily) -> list[int]:
    """Exact hom(F, g) for every family member, via the counting DPs."""
    if family.kind == "cycles":
        return [hom_engine.count_homs_cycle(member.n, g) for member in family.members]
    if family.kind == "trees":
        return [hom_engine.count_homs_tree(member, g) for member in family.members]
    raise ValueError(f"unsupported family kind {family.kind!r} for hom counts")


# ---------------------------------------------------------------------------
# sampled, expectation-complete variant
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SampledEmbeddingConfig:
    n_max: int
    num_patterns: int
    homs_per_pattern: int
    seed: int

    def __post_init__(self):
        if self.n_max < 1 or self.num_patterns < 1 or self.homs_per_pattern < 1:
            raise ValueError("n_max, num_patterns and homs_per_pattern must be >= 1")


@dataclass(frozen=True)
class SampledPatternValue:
    """Distortion estimate against one sampled pattern."""

    index: int
    graph6: str
    value: float
    g_to_f_empty: bool
    f_to_g_empty: bool
    budget_exhausted: bool = False


@dataclass(frozen=True)
class SampledEmbedding:
    entries: tuple[SampledPatternValue, ...]
    config: SampledEmbeddingConfig
    feature_config: FeatureConfig
    norm: str

    def as_map(self) -> dict[int, float]:
        return {e.index: e.value for e in self.entries}

    def to_json_dict(self) -> dict:
        return {
            "config": {
                "n_max": self.config.n_max,
                "num_patterns": self.config.num_patterns,
                "homs_per_pattern": self.config.homs_per_pattern,
                "seed": self.config.seed,
            },
            "feature_config": {
                "kind": self.feature_config.kind,
                "dim": self.feature_config.dim,
                "sp_pad": self.feature_config.sp_pad,
            },
            "norm": self.norm,
            "entries": [
                {
                    "index": e.index,
                    "graph6": e.graph6,
                    "value": "inf" if math.isinf(e.value) else e.value,
                    "g_to_f_empty": e.g_to_f_empty,
                    "f_to_g_empty": e.f_to_g_empty,
                    "budget_exhausted": e.budget_exhausted,
                }
                for e in self.entries
            ],
        }


def _min_sampled_gap(
    pattern: AttributedGraph,
    host: AttributedGraph,
    count: int,
    seed_root: int,
    ids: tuple,
    norm: str,
    budget: int,
) -> tuple[float, bool, bool]:
    """(min gap over sampled maps, hom-set empty, budget exhausted).

    Within the brute-force guard the hom set is enumerated once and maps
    are drawn uniformly from it; larger instances go through the engine
    samplers. Either way every homomorphism has positive probability.
    """
    cost = cost_matrix(pattern, host, norm).entries
    if pattern.n <= oracle.GUARD_N and host.n <= oracle.GUARD_N:
        maps = list(oracle.iter_homs_bruteforce(pattern.graph, host.graph))
        if not maps:
            return math.inf, True, False
        rng = substream(seed_root, *ids)
        picks = {int(i) for i in rng.integers(0, len(maps), size=count)}
        best = min(
            max((cost[u][w] for u, w in enumerate(maps[i])), default=0.0)
            for i in picks
        )
        return float(best), False, False
    draw_seed = int(substream(seed_root, *ids, "seed").integers(0, 2**63))
    try:
        sample = hom_engine.sample_homs(
            pattern.graph, host.graph, count, draw_seed, budget=budget
        )
    except BudgetExceeded:
        return math.inf, False, True
    if sample.hom_empty:
        return math.inf, True, False
    best = min(
        max((cost[u][w] for u, w in enumerate(h.mapping)), default=0.0)
        for h in sample.maps
    )
    return float(best), False, False


def sampled_embed(
    g: AttributedGraph,
    cfg: SampledEmbeddingConfig,
    feature_config: FeatureConfig,
    norm: str = "l2",
    budget: int = DEFAULT_NODE_BUDGET,
) -> SampledEmbedding:
    """Monte Carlo distortion embedding against randomly drawn patterns.

    Per sampled pattern F: max of the min sampled gap in each direction,
    where an empty homomorphism set contributes +inf to its side. Fully
    deterministic given cfg.seed.
    """
    if g.dim != feature_config.dim:
        raise ConfigMismatch(
            f"graph feature dim {g.dim} != pattern feature dim {feature_config.dim}"
        )
    entries = []
    for i in range(cfg.num_patterns):
        pattern = hom_engine.sample_pattern(
            cfg.n_max, substream(cfg.seed, "pattern", i)
        )
        pattern_attr = compute_features(pattern, feature_config)
        fwd, fwd_empty, fwd_budget = _min_sampled_gap(
            g, pattern_attr, cfg.homs_per_pattern, cfg.seed, ("g_to_f", i), norm, budget
        )
        bwd, bwd_empty, bwd_budget = _min_sampled_gap(
            pattern_attr, g, cfg.homs_per_pattern, cfg.seed, ("f_to_g", i), norm, budget
        )
        entries.append(
            SampledPatternValue(
                index=i,
                graph6=write_graph6(pattern),
                value=max(fwd, bwd),
                g_to_f_empty=fwd_empty,
                f_to_g_empty=bwd_empty,
                budget_exhausted=fwd_budget or bwd_budget,
            )
        )
    return SampledEmbedding(tuple(entries), cfg, feature_config, norm)
