"""Command-line surface.

Subcommands: gen-patterns, embed, distmat, brec-eval, sampled-embed,
hom-counts, verify. Exit codes: 0 success, 1 usage error, 2 data error,
3 budget or verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import distortion, features, io, verify
from .distortion import SampledEmbeddingConfig
from .errors import BudgetExceeded, HomdistError
from .features import FeatureConfig
from .graphs import Graph
from .hom_engine import DEFAULT_NODE_BUDGET
from .patterns import PatternFamily, gen_cycles, gen_trees, gen_trees_range

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_BUDGET = 3

# Category file stems of the standard benchmark layout, in report order.
BREC_CATEGORIES = ("basic", "regular", "extension", "cfi", "4vtx", "dr")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class BrecCategoryRow:
    category: str
    pairs: int
    distinguished: int

    @property
    def percentage(self) -> float:
        return round(100.0 * self.distinguished / self.pairs, 1) if self.pairs else 0.0


@dataclass
class BrecReport:
    rows: list[BrecCategoryRow]
    manifest: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "categories": [
                {
                    "category": r.category,
                    "pairs": r.pairs,
                    "distinguished": r.distinguished,
                    "percentage": r.percentage,
                }
                for r in self.rows
            ],
            "manifest": self.manifest,
        }


def _default_threads() -> int:
    env = os.environ.get("HOMDIST_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _add_common_feature_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--features", choices=("rwpe", "spe"), required=True)
    p.add_argument("--dim", type=int, required=True, help="feature dimension")
    p.add_argument("--norm", choices=("l2", "linf"), default="l2")
    p.add_argument("--sigma", type=float, default=None,
                   help="opaque knob recorded in the manifest, not used in computation")
    p.add_argument("--gamma", type=float, default=None,
                   help="opaque knob recorded in the manifest, not used in computation")


def _opaque_params(args) -> dict:
    return {"sigma": args.sigma, "gamma": args.gamma}


def _build_family(kind: str, lo: Optional[int], hi: Optional[int], order: Optional[int]) -> PatternFamily:
    try:
        if kind == "cycles":
            if lo is None or hi is None:
                raise UsageError("cycles need --lo and --hi")
            return gen_cycles(lo, hi)
        if kind == "trees":
            if order is not None:
                return gen_trees(order)
            if lo is None or hi is None:
                raise UsageError("trees need --order, or --lo and --hi")
            return gen_trees_range(lo, hi)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    raise UsageError(f"unknown family kind {kind!r}")


def _load_family(args) -> PatternFamily:
    if args.family:
        return io.read_family(args.family)
    return _build_family(args.family_kind, args.lo, args.hi, getattr(args, "order", None))


def _add_family_flags(p: argparse.ArgumentParser, allow_file: bool = True) -> None:
    if allow_file:
        p.add_argument("--family", help="prefix of a family written by gen-patterns")
    p.add_argument("--family-kind", choices=("cycles", "trees"))
    p.add_argument("--lo", type=int)
    p.add_argument("--hi", type=int)
    p.add_argument("--order", type=int)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_gen_patterns(args) -> int:
    family = _build_family(args.kind, args.lo, args.hi, args.order)
    g6_path, json_path = io.write_family(args.out, family)
    print(f"wrote {len(family.members)} patterns to {g6_path} (+ {json_path})")
    return EXIT_OK


def _attributed_dataset(graphs: Sequence[Graph], family: PatternFamily, args):
    config = features.resolve_config(
        FeatureConfig(args.features, args.dim), graphs, family
    )
    fam = features.attribute_family(family, config)
    attributed = [features.compute_features(g, config) for g in graphs]
    return attributed, fam, config


def cmd_embed(args) -> int:
    graphs = io.read_graph6_file(args.graphs)
    if not graphs:
        raise HomdistError(f"{args.graphs}: no graph6 records")
    family = _load_family(args)
    attributed, fam, config = _attributed_dataset(graphs, family, args)
    embeddings = distortion.embed_dataset(attributed, fam, args.norm, args.threads)
    if not args.raw:
        embeddings = distortion.normalize(embeddings)
    csv_path, json_path = io.write_embeddings(
        args.out,
        embeddings,
        ids=list(range(len(embeddings))),
        family=family,
        norm=args.norm,
        extra={
            "normalization_scope": "dataset" if not args.raw else None,
            "opaque_params": _opaque_params(args),
        },
    )
    print(f"wrote {len(embeddings)} embeddings to {csv_path} (+ {json_path})")
    return EXIT_OK


def cmd_distmat(args) -> int:
    ids, embeddings, manifest = io.read_embeddings(args.embeddings)
    if not manifest.get("normalized"):
        raise HomdistError("distance matrices require normalized embeddings")
    n = len(embeddings)
    mat = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = distortion.pairwise_distance(embeddings[i], embeddings[j])
            mat[i, j] = d
            mat[j, i] = d
    if not np.array_equal(mat, mat.T):
        raise HomdistError("distance matrix is not symmetric")
    io.write_matrix_csv(args.out_csv, mat)
    if args.out_heatmap:
        io.write_pgm_heatmap(args.out_heatmap, mat)
    print(f"wrote {n}x{n} distance matrix to {args.out_csv}")
    return EXIT_OK


def _discover_categories(dataset_dir: str) -> list[tuple[str, str]]:
    found = []
    for stem in BREC_CATEGORIES:
        path = os.path.join(dataset_dir, stem + ".g6")
        if os.path.exists(path):
            found.append((stem, path))
    known = {stem for stem, _ in found}
    for name in sorted(os.listdir(dataset_dir)):
        if name.endswith(".g6") and name[:-3] not in known:
            found.append((name[:-3], os.path.join(dataset_dir, name)))
    return found


def _category_pairs(count: int, pairs_index: Optional[dict], category: str) -> list[tuple[int, int]]:
    if pairs_index and category in pairs_index:
        return [(int(i), int(j)) for i, j in pairs_index[category]]
    return [(2 * k, 2 * k + 1) for k in range(count // 2)]


def cmd_brec_eval(args) -> int:
    started = time.monotonic()
    family = _load_family(args)
    pairs_index = None
    if args.pairs_index:
        with open(args.pairs_index, "r", encoding="utf-8") as fh:
            pairs_index = json.load(fh)
    categories = _discover_categories(args.dataset)
    if not categories:
        raise HomdistError(f"{args.dataset}: no category .g6 files found")
    missing = [c for c in BREC_CATEGORIES if c not in {s for s, _ in categories}]
    rows = []
    for category, path in categories:
        graphs = io.read_graph6_file(path)
        attributed, fam, config = _attributed_dataset(graphs, family, args)
        embeddings = distortion.normalize(
            distortion.embed_dataset(attributed, fam, args.norm, args.threads)
        )
        pairs = _category_pairs(len(graphs), pairs_index, category)
        hit = sum(
            distortion.distinguish(embeddings[i], embeddings[j], args.epsilon)
            for i, j in pairs
        )
        rows.append(BrecCategoryRow(category, len(pairs), hit))
    report = BrecReport(
        rows,
        manifest={
            "family": io.family_manifest(family),
            "features": args.features,
            "dim": args.dim,
            "norm": args.norm,
            "epsilon": args.epsilon,
            "normalization_scope": "per-category",
            "missing_categories": missing,
            "opaque_params": _opaque_params(args),
            "wall_time_s": round(time.monotonic() - started, 3),
        },
    )
    print(f"{'category':<12} {'pairs':>6} {'dist':>6} {'pct':>7}")
    for r in rows:
        print(f"{r.category:<12} {r.pairs:>6} {r.distinguished:>6} {r.percentage:>7.1f}")
    for name in missing:
        print(f"{name:<12} missing, skipped", file=sys.stderr)
    if args.out:
        io.atomic_write_text(args.out, json.dumps(report.to_json_dict(), indent=2) + "\n")
        print(f"wrote report to {args.out}")
    return EXIT_OK


def cmd_sampled_embed(args) -> int:
    graphs = io.read_graph6_file(args.graphs)
    if not graphs:
        raise HomdistError(f"{args.graphs}: no graph6 records")
    config = features.resolve_config(FeatureConfig(args.features, args.dim), graphs)
    cfg = SampledEmbeddingConfig(
        n_max=args.n_max,
        num_patterns=args.num_patterns,
        homs_per_pattern=args.homs_per_pattern,
        seed=args.seed,
    )
    out = {
        "graphs": [
            distortion.sampled_embed(
                features.compute_features(g, config), cfg, config, args.norm,
                budget=args.budget,
            ).to_json_dict()
            for g in graphs
        ]
    }
    io.atomic_write_text(args.out, json.dumps(out, indent=2) + "\n")
    print(f"wrote sampled embeddings for {len(graphs)} graphs to {args.out}")
    return EXIT_OK


def cmd_hom_counts(args) -> int:
    graphs = io.read_graph6_file(args.graphs)
    if not graphs:
        raise HomdistError(f"{args.graphs}: no graph6 records")
    family = _load_family(args)
    counts = [distortion.hom_count_vector(g, family) for g in graphs]
    io.write_hom_counts_csv(args.out, counts, ids=list(range(len(graphs))))
    print(f"wrote {len(counts)}x{len(family.members)} count table to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify.run_all(time_budget_s=args.time_limit, seed=args.seed)
    failed = False
    for res in results:
        status = "ok" if res.ok else "FAIL"
        print(f"{status:<5} {res.name:<36} cases={res.cases}")
        for f in res.failures:
            failed = True
            print(f"      {f}", file=sys.stderr)
    return EXIT_BUDGET if failed else EXIT_OK


# ---------------------------------------------------------------------------
# parser wiring
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="homdist", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-patterns", help="write a pattern family as .g6 + manifest")
    p.add_argument("kind", choices=("cycles", "trees"))
    p.add_argument("--lo", type=int)
    p.add_argument("--hi", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_gen_patterns)

    p = sub.add_parser("embed", help="distortion embeddings for a graph6 dataset")
    p.add_argument("--graphs", required=True)
    _add_family_flags(p)
    _add_common_feature_flags(p)
    p.add_argument("--raw", action="store_true", help="skip dataset normalization")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("distmat", help="pairwise distance matrix from embeddings")
    p.add_argument("--embeddings", required=True, help="prefix written by embed")
    p.add_argument("--out-csv", required=True)
    p.add_argument("--out-heatmap", help="PGM heatmap path (darker = closer)")
    p.set_defaults(func=cmd_distmat)

    p = sub.add_parser("brec-eval", help="per-category pair distinguishing rates")
    p.add_argument("--dataset", required=True, help="directory of per-category .g6 files")
    _add_family_flags(p)
    _add_common_feature_flags(p)
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--pairs-index", help="JSON {category: [[i,j],...]} overriding consecutive pairs")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--out", help="JSON report path")
    p.set_defaults(func=cmd_brec_eval)

    p = sub.add_parser("sampled-embed", help="expectation-complete sampled embedding")
    p.add_argument("--graphs", required=True)
    _add_common_feature_flags(p)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--num-patterns", type=int, required=True)
    p.add_argument("--homs-per-pattern", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--out", required=True, help="JSON output path")
    p.set_defaults(func=cmd_sampled_embed)

    p = sub.add_parser("hom-counts", help="hom count vectors for a graph6 dataset")
    p.add_argument("--graphs", required=True)
    _add_family_flags(p)
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(func=cmd_hom_counts)

    p = sub.add_parser("verify", help="run the oracle-equivalence property suites")
    p.add_argument("--time-limit", type=float, default=600.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except HomdistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
