"""File formats: graph6 files, family files, embedding CSV + manifest, PGM.

All writers go through an atomic temp-file + rename so partial output is
never observed. Numeric CSV output uses 17 significant digits so repeated
runs are byte-identical and values round-trip through float64 exactly.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from typing import Optional, Sequence

import numpy as np

from .distortion import DistortionEmbedding
from .errors import Graph6Error, HomdistError
from .features import FeatureConfig
from .graphs import Graph, parse_graph6, write_graph6
from .patterns import PatternFamily, custom_family

TREEWIDTH_BY_KIND = {"trees": 1, "cycles": 2}


def fmt17(x: float) -> str:
    if math.isinf(x):
        return "inf"
    return format(x, ".17g")


def atomic_write_text(path: str, text: str) -> None:
    atomic_write_bytes(path, text.encode())


def atomic_write_bytes(path: str, data: bytes) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def read_graph6_file(path: str) -> list[Graph]:
    graphs = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip("\r\n")
            if not stripped:
                continue
            try:
                graphs.append(parse_graph6(stripped))
            except Graph6Error as exc:
                raise Graph6Error(f"{path}:{lineno}: {exc}", exc.offset) from exc
    return graphs


def write_graph6_file(path: str, graphs: Sequence[Graph]) -> None:
    atomic_write_text(path, "".join(write_graph6(g) + "\n" for g in graphs))


# ---------------------------------------------------------------------------
# pattern family files: <prefix>.g6 + <prefix>.json
# ---------------------------------------------------------------------------


def family_manifest(family: PatternFamily) -> dict:
    return {
        "kind": family.kind,
        "params": list(family.params),
        "count": len(family.members),
        "checksum": family.checksum,
    }


def write_family(prefix: str, family: PatternFamily) -> tuple[str, str]:
    g6_path, json_path = prefix + ".g6", prefix + ".json"
    write_graph6_file(g6_path, family.members)
    atomic_write_text(json_path, json.dumps(family_manifest(family), indent=2) + "\n")
    return g6_path, json_path


def read_family(prefix: str) -> PatternFamily:
    with open(prefix + ".json", "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    members = tuple(read_graph6_file(prefix + ".g6"))
    kind = manifest["kind"]
    params = tuple(manifest["params"])
    family = PatternFamily(
        kind, members, params, TREEWIDTH_BY_KIND.get(kind, 0)
    ) if kind != "custom" else custom_family(members)
    if family.checksum != manifest["checksum"]:
        raise HomdistError(
            f"family checksum mismatch for {prefix}: file does not match manifest"
        )
    return family


# ---------------------------------------------------------------------------
# embedding exports: <prefix>.csv + <prefix>.json
# ---------------------------------------------------------------------------


def _feature_config_dict(config: FeatureConfig) -> dict:
    return {"kind": config.kind, "dim": config.dim, "sp_pad": config.sp_pad}


def _feature_config_from_dict(d: dict) -> FeatureConfig:
    return FeatureConfig(d["kind"], int(d["dim"]), d.get("sp_pad"))


def embeddings_csv(embeddings: Sequence[DistortionEmbedding], ids: Sequence) -> str:
    width = len(embeddings[0]) if embeddings else 0
    lines = ["id," + ",".join(f"d{j}" for j in range(width))]
    for gid, emb in zip(ids, embeddings):
        lines.append(f"{gid}," + ",".join(fmt17(v) for v in emb.values))
    return "\n".join(lines) + "\n"


def write_embeddings(
    prefix: str,
    embeddings: Sequence[DistortionEmbedding],
    ids: Sequence,
    family: PatternFamily,
    norm: str,
    extra: Optional[dict] = None,
) -> tuple[str, str]:
    if not embeddings:
        raise ValueError("nothing to write: empty embedding list")
    csv_text = embeddings_csv(embeddings, ids)
    manifest = {
        "family": family_manifest(family),
        "feature_config": _feature_config_dict(embeddings[0].feature_config),
        "norm": norm,
        "normalized": embeddings[0].normalized,
        "checksums": {
            "family": family.checksum,
            "csv_sha256": hashlib.sha256(csv_text.encode()).hexdigest(),
        },
    }
    if extra:
        manifest.update(extra)
    csv_path, json_path = prefix + ".csv", prefix + ".json"
    atomic_write_text(csv_path, csv_text)
    atomic_write_text(json_path, json.dumps(manifest, indent=2) + "\n")
    return csv_path, json_path


def read_embeddings(prefix: str) -> tuple[list[str], list[DistortionEmbedding], dict]:
    with open(prefix + ".json", "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    config = _feature_config_from_dict(manifest["feature_config"])
    checksum = manifest["checksums"]["family"]
    normalized = bool(manifest["normalized"])
    ids: list[str] = []
    embeddings: list[DistortionEmbedding] = []
    with open(prefix + ".csv", "r", encoding="ascii") as fh:
        header = fh.readline()
        if not header.startswith("id,") and header.strip() != "id":
            raise HomdistError(f"{prefix}.csv: malformed header {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            ids.append(cells[0])
            values = np.array([float(c) for c in cells[1:]], dtype=np.float64)
            embeddings.append(
                DistortionEmbedding(values, checksum, normalized, config)
            )
    return ids, embeddings, manifest


def write_hom_counts_csv(
    path: str, counts: Sequence[Sequence[int]], ids: Sequence
) -> None:
    width = len(counts[0]) if counts else 0
    lines = ["id," + ",".join(f"h{j}" for j in range(width))]
    for gid, row in zip(ids, counts):
        lines.append(f"{gid}," + ",".join(str(c) for c in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# distance matrix outputs
# ---------------------------------------------------------------------------


def write_matrix_csv(path: str, matrix: np.ndarray) -> None:
    lines = [",".join(fmt17(v) for v in row) for row in matrix]
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_pgm_heatmap(path: str, matrix: np.ndarray) -> None:
    """Grayscale portable pixmap of a distance matrix; darker = closer."""
    scaled = np.clip(matrix, 0.0, 1.0)
    pixels = np.round(scaled * 255).astype(np.uint8)
    header = f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n255\n".encode("ascii")
    atomic_write_bytes(path, header + pixels.tobytes())
