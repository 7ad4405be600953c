"""Line-oriented text formats for datasets, models, and result tables.

All artifacts are diff-friendly text with UNIX newlines and deterministic
content for a fixed input: floats are written with shortest round-trip
formatting, JSON metadata with sorted keys, and no wall-clock values.

Dataset file (one record per line)::

    setmatch-dataset v1
    meta {...json: d, m_pos, m_neg, generator spec, seed, config echo...}
    pair <+1|-1> <N> <M> <N*d coords of the first set> <M*d coords of the second>

Model file::

    setmatch-model v1
    meta {...json: kernel spec, r, norm, anchor count, dataset sha256...}
    coef <value>          (one line per anchor, in dataset order)
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Sequence, Tuple

import numpy as np

from .kernels import BaseKernelSpec, PairKernel, RkhsScoreFunction
from .sampling import GeneratorSpec, MatchingDataset
from .sets import ItemSet, SetPair

DATASET_MAGIC = "setmatch-dataset v1"
MODEL_MAGIC = "setmatch-model v1"


def fmt(x) -> str:
    """Shortest decimal string that round-trips the float64 value."""
    return repr(float(x))


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(", ", ": "))


def sha256_of_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def generator_spec_to_dict(spec: GeneratorSpec) -> dict:
    return {
        "d": spec.d,
        "n_clusters": spec.n_clusters,
        "cluster_std": spec.cluster_std,
        "within_pair_std": spec.within_pair_std,
        "set_size_min": spec.set_size_range[0],
        "set_size_max": spec.set_size_range[1],
        "seed": spec.seed,
    }


def generator_spec_from_dict(d: dict) -> GeneratorSpec:
    return GeneratorSpec(
        d=d["d"],
        n_clusters=d["n_clusters"],
        cluster_std=d["cluster_std"],
        within_pair_std=d["within_pair_std"],
        set_size_range=(d["set_size_min"], d["set_size_max"]),
        seed=d["seed"],
    )


def kernel_to_dict(pk: PairKernel) -> dict:
    out = {"kind": pk.base.kind}
    if pk.base.kind == "rbf":
        out["gamma"] = pk.base.gamma
    return out


def kernel_from_dict(d: dict) -> PairKernel:
    if d["kind"] == "rbf":
        return PairKernel(BaseKernelSpec("rbf", d["gamma"]))
    return PairKernel(BaseKernelSpec("linear"))


def _pair_line(z: SetPair, label: int) -> str:
    coords = np.concatenate([z.first.items.ravel(), z.second.items.ravel()])
    head = f"pair {'+1' if label > 0 else '-1'} {z.first.size} {z.second.size}"
    return " ".join([head] + [fmt(c) for c in coords])


def save_dataset(path, dataset: MatchingDataset, meta: dict) -> None:
    """Write a dataset with its metadata; byte-identical across runs."""
    meta = dict(meta)
    meta.update({"d": dataset.dim, "m_pos": dataset.m_pos, "m_neg": dataset.m_neg})
    lines = [DATASET_MAGIC, "meta " + canonical_json(meta)]
    lines += [_pair_line(z, +1) for z in dataset.positives]
    lines += [_pair_line(z, -1) for z in dataset.negatives]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _parse_pair(tokens: Sequence[str], d: int) -> Tuple[SetPair, int]:
    label = 1 if tokens[1] == "+1" else -1
    n, m = int(tokens[2]), int(tokens[3])
    coords = np.array([float(t) for t in tokens[4:]])
    if coords.size != (n + m) * d:
        raise ValueError(f"pair record has {coords.size} coords, expected {(n + m) * d}")
    first = ItemSet(coords[: n * d].reshape(n, d))
    second = ItemSet(coords[n * d :].reshape(m, d))
    return SetPair(first, second), label


def load_dataset(path) -> Tuple[MatchingDataset, dict]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != DATASET_MAGIC:
        raise ValueError(f"{path} is not a {DATASET_MAGIC} file")
    if not lines[1].startswith("meta "):
        raise ValueError("missing meta line")
    meta = json.loads(lines[1][len("meta ") :])
    d = meta["d"]
    positives, negatives = [], []
    for line in lines[2:]:
        if not line:
            continue
        tokens = line.split(" ")
        if tokens[0] != "pair":
            raise ValueError(f"unexpected record {tokens[0]!r}")
        pair, label = _parse_pair(tokens, d)
        (positives if label > 0 else negatives).append(pair)
    if len(positives) != meta["m_pos"] or len(negatives) != meta["m_neg"]:
        raise ValueError("record counts disagree with metadata")
    return MatchingDataset(tuple(positives), tuple(negatives)), meta


def save_model(path, f: RkhsScoreFunction, meta: dict) -> None:
    """Write coefficients plus kernel spec and the anchor dataset's hash."""
    meta = dict(meta)
    meta.update({"kernel": kernel_to_dict(f.kernel), "anchor_count": len(f.anchors)})
    lines = [MODEL_MAGIC, "meta " + canonical_json(meta)]
    lines += [f"coef {fmt(c)}" for c in f.coefficients]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def load_model(path, dataset: MatchingDataset, dataset_sha256: str | None = None):
    """Rebuild a score function using the dataset's pairs as anchors.

    If ``dataset_sha256`` is given it must match the hash recorded at save
    time, guarding against pairing a model with the wrong dataset file.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != MODEL_MAGIC:
        raise ValueError(f"{path} is not a {MODEL_MAGIC} file")
    meta = json.loads(lines[1][len("meta ") :])
    recorded = meta.get("dataset_sha256")
    if dataset_sha256 is not None and recorded != dataset_sha256:
        raise ValueError(
            f"model was trained on dataset {recorded}, got {dataset_sha256}"
        )
    coefficients = np.array(
        [float(line.split(" ")[1]) for line in lines[2:] if line.startswith("coef ")]
    )
    if coefficients.size != meta["anchor_count"]:
        raise ValueError("coefficient count disagrees with metadata")
    if coefficients.size != dataset.m:
        raise ValueError(
            f"model has {coefficients.size} anchors but dataset has {dataset.m} pairs"
        )
    f = RkhsScoreFunction(coefficients, dataset.pairs, kernel_from_dict(meta["kernel"]))
    return f, meta


def write_csv(path, header: Sequence[str], rows, meta: dict | None = None) -> None:
    """Write a deterministic CSV: '#'-prefixed metadata, header, data rows.

    Floats use shortest round-trip formatting; booleans are written as
    true/false.
    """
    lines = []
    if meta:
        for key in sorted(meta):
            lines.append(f"# {key}: {canonical_json(meta[key])}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _csv_cell(v) -> str:
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt(v)
    return str(v)


def read_csv(path) -> Tuple[list, list]:
    """Read back a CSV written by :func:`write_csv`; returns (header, rows of str)."""
    rows = []
    header = None
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = line.split(",")
        else:
            rows.append(line.split(","))
    if header is None:
        raise ValueError(f"{path} has no header row")
    return header, rows


def write_json(path, obj) -> None:
    Path(path).write_text(
        json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8", newline="\n"
    )
