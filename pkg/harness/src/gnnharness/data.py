"""Reading and joining canonical dataset and feature files.

Both inputs are JSON-lines files whose first line is a ``{"meta": ...}``
object.  The dataset file carries graph structure and labels; the feature
file carries one node-feature matrix per graph.  This module parses both
independently and joins them by graph id, cross-checking node counts and
labels so a mismatched pairing fails loudly instead of training on garbage.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import FormatError

FORMAT_VERSION = 1


@dataclass(frozen=True)
class GraphRecord:
    """One graph ready for batching: structure, label and node features."""

    id: int
    n: int
    edges: tuple  # tuple of (u, v) with u < v
    label: int
    x: np.ndarray  # (n, dim) float32

    @property
    def num_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Corpus:
    """Joined dataset: records in ascending graph-id order."""

    dataset_name: str
    scheme: str
    dim: int
    feature_meta: dict
    records: tuple
    unused_graphs: int  # dataset graphs with no feature record

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def labels(self) -> np.ndarray:
        return np.array([r.label for r in self.records], dtype=np.int64)


def _read_jsonl(path):
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as e:
        raise FormatError(f"cannot open {path}: {e}") from e
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as e:
                raise FormatError(f"{path}:{lineno}: invalid JSON ({e.msg})") from e


def _check_meta(obj, lineno, path) -> dict:
    if not isinstance(obj, dict) or "meta" not in obj:
        raise FormatError(f"{path}:{lineno}: expected a meta line first")
    meta = obj["meta"]
    if not isinstance(meta, dict):
        raise FormatError(f"{path}:{lineno}: meta must be an object")
    if meta.get("format_version") != FORMAT_VERSION:
        raise FormatError(
            f"{path}:{lineno}: unsupported format_version {meta.get('format_version')!r}"
        )
    return meta


def _require_int(obj, key, lineno, path, minimum=None) -> int:
    value = obj.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise FormatError(f"{path}:{lineno}: field {key!r} must be an integer")
    if minimum is not None and value < minimum:
        raise FormatError(f"{path}:{lineno}: field {key!r} must be >= {minimum}")
    return value


def load_dataset_file(path):
    """Parse a canonical dataset file.

    Returns ``(name, entries)`` where entries maps graph id to a
    ``(n, edges, label)`` triple.  Edges are normalised to sorted
    ``(u, v)`` pairs with u < v.
    """
    name = None
    entries: dict = {}
    last_id = -1
    for lineno, obj in _read_jsonl(path):
        if name is None:
            meta = _check_meta(obj, lineno, path)
            name = meta.get("name")
            if not isinstance(name, str) or not name:
                raise FormatError(f"{path}:{lineno}: meta is missing a dataset name")
            continue
        gid = _require_int(obj, "id", lineno, path, minimum=0)
        if gid <= last_id:
            raise FormatError(f"{path}:{lineno}: graph ids must be strictly ascending")
        last_id = gid
        n = _require_int(obj, "n", lineno, path, minimum=1)
        label = _require_int(obj, "label", lineno, path, minimum=0)
        raw_edges = obj.get("edges")
        if not isinstance(raw_edges, list):
            raise FormatError(f"{path}:{lineno}: field 'edges' must be a list")
        edges = []
        seen = set()
        for pair in raw_edges:
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in pair)
            ):
                raise FormatError(f"{path}:{lineno}: edges must be [u, v] integer pairs")
            u, v = pair
            if not (0 <= u < n and 0 <= v < n):
                raise FormatError(f"{path}:{lineno}: edge [{u}, {v}] out of range for n={n}")
            if u == v:
                raise FormatError(f"{path}:{lineno}: self-loop [{u}, {v}]")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise FormatError(f"{path}:{lineno}: duplicate edge [{u}, {v}]")
            seen.add(key)
            edges.append(key)
        entries[gid] = (n, tuple(sorted(edges)), label)
    if name is None:
        raise FormatError(f"{path}: empty file")
    if not entries:
        raise FormatError(f"{path}: contains no graphs")
    return name, entries


def load_feature_file(path):
    """Parse a feature file into ``(meta, records)``.

    Each record is ``(id, label, n, x)`` with x a float32 array whose row
    width must equal the dim announced in the metadata line.
    """
    meta = None
    records = []
    last_id = -1
    for lineno, obj in _read_jsonl(path):
        if meta is None:
            meta = _check_meta(obj, lineno, path)
            scheme = meta.get("scheme")
            if not isinstance(scheme, str) or not scheme:
                raise FormatError(f"{path}:{lineno}: meta is missing the encoding scheme")
            if not isinstance(meta.get("dim"), int) or meta["dim"] < 1:
                raise FormatError(f"{path}:{lineno}: meta dim must be a positive integer")
            continue
        gid = _require_int(obj, "id", lineno, path, minimum=0)
        if gid <= last_id:
            raise FormatError(f"{path}:{lineno}: graph ids must be strictly ascending")
        last_id = gid
        label = _require_int(obj, "label", lineno, path, minimum=0)
        n = _require_int(obj, "n", lineno, path, minimum=1)
        rows = obj.get("x")
        if not isinstance(rows, list) or len(rows) != n:
            raise FormatError(f"{path}:{lineno}: graph {gid}: expected {n} feature rows")
        for row in rows:
            if not isinstance(row, list) or len(row) != meta["dim"]:
                raise FormatError(
                    f"{path}:{lineno}: graph {gid}: row width differs from meta dim {meta['dim']}"
                )
        x = np.asarray(rows, dtype=np.float32)
        if not np.all(np.isfinite(x)):
            raise FormatError(f"{path}:{lineno}: graph {gid}: non-finite feature value")
        records.append((gid, label, n, x))
    if meta is None:
        raise FormatError(f"{path}: empty file")
    if not records:
        raise FormatError(f"{path}: contains no graphs")
    return meta, records


def load_corpus(dataset_path, features_path) -> Corpus:
    """Join a dataset file with a feature file produced from it.

    Every feature record must match a dataset graph with the same id,
    node count and label.  Dataset graphs without features (for example
    graphs dropped by the featurizer) are skipped and counted.
    """
    name, entries = load_dataset_file(dataset_path)
    meta, feature_records = load_feature_file(features_path)
    source = meta.get("dataset")
    if isinstance(source, str) and source != name:
        raise FormatError(
            f"feature file was built from dataset {source!r} but {dataset_path} is named {name!r}"
        )
    records = []
    for gid, label, n, x in feature_records:
        if gid not in entries:
            raise FormatError(f"feature file references graph id {gid} absent from the dataset")
        ds_n, edges, ds_label = entries[gid]
        if n != ds_n:
            raise FormatError(f"graph {gid}: feature file says n={n}, dataset says n={ds_n}")
        if label != ds_label:
            raise FormatError(
                f"graph {gid}: feature file label {label} differs from dataset label {ds_label}"
            )
        records.append(GraphRecord(id=gid, n=n, edges=edges, label=label, x=x))
    return Corpus(
        dataset_name=name,
        scheme=meta["scheme"],
        dim=meta["dim"],
        feature_meta=dict(meta),
        records=tuple(records),
        unused_graphs=len(entries) - len(records),
    )
