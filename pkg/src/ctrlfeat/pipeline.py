"""Batch featurization over a dataset, feature-file IO and stats reports.

Feature files are line-oriented JSON: a versioned meta line describing the
scheme and its parameters, then one record per graph in ascending id order.
Output bytes are deterministic: records are written in dataset order no
matter how many worker processes computed them, and floats serialise via
Python's shortest round-trip repr.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .control import (
    AVERAGE_CONTROLLABILITY,
    BETWEENNESS,
    CLOSENESS,
    DEGREE,
    EIGENVECTOR,
    GRAMIAN_METHODS,
    Horizon,
)
from .encoding import (
    CONCAT_METRICS,
    NCT_EFA_METRICS,
    SCHEME_AC_RANK,
    SCHEME_CONCAT_RANK,
    SCHEME_DEG_ONEHOT,
    SCHEME_NCT_EFA,
    SCHEMES,
    EncodeDiagnostics,
    RankEncodingSpec,
    concat_rank_features,
    max_degree,
    nct_efa_features,
    one_hot_degree,
    rank_encode,
    compute_metric,
)
from .errors import ContractError, CtrlfeatError, IngestError
from .graphs import DatasetStats, Graph, GraphDataset, dataset_stats, load_dataset

log = logging.getLogger(__name__)

FEATURE_FORMAT_VERSION = 1

# Short metric keys used on the command line and in feature-file metadata.
METRIC_KEYS = {
    "ac": AVERAGE_CONTROLLABILITY,
    "deg": DEGREE,
    "clo": CLOSENESS,
    "bet": BETWEENNESS,
    "eig": EIGENVECTOR,
}
KIND_TO_KEY = {kind: key for key, kind in METRIC_KEYS.items()}


def parse_metric_keys(spec: str) -> tuple[str, ...]:
    """Turn a comma-separated key list like ``ac,deg,clo`` into metric kinds."""
    kinds = []
    for key in spec.split(","):
        key = key.strip()
        if key not in METRIC_KEYS:
            raise ContractError(
                f"unknown metric key {key!r}, expected a comma-separated subset "
                f"of {','.join(METRIC_KEYS)}"
            )
        kinds.append(METRIC_KEYS[key])
    if len(set(kinds)) != len(kinds):
        raise ContractError(f"duplicate metric key in {spec!r}")
    return tuple(kinds)


@dataclass(frozen=True)
class FeaturizeConfig:
    """Everything one featurization run depends on."""

    dataset_path: str
    out_path: str
    scheme: str
    k: int = 10
    horizon: float = 1.0
    step: float = 0.001
    method: str = "spectral"
    metrics: tuple[str, ...] | None = None
    rescale_spectral: bool = False
    standardize: bool = False
    workers: int = 1
    skip_errors: bool = False

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ContractError(f"unknown scheme {self.scheme!r}, expected one of {SCHEMES}")
        if self.method not in GRAMIAN_METHODS:
            raise ContractError(
                f"unknown Gramian method {self.method!r}, expected one of {GRAMIAN_METHODS}"
            )
        if not isinstance(self.k, int) or self.k < 1:
            raise ContractError(f"k must be a positive integer, got {self.k!r}")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ContractError(f"workers must be a positive integer, got {self.workers!r}")
        if self.metrics is not None:
            if self.scheme not in (SCHEME_NCT_EFA, SCHEME_CONCAT_RANK):
                raise ContractError(f"--metrics does not apply to scheme {self.scheme}")
            object.__setattr__(self, "metrics", tuple(self.metrics))
        if self.standardize and self.scheme != SCHEME_NCT_EFA:
            raise ContractError("--standardize applies only to the nct-efa scheme")
        # Validates T/step consistency early rather than inside workers.
        Horizon(self.horizon, self.step)

    def resolved_metrics(self) -> tuple[str, ...]:
        if self.metrics is not None:
            return self.metrics
        if self.scheme == SCHEME_NCT_EFA:
            return NCT_EFA_METRICS
        if self.scheme == SCHEME_CONCAT_RANK:
            return CONCAT_METRICS
        if self.scheme == SCHEME_AC_RANK:
            return (AVERAGE_CONTROLLABILITY,)
        return (DEGREE,)


class _WorkerParams(NamedTuple):
    scheme: str
    k: int
    horizon: float
    step: float
    method: str
    metrics: tuple[str, ...]
    rescale: bool
    dim: int


def _featurize_one(g: Graph, params: _WorkerParams):
    """Compute one graph's feature block; runs in worker processes."""
    diag = EncodeDiagnostics()
    horizon = Horizon(params.horizon, params.step)
    try:
        if params.scheme == SCHEME_DEG_ONEHOT:
            fm = one_hot_degree(g, params.dim, diag=diag)
        elif params.scheme == SCHEME_NCT_EFA:
            fm = nct_efa_features(
                g, horizon=horizon, metrics=params.metrics,
                method=params.method, rescale=params.rescale, diag=diag,
            )
        elif params.scheme == SCHEME_AC_RANK:
            m = compute_metric(
                g, AVERAGE_CONTROLLABILITY, horizon=horizon,
                method=params.method, rescale=params.rescale, diag=diag,
            )
            fm = rank_encode(m, RankEncodingSpec(params.k), graph_id=g.id)
        else:
            fm = concat_rank_features(
                g, spec=RankEncodingSpec(params.k), horizon=horizon,
                metrics=params.metrics, method=params.method,
                rescale=params.rescale, diag=diag,
            )
        return ("ok", g.id, fm.matrix, diag.as_dict())
    except CtrlfeatError as e:
        return ("err", g.id, e, diag.as_dict())


def _scheme_dim(cfg: FeaturizeConfig, ds: GraphDataset) -> int:
    if cfg.scheme == SCHEME_DEG_ONEHOT:
        return max_degree(ds.graphs) + 1
    if cfg.scheme == SCHEME_NCT_EFA:
        return len(cfg.resolved_metrics())
    if cfg.scheme == SCHEME_AC_RANK:
        return cfg.k
    return cfg.k * len(cfg.resolved_metrics())


def _feature_meta(cfg: FeaturizeConfig, ds: GraphDataset, dim: int) -> dict:
    uses_k = cfg.scheme in (SCHEME_AC_RANK, SCHEME_CONCAT_RANK)
    return {
        "meta": {
            "format_version": FEATURE_FORMAT_VERSION,
            "scheme": cfg.scheme,
            "dim": dim,
            "k": cfg.k if uses_k else None,
            "metrics": [KIND_TO_KEY[kind] for kind in cfg.resolved_metrics()],
            "horizon": cfg.horizon,
            "step": cfg.step,
            "dataset": ds.name,
        }
    }


def run_featurize(cfg: FeaturizeConfig) -> dict:
    """Featurize every graph of a dataset and write feature + manifest files.

    Returns the manifest (also written next to the output as
    ``<out>.manifest.json``). With ``skip_errors`` graphs that fail stay out
    of the output and their ids land in the manifest; otherwise the first
    failure is raised.
    """
    t0 = time.perf_counter()
    ds = load_dataset(cfg.dataset_path)
    dim = _scheme_dim(cfg, ds)
    params = _WorkerParams(
        scheme=cfg.scheme, k=cfg.k, horizon=cfg.horizon, step=cfg.step,
        method=cfg.method, metrics=cfg.resolved_metrics(),
        rescale=cfg.rescale_spectral, dim=dim,
    )
    work = partial(_featurize_one, params=params)
    if cfg.workers == 1:
        results = [work(g) for g in ds.graphs]
    else:
        chunk = max(1, len(ds) // (cfg.workers * 8))
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(work, ds.graphs, chunksize=chunk))

    diagnostics = EncodeDiagnostics()
    failed: list[int] = []
    rows: list[tuple[int, np.ndarray]] = []
    for status, gid, payload, diag in results:
        diagnostics.degrees_clipped += diag["degrees_clipped"]
        diagnostics.eigenvector_fallbacks += diag["eigenvector_fallbacks"]
        if status == "err":
            if not cfg.skip_errors:
                if f"graph {gid}" in str(payload):
                    raise payload
                raise type(payload)(f"graph {gid}: {payload}") from payload
            log.warning("graph %d skipped: %s", gid, payload)
            failed.append(gid)
            continue
        if payload.shape[1] != dim:
            raise ContractError(
                f"graph {gid}: feature width {payload.shape[1]} does not match scheme dim {dim}"
            )
        rows.append((gid, payload))

    if cfg.standardize and rows:
        stacked = np.vstack([m for _, m in rows])
        mean = stacked.mean(axis=0)
        std = stacked.std(axis=0)
        std[std == 0.0] = 1.0
        rows = [(gid, (m - mean) / std) for gid, m in rows]

    out_path = Path(cfg.out_path)
    with open(out_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(_feature_meta(cfg, ds, dim), separators=(",", ":")) + "\n")
        for gid, matrix in rows:
            rec = {
                "id": gid,
                "label": ds.labels[gid],
                "n": matrix.shape[0],
                "x": matrix.tolist(),
            }
            f.write(json.dumps(rec, separators=(",", ":")) + "\n")

    manifest = {
        "config": {
            "dataset_path": cfg.dataset_path,
            "out_path": cfg.out_path,
            "scheme": cfg.scheme,
            "k": cfg.k,
            "horizon": cfg.horizon,
            "step": cfg.step,
            "method": cfg.method,
            "metrics": [KIND_TO_KEY[kind] for kind in cfg.resolved_metrics()],
            "rescale_spectral": cfg.rescale_spectral,
            "standardize": cfg.standardize,
            "workers": cfg.workers,
            "skip_errors": cfg.skip_errors,
        },
        "package_version": _package_version(),
        "dataset": ds.name,
        "dim": dim,
        "graphs_written": len(rows),
        "graphs_failed": failed,
        "diagnostics": diagnostics.as_dict(),
        "wall_time_s": round(time.perf_counter() - t0, 3),
    }
    manifest_path = out_path.with_name(out_path.name + ".manifest.json")
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")
    log.info(
        "featurized %d graphs (%s, dim %d) in %.2fs -> %s",
        len(rows), cfg.scheme, dim, manifest["wall_time_s"], out_path,
    )
    return manifest


def load_features(path: str | Path) -> tuple[dict, list[dict]]:
    """Read a feature file back into its meta dict and record list."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise IngestError(f"cannot read {path}: {e}") from e
    if not lines:
        raise IngestError(f"{path}: empty file, expected a meta line")
    try:
        head = json.loads(lines[0])
    except json.JSONDecodeError as e:
        raise IngestError(f"{path}: line 1: malformed JSON: {e.msg}") from e
    meta = head.get("meta") if isinstance(head, dict) else None
    if not isinstance(meta, dict):
        raise IngestError(f"{path}: first line must carry a 'meta' object")
    if meta.get("format_version") != FEATURE_FORMAT_VERSION:
        raise IngestError(f"{path}: unsupported format_version {meta.get('format_version')!r}")
    records = []
    for lineno, text in enumerate(lines[1:], start=2):
        if not text.strip():
            continue
        try:
            rec = json.loads(text)
        except json.JSONDecodeError as e:
            raise IngestError(f"{path}: line {lineno}: malformed JSON: {e.msg}") from e
        for key in ("id", "label", "n", "x"):
            if key not in rec:
                raise IngestError(f"{path}: line {lineno}: record is missing '{key}'")
        if len(rec["x"]) != rec["n"]:
            raise IngestError(
                f"{path}: line {lineno}: graph {rec['id']} has {rec['n']} nodes "
                f"but {len(rec['x'])} feature rows"
            )
        for row in rec["x"]:
            if len(row) != meta["dim"]:
                raise IngestError(
                    f"{path}: line {lineno}: graph {rec['id']} row width {len(row)} "
                    f"does not match dim {meta['dim']}"
                )
        records.append(rec)
    ids = [r["id"] for r in records]
    if any(b <= a for a, b in zip(ids, ids[1:])):
        raise IngestError(f"{path}: record ids must be strictly ascending")
    return meta, records


def _package_version() -> str:
    from . import __version__

    return __version__


def format_stats_table(stats: DatasetStats) -> str:
    """Render one dataset's statistics as an aligned two-line table."""
    headers = [
        "dataset", "graphs", "nodes.min", "nodes.max", "nodes.mean",
        "nodes.median", "density.min", "density.max", "diam.min",
        "diam.max", "classes",
    ]
    values = [
        stats.name, str(stats.graph_count), str(stats.node_min), str(stats.node_max),
        f"{stats.node_mean:.2f}", str(stats.node_median),
        f"{stats.density_min:.3f}", f"{stats.density_max:.3f}",
        str(stats.diameter_min), str(stats.diameter_max), str(stats.class_count),
    ]
    widths = [max(len(h), len(v)) for h, v in zip(headers, values)]
    head = "  ".join(h.rjust(w) for h, w in zip(headers, widths))
    row = "  ".join(v.rjust(w) for v, w in zip(values, widths))
    return head + "\n" + row


def run_stats(dataset_path: str | Path) -> tuple[DatasetStats, str]:
    """Load a dataset and summarise it; returns the stats and a rendered table."""
    ds = load_dataset(dataset_path)
    stats = dataset_stats(ds)
    return stats, format_stats_table(stats)
