"""Node feature encodings: one-hot degree, raw metric columns, rank histograms.

The rank encoding turns a per-node metric into a k-dimensional one-hot row
by histogramming the metric over ``k`` equal-width bins spanning that
graph's own min..max range. Only the ordering and relative spacing of the
values survive, which makes the encoding invariant to positive rescaling
of the metric.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .centrality import (
    betweenness_centrality,
    closeness_centrality,
    degree_vector,
    eigenvector_centrality,
)
from .control import (
    AVERAGE_CONTROLLABILITY,
    BETWEENNESS,
    CLOSENESS,
    DEGREE,
    EIGENVECTOR,
    METHOD_SPECTRAL,
    METRIC_KINDS,
    Horizon,
    MetricVector,
    average_controllability_for_graph,
)
from .errors import ContractError, DegenerateGraphError, NumericError
from .graphs import Graph

log = logging.getLogger(__name__)

SCHEME_DEG_ONEHOT = "deg-onehot"
SCHEME_NCT_EFA = "nct-efa"
SCHEME_AC_RANK = "ac-rank"
SCHEME_CONCAT_RANK = "concat-rank"
SCHEMES = (SCHEME_DEG_ONEHOT, SCHEME_NCT_EFA, SCHEME_AC_RANK, SCHEME_CONCAT_RANK)

# Column order of the raw four-metric scheme and the default rank-encoded
# concatenation (which adds degree).
NCT_EFA_METRICS = (AVERAGE_CONTROLLABILITY, CLOSENESS, BETWEENNESS, EIGENVECTOR)
CONCAT_METRICS = (AVERAGE_CONTROLLABILITY, DEGREE, CLOSENESS, BETWEENNESS, EIGENVECTOR)


@dataclass(frozen=True)
class RankEncodingSpec:
    """Number of histogram bins for the rank encoding."""

    k: int = 10

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ContractError(f"rank encoding needs k >= 1, got {self.k!r}")


@dataclass(frozen=True)
class FeatureMatrix:
    """A per-node feature block: one row per node, tagged with its scheme."""

    graph_id: int
    scheme: str
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2:
            raise ContractError(f"feature matrix must be two-dimensional, got shape {m.shape}")
        if not np.isfinite(m).all():
            raise NumericError(
                f"graph {self.graph_id}: {self.scheme} features contain non-finite entries"
            )
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]


@dataclass
class EncodeDiagnostics:
    """Counts of lossy fallbacks applied during feature construction."""

    degrees_clipped: int = 0
    eigenvector_fallbacks: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "degrees_clipped": self.degrees_clipped,
            "eigenvector_fallbacks": self.eigenvector_fallbacks,
        }


def bin_indices(values: np.ndarray, k: int) -> np.ndarray:
    """Equal-width histogram bin index of each value over its own min..max.

    Bins are half-open except the last, which also takes the maximum, so
    every value lands in ``0..k-1``.

    Two guards keep the discretisation independent of node labelling, which
    matters because metric values carry ulp-level noise that varies with
    visit order:

    * a range at round-off scale (1e-12 relative) counts as constant and
      maps entirely to bin 0, covering metrics that are mathematically tied
      across all nodes (vertex-transitive graphs);
    * positions within 1e-9 bins of a boundary snap onto it before
      flooring, so a value that mathematically sits exactly on a boundary
      always takes the upper bin instead of whichever side its noise fell.
    """
    values = np.asarray(values, dtype=float)
    lo = values.min()
    hi = values.max()
    if hi - lo <= 1e-12 * max(abs(lo), abs(hi)):
        return np.zeros(len(values), dtype=int)
    pos = (values - lo) * (k / (hi - lo))
    near = np.rint(pos)
    pos = np.where(np.abs(pos - near) <= 1e-9, near, pos)
    return np.clip(np.floor(pos).astype(int), 0, k - 1)


def rank_encode(m: MetricVector, spec: RankEncodingSpec, graph_id: int = -1) -> FeatureMatrix:
    """One-hot of each node's histogram bin; rows sum to one."""
    idx = bin_indices(m.values, spec.k)
    x = np.zeros((len(m), spec.k))
    x[np.arange(len(m)), idx] = 1.0
    scheme = SCHEME_AC_RANK if m.kind == AVERAGE_CONTROLLABILITY else f"{m.kind}-rank"
    return FeatureMatrix(graph_id=graph_id, scheme=scheme, matrix=x)


def max_degree(graphs) -> int:
    """Largest degree over a collection of graphs, 0 if all are edgeless."""
    best = 0
    for g in graphs:
        if g.num_edges:
            best = max(best, int(g.degrees().max()))
    return best


def one_hot_degree(g: Graph, dim: int, diag: EncodeDiagnostics | None = None) -> FeatureMatrix:
    """One-hot of each node's degree in ``dim`` slots.

    ``dim`` is normally ``max_degree(dataset) + 1``. Degrees beyond the last
    slot are clipped into it with a counted diagnostic rather than an error,
    so a fixed dim stays usable on unseen graphs.
    """
    if dim < 1:
        raise ContractError(f"one-hot degree needs dim >= 1, got {dim}")
    deg = g.degrees().astype(int)
    clipped = int((deg > dim - 1).sum())
    if clipped:
        if diag is not None:
            diag.degrees_clipped += clipped
        log.info("graph %d: clipped %d node degrees into one-hot slot %d", g.id, clipped, dim - 1)
    idx = np.minimum(deg, dim - 1)
    x = np.zeros((g.n, dim))
    x[np.arange(g.n), idx] = 1.0
    return FeatureMatrix(graph_id=g.id, scheme=SCHEME_DEG_ONEHOT, matrix=x)


def compute_metric(
    g: Graph,
    kind: str,
    horizon: Horizon = Horizon(),
    method: str = METHOD_SPECTRAL,
    rescale: bool = False,
    diag: EncodeDiagnostics | None = None,
) -> MetricVector:
    """Dispatch a metric kind to its producer.

    Inside feature construction an edgeless graph gets an all-zero
    eigenvector column (counted diagnostic) instead of the error the
    standalone function raises, so mixed corpora still featurise.
    """
    if kind == AVERAGE_CONTROLLABILITY:
        return average_controllability_for_graph(g, horizon=horizon, method=method, rescale=rescale)
    if kind == DEGREE:
        return degree_vector(g)
    if kind == CLOSENESS:
        return closeness_centrality(g)
    if kind == BETWEENNESS:
        return betweenness_centrality(g)
    if kind == EIGENVECTOR:
        try:
            return eigenvector_centrality(g)
        except DegenerateGraphError:
            if diag is not None:
                diag.eigenvector_fallbacks += 1
            log.info("graph %d: edgeless, eigenvector column set to zeros", g.id)
            return MetricVector(kind=EIGENVECTOR, values=np.zeros(g.n))
    raise ContractError(f"unknown metric kind {kind!r}")


def _check_metrics(metrics) -> tuple[str, ...]:
    metrics = tuple(metrics)
    if not metrics:
        raise ContractError("metric list must not be empty")
    for kind in metrics:
        if kind not in METRIC_KINDS:
            raise ContractError(f"unknown metric kind {kind!r}")
    if len(set(metrics)) != len(metrics):
        raise ContractError(f"duplicate metric kind in {metrics!r}")
    return metrics


def nct_efa_features(
    g: Graph,
    horizon: Horizon = Horizon(),
    metrics=NCT_EFA_METRICS,
    method: str = METHOD_SPECTRAL,
    rescale: bool = False,
    diag: EncodeDiagnostics | None = None,
) -> FeatureMatrix:
    """Raw metric values side by side, one column per metric."""
    metrics = _check_metrics(metrics)
    cols = [
        compute_metric(g, kind, horizon=horizon, method=method, rescale=rescale, diag=diag).values
        for kind in metrics
    ]
    return FeatureMatrix(graph_id=g.id, scheme=SCHEME_NCT_EFA, matrix=np.column_stack(cols))


def concat_rank_features(
    g: Graph,
    spec: RankEncodingSpec = RankEncodingSpec(),
    horizon: Horizon = Horizon(),
    metrics=CONCAT_METRICS,
    method: str = METHOD_SPECTRAL,
    rescale: bool = False,
    diag: EncodeDiagnostics | None = None,
) -> FeatureMatrix:
    """Rank-encode each metric separately and concatenate the blocks.

    With ``k`` bins and ``p`` metrics the width is ``k * p`` and every row
    sums to ``p`` (one hot bin per block).
    """
    metrics = _check_metrics(metrics)
    blocks = [
        rank_encode(
            compute_metric(g, kind, horizon=horizon, method=method, rescale=rescale, diag=diag),
            spec,
            graph_id=g.id,
        ).matrix
        for kind in metrics
    ]
    return FeatureMatrix(graph_id=g.id, scheme=SCHEME_CONCAT_RANK, matrix=np.hstack(blocks))
