"""Controllability and centrality node features for unattributed graphs.

The package turns plain graph structure into per-node feature matrices:
finite-horizon average controllability of the adjacency dynamics, classical
centralities, and histogram-rank encodings of either, ready to feed graph
classifiers that expect node attributes.
"""

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
    METRIC_KINDS,
    Gramian,
    Horizon,
    MetricVector,
    average_controllability,
    average_controllability_for_graph,
    gramian_lyapunov,
    gramian_spectral,
    gramian_trapezoid,
    rescale_adjacency,
)
from .encoding import (
    CONCAT_METRICS,
    NCT_EFA_METRICS,
    SCHEMES,
    EncodeDiagnostics,
    FeatureMatrix,
    RankEncodingSpec,
    bin_indices,
    compute_metric,
    concat_rank_features,
    max_degree,
    nct_efa_features,
    one_hot_degree,
    rank_encode,
)
from .errors import (
    ContractError,
    CtrlfeatError,
    DegenerateGraphError,
    IngestError,
    IntegrityError,
    NumericError,
)
from .graphs import (
    DatasetStats,
    Graph,
    GraphDataset,
    IngestDiagnostics,
    adjacency,
    dataset_stats,
    graph_diameter,
    ingest_dataset,
    load_dataset,
    save_dataset,
    shortest_path_lengths,
)
from .pipeline import (
    FeaturizeConfig,
    load_features,
    parse_metric_keys,
    run_featurize,
    run_stats,
)

__version__ = "0.1.0"

__all__ = [
    "AVERAGE_CONTROLLABILITY",
    "BETWEENNESS",
    "CLOSENESS",
    "CONCAT_METRICS",
    "ContractError",
    "CtrlfeatError",
    "DEGREE",
    "DatasetStats",
    "DegenerateGraphError",
    "EIGENVECTOR",
    "EncodeDiagnostics",
    "FeatureMatrix",
    "FeaturizeConfig",
    "Gramian",
    "Graph",
    "GraphDataset",
    "Horizon",
    "IngestDiagnostics",
    "IngestError",
    "IntegrityError",
    "METRIC_KINDS",
    "MetricVector",
    "NCT_EFA_METRICS",
    "NumericError",
    "RankEncodingSpec",
    "SCHEMES",
    "adjacency",
    "average_controllability",
    "average_controllability_for_graph",
    "betweenness_centrality",
    "bin_indices",
    "closeness_centrality",
    "compute_metric",
    "concat_rank_features",
    "dataset_stats",
    "degree_vector",
    "eigenvector_centrality",
    "graph_diameter",
    "gramian_lyapunov",
    "gramian_spectral",
    "gramian_trapezoid",
    "ingest_dataset",
    "load_dataset",
    "load_features",
    "max_degree",
    "nct_efa_features",
    "one_hot_degree",
    "parse_metric_keys",
    "rank_encode",
    "rescale_adjacency",
    "run_featurize",
    "run_stats",
    "save_dataset",
    "shortest_path_lengths",
    "__version__",
]
