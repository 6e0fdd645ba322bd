"""Benchmark harness: train GNN graph classifiers on node-feature files.

Consumes the canonical dataset and feature file formats, runs stratified
k-fold cross-validation with a sort-pooling classifier over a small zoo of
message-passing layers, and reports per-fold ROC AUC.
"""

from .data import Corpus, GraphRecord, load_corpus, load_dataset_file, load_feature_file
from .errors import ContractError, FormatError, HarnessError
from .models import (
    ARCHITECTURES,
    Batch,
    GraphClassifier,
    SortAggregation,
    build_model,
    make_batch,
)
from .runner import (
    BenchmarkConfig,
    BenchmarkResult,
    compare_schemes,
    fold_assignments,
    format_comparison,
    train_and_evaluate,
)

__version__ = "0.1.0"

__all__ = [
    "ARCHITECTURES",
    "Batch",
    "BenchmarkConfig",
    "BenchmarkResult",
    "ContractError",
    "Corpus",
    "FormatError",
    "GraphClassifier",
    "GraphRecord",
    "HarnessError",
    "SortAggregation",
    "build_model",
    "compare_schemes",
    "fold_assignments",
    "format_comparison",
    "load_corpus",
    "load_dataset_file",
    "load_feature_file",
    "make_batch",
    "train_and_evaluate",
    "__version__",
]
