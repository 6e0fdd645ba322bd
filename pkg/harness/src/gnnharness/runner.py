"""Cross-validated training and evaluation.

One benchmark run is: load a (dataset, features) pair, split graphs with
stratified k-fold CV, train the chosen architecture on each training split
and score ROC AUC on the held-out fold.  Fold splits depend only on
(labels, folds, seed), and every fold reseeds torch from (seed, fold), so a
rerun with the same config reproduces the per-fold AUCs exactly.
"""

from __future__ import annotations

import dataclasses
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
import sklearn
import torch
from sklearn.metrics import roc_auc_score
from sklearn.model_selection import StratifiedKFold

from .data import load_corpus
from .errors import ContractError
from .models import ARCHITECTURES, build_model, make_batch

# Protocol choices the benchmark description leaves open; they are fixed
# here and echoed into every result so runs stay comparable.
OPTIMIZER = "adamw"
LOSS = "bce-with-logits"
CONV_ACTIVATION = "tanh"
FOLD_PROTOCOL = "train on k-1 folds, evaluate on the held-out fold, no early stopping"


@dataclass(frozen=True)
class BenchmarkConfig:
    dataset_path: str
    features_path: str
    arch: str
    hidden: int = 64
    layers: int = 3
    k_sort: int = 30
    mlp_hidden: int = 32
    mlp_layers: int = 2
    epochs: int = 100
    lr: float = 1e-4
    weight_decay: float = 5e-2
    batch_size: int = 128
    folds: int = 10
    seed: int = 0
    fold_workers: int = 1
    shuffle_labels: bool = False
    device: str = "cpu"

    def __post_init__(self):
        if self.arch not in ARCHITECTURES:
            known = ", ".join(sorted(ARCHITECTURES))
            raise ContractError(f"unknown architecture {self.arch!r} (known: {known})")
        for name in ("hidden", "layers", "mlp_hidden", "mlp_layers", "epochs",
                     "batch_size", "folds", "fold_workers"):
            if getattr(self, name) < 1:
                raise ContractError(f"{name} must be a positive integer")
        if self.folds < 2:
            raise ContractError("folds must be >= 2")
        if self.k_sort // 2 - 4 < 1:
            raise ContractError(f"k_sort={self.k_sort} too small for the conv head (need >= 10)")
        if self.lr <= 0:
            raise ContractError("lr must be positive")
        if self.weight_decay < 0:
            raise ContractError("weight_decay must be non-negative")


@dataclass(frozen=True)
class BenchmarkResult:
    architecture: str
    scheme: str
    dataset: str
    fold_aucs: tuple
    mean: float
    std: float
    config: dict

    def to_json(self) -> dict:
        return {
            "architecture": self.architecture,
            "scheme": self.scheme,
            "dataset": self.dataset,
            "fold_aucs": list(self.fold_aucs),
            "mean": self.mean,
            "std": self.std,
            "config": self.config,
        }


def fold_assignments(labels: np.ndarray, folds: int, seed: int):
    """Stratified fold splits as a pure function of (labels, folds, seed)."""
    labels = np.asarray(labels)
    counts = np.bincount(labels)
    if counts.min(initial=len(labels)) < folds:
        raise ContractError(
            f"every class needs at least {folds} graphs for {folds}-fold CV "
            f"(class counts: {counts.tolist()})"
        )
    skf = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
    return [(train, test) for train, test in skf.split(np.zeros(len(labels)), labels)]


def _train_fold(job):
    """Train and score one fold; module-level so worker processes can run it."""
    fold, cfg, records, train_idx, test_idx, in_dim = job
    device = torch.device(cfg.device)
    torch.manual_seed(cfg.seed + fold)
    model = build_model(
        cfg.arch,
        in_dim,
        hidden=cfg.hidden,
        layers=cfg.layers,
        k_sort=cfg.k_sort,
        mlp_hidden=cfg.mlp_hidden,
        mlp_layers=cfg.mlp_layers,
    ).to(device)
    optimizer = torch.optim.AdamW(model.parameters(), lr=cfg.lr, weight_decay=cfg.weight_decay)
    loss_fn = torch.nn.BCEWithLogitsLoss()
    shuffler = torch.Generator().manual_seed(cfg.seed + fold)
    train_records = [records[i] for i in train_idx]
    model.train()
    for _ in range(cfg.epochs):
        perm = torch.randperm(len(train_records), generator=shuffler).tolist()
        for start in range(0, len(perm), cfg.batch_size):
            chunk = [train_records[i] for i in perm[start:start + cfg.batch_size]]
            batch = make_batch(chunk).to(device)
            optimizer.zero_grad()
            loss = loss_fn(model(batch), batch.y)
            loss.backward()
            optimizer.step()
    model.eval()
    probs = []
    truth = []
    with torch.no_grad():
        for start in range(0, len(test_idx), cfg.batch_size):
            chunk = [records[i] for i in test_idx[start:start + cfg.batch_size]]
            batch = make_batch(chunk).to(device)
            probs.append(torch.sigmoid(model(batch)).cpu().numpy())
            truth.append(batch.y.cpu().numpy())
    auc = roc_auc_score(np.concatenate(truth), np.concatenate(probs))
    return fold, float(auc)


def _config_echo(cfg: BenchmarkConfig, corpus) -> dict:
    echo = dataclasses.asdict(cfg)
    echo.update(
        optimizer=OPTIMIZER,
        loss=LOSS,
        conv_activation=CONV_ACTIVATION,
        fold_protocol=FOLD_PROTOCOL,
        graphs=len(corpus),
        unused_graphs=corpus.unused_graphs,
        feature_dim=corpus.dim,
        torch_version=torch.__version__,
        sklearn_version=sklearn.__version__,
    )
    return echo


def train_and_evaluate(cfg: BenchmarkConfig) -> BenchmarkResult:
    corpus = load_corpus(cfg.dataset_path, cfg.features_path)
    records = list(corpus.records)
    labels = corpus.labels()
    if cfg.shuffle_labels:
        # No-leakage diagnostic: permute labels over graphs, keep everything else.
        shuffled = np.random.default_rng(cfg.seed).permutation(labels)
        records = [
            dataclasses.replace(rec, label=int(lab)) for rec, lab in zip(records, shuffled)
        ]
        labels = shuffled
    if set(np.unique(labels).tolist()) != {0, 1}:
        raise ContractError(
            f"labels must be binary 0/1, got classes {sorted(np.unique(labels).tolist())}"
        )
    splits = fold_assignments(labels, cfg.folds, cfg.seed)
    jobs = [
        (fold, cfg, records, train_idx, test_idx, corpus.dim)
        for fold, (train_idx, test_idx) in enumerate(splits)
    ]
    if cfg.fold_workers == 1:
        outcomes = [_train_fold(job) for job in jobs]
    else:
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=cfg.fold_workers, mp_context=ctx) as pool:
            outcomes = list(pool.map(_train_fold, jobs))
    outcomes.sort(key=lambda pair: pair[0])
    aucs = tuple(auc for _, auc in outcomes)
    return BenchmarkResult(
        architecture=cfg.arch,
        scheme=corpus.scheme,
        dataset=corpus.dataset_name,
        fold_aucs=aucs,
        mean=float(np.mean(aucs)),
        std=float(np.std(aucs)),
        config=_config_echo(cfg, corpus),
    )


def format_comparison(named_results) -> str:
    """Markdown table from (column label, result) pairs.

    Rows are (dataset, architecture) groups in first-appearance order;
    the best mean AUC in each row is bolded.  Cells show AUC * 100.
    """
    columns = []
    cells = {}
    rows = []
    for label, result in named_results:
        key = (result.dataset, result.architecture)
        if key not in rows:
            rows.append(key)
        if label not in columns:
            columns.append(label)
        if (key, label) in cells:
            raise ContractError(
                f"duplicate run {label!r} for dataset {key[0]!r} and architecture {key[1]!r}"
            )
        cells[(key, label)] = result
    lines = [
        "| dataset | architecture | " + " | ".join(columns) + " |",
        "| --- | --- | " + " | ".join("---" for _ in columns) + " |",
    ]
    for key in rows:
        present = [cells[(key, c)].mean for c in columns if (key, c) in cells]
        best = max(present)
        parts = []
        for label in columns:
            result = cells.get((key, label))
            if result is None:
                parts.append("-")
                continue
            cell = f"{100 * result.mean:.2f} ± {100 * result.std:.2f}"
            parts.append(f"**{cell}**" if result.mean == best else cell)
        lines.append(f"| {key[0]} | {key[1]} | " + " | ".join(parts) + " |")
    return "\n".join(lines) + "\n"


def compare_schemes(runs) -> tuple:
    """Run each (label, config) pair and build the comparison table."""
    named = [(label, train_and_evaluate(cfg)) for label, cfg in runs]
    return [result for _, result in named], format_comparison(named)
