"""Command-line interface.

Exit codes: 0 success, 2 configuration or contract violation, 3 input
file problem.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

import tomli

from .errors import ContractError, FormatError
from .models import ARCHITECTURES
from .runner import BenchmarkConfig, format_comparison, train_and_evaluate

# TOML keys shared by [defaults] and [[run]]; "label" names the table column.
_SPEC_KEYS = {
    "dataset", "features", "arch", "hidden", "layers", "k_sort", "mlp_hidden",
    "mlp_layers", "epochs", "lr", "weight_decay", "batch_size", "folds",
    "seed", "fold_workers", "shuffle_labels", "device", "label",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gnnharness",
        description="Graph-classification benchmarks over node-feature files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bench = sub.add_parser("bench", help="run one cross-validated benchmark")
    p_bench.add_argument("--dataset", required=True, help="canonical dataset path (.jsonl)")
    p_bench.add_argument("--features", required=True, help="feature file path (.jsonl)")
    p_bench.add_argument("--arch", required=True, choices=sorted(ARCHITECTURES))
    p_bench.add_argument("--hidden", type=int, default=64, help="conv layer width (default 64)")
    p_bench.add_argument("--layers", type=int, default=3, help="conv layer count (default 3)")
    p_bench.add_argument("--k-sort", type=int, default=30, help="sort-pooling length (default 30)")
    p_bench.add_argument("--mlp-hidden", type=int, default=32)
    p_bench.add_argument("--mlp-layers", type=int, default=2)
    p_bench.add_argument("--epochs", type=int, default=100)
    p_bench.add_argument("--lr", type=float, default=1e-4)
    p_bench.add_argument("--weight-decay", type=float, default=5e-2)
    p_bench.add_argument("--batch-size", type=int, default=128)
    p_bench.add_argument("--folds", type=int, default=10)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--fold-workers", type=int, default=1, help="folds trained in parallel")
    p_bench.add_argument(
        "--shuffle-labels", action="store_true",
        help="permute labels before splitting (no-leakage diagnostic, expect AUC near 0.5)",
    )
    p_bench.add_argument("--device", default="cpu", help="torch device (default cpu)")
    p_bench.add_argument("--out", required=True, help="result JSON path")
    p_bench.set_defaults(func=cmd_bench)

    p_cmp = sub.add_parser("compare", help="run several benchmarks and tabulate them")
    p_cmp.add_argument("--spec", required=True, help="TOML file with [defaults] and [[run]] tables")
    p_cmp.add_argument("--out", required=True, help="markdown table path")
    p_cmp.add_argument("--results-dir", default=None, help="also save one result JSON per run")
    p_cmp.set_defaults(func=cmd_compare)
    return parser


def _save_result(result, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(result.to_json(), fh, indent=2)
        fh.write("\n")


def cmd_bench(args) -> int:
    cfg = BenchmarkConfig(
        dataset_path=args.dataset,
        features_path=args.features,
        arch=args.arch,
        hidden=args.hidden,
        layers=args.layers,
        k_sort=args.k_sort,
        mlp_hidden=args.mlp_hidden,
        mlp_layers=args.mlp_layers,
        epochs=args.epochs,
        lr=args.lr,
        weight_decay=args.weight_decay,
        batch_size=args.batch_size,
        folds=args.folds,
        seed=args.seed,
        fold_workers=args.fold_workers,
        shuffle_labels=args.shuffle_labels,
        device=args.device,
    )
    result = train_and_evaluate(cfg)
    _save_result(result, args.out)
    print(
        f"{result.architecture} on {result.dataset} [{result.scheme}]: "
        f"AUC {100 * result.mean:.2f} ± {100 * result.std:.2f} over {cfg.folds} folds "
        f"-> {args.out}"
    )
    return 0


def _load_spec(path) -> list:
    try:
        with open(path, "rb") as fh:
            doc = tomli.load(fh)
    except OSError as e:
        raise FormatError(f"cannot open {path}: {e}") from e
    except tomli.TOMLDecodeError as e:
        raise FormatError(f"{path}: invalid TOML ({e})") from e
    defaults = doc.get("defaults", {})
    entries = doc.get("run")
    if not isinstance(entries, list) or not entries:
        raise ContractError(f"{path}: spec needs at least one [[run]] table")
    for scope, table in [("defaults", defaults)] + [("run", e) for e in entries]:
        if not isinstance(table, dict):
            raise ContractError(f"{path}: [{scope}] must be a table")
        unknown = set(table) - _SPEC_KEYS
        if unknown:
            raise ContractError(f"{path}: unknown key(s) in [{scope}]: {', '.join(sorted(unknown))}")
    if "features" in defaults:
        raise ContractError(f"{path}: 'features' must be set per run, not in [defaults]")
    runs = []
    for i, entry in enumerate(entries, start=1):
        merged = {**defaults, **entry}
        label = merged.pop("label", None)
        for required in ("dataset", "features", "arch"):
            if required not in merged:
                raise ContractError(f"{path}: run {i} is missing {required!r}")
        merged["dataset_path"] = merged.pop("dataset")
        merged["features_path"] = merged.pop("features")
        try:
            cfg = BenchmarkConfig(**merged)
        except TypeError as e:
            raise ContractError(f"{path}: run {i}: {e}") from e
        runs.append((label, cfg))
    return runs


def cmd_compare(args) -> int:
    runs = _load_spec(args.spec)
    if args.results_dir:
        os.makedirs(args.results_dir, exist_ok=True)
    named = []
    for i, (label, cfg) in enumerate(runs, start=1):
        print(f"run {i}/{len(runs)}: {cfg.arch} on {cfg.features_path} ...", flush=True)
        result = train_and_evaluate(cfg)
        name = label if label is not None else result.scheme
        named.append((name, result))
        print(f"  AUC {100 * result.mean:.2f} ± {100 * result.std:.2f}")
        if args.results_dir:
            slug = re.sub(r"[^A-Za-z0-9._-]+", "-", name)
            _save_result(result, f"{args.results_dir}/run-{i:02d}-{result.architecture}-{slug}.json")
    table = format_comparison(named)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(table)
    print(f"wrote {args.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ContractError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except FormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
