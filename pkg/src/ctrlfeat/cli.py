"""Command-line interface.

Exit codes: 0 success, 2 configuration or contract violation, 3 input file
problem, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import ContractError, IngestError, NumericError
from .graphs import IngestDiagnostics, ingest_dataset, save_dataset
from .pipeline import FeaturizeConfig, parse_metric_keys, run_featurize, run_stats

log = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctrlfeat",
        description="Controllability and centrality node features for graph datasets.",
    )
    parser.add_argument("--quiet", action="store_true", help="only warnings and errors")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ing = sub.add_parser("ingest", help="convert raw edge/label files to the canonical dataset format")
    p_ing.add_argument("--edges", required=True, help="JSON object mapping graph ids to edge lists")
    p_ing.add_argument("--labels", required=True, help="CSV with id and target columns")
    p_ing.add_argument("--name", required=True, help="dataset name stored in the meta line")
    p_ing.add_argument("--out", required=True, help="output dataset path (.jsonl)")
    p_ing.set_defaults(func=cmd_ingest)

    p_sta = sub.add_parser("stats", help="summarise a canonical dataset")
    p_sta.add_argument("--dataset", required=True, help="canonical dataset path")
    p_sta.set_defaults(func=cmd_stats)

    p_fea = sub.add_parser("featurize", help="compute node features for every graph")
    p_fea.add_argument("--dataset", required=True, help="canonical dataset path")
    p_fea.add_argument(
        "--scheme", required=True,
        choices=["deg-onehot", "nct-efa", "ac-rank", "concat-rank"],
    )
    p_fea.add_argument("--k", type=int, default=10, help="histogram bins for rank schemes (default 10)")
    p_fea.add_argument("--horizon", type=float, default=1.0, help="integration horizon T (default 1.0)")
    p_fea.add_argument("--step", type=float, default=0.001, help="quadrature step (default 0.001)")
    p_fea.add_argument(
        "--method", choices=["spectral", "trapezoid"], default="spectral",
        help="Gramian computation path (default spectral)",
    )
    p_fea.add_argument(
        "--metrics", default=None,
        help="comma-separated subset of ac,deg,clo,bet,eig (nct-efa and concat-rank only)",
    )
    p_fea.add_argument(
        "--rescale-spectral", action="store_true",
        help="divide the adjacency by 1 + lambda_max before integrating",
    )
    p_fea.add_argument(
        "--standardize", action="store_true",
        help="zero-mean unit-variance columns (nct-efa only)",
    )
    p_fea.add_argument("--threads", type=int, default=1, help="worker processes (default 1)")
    p_fea.add_argument(
        "--skip-errors", action="store_true",
        help="drop failing graphs instead of aborting; ids go to the manifest",
    )
    p_fea.add_argument("--out", required=True, help="output feature path (.jsonl)")
    p_fea.set_defaults(func=cmd_featurize)
    return parser


def cmd_ingest(args) -> int:
    diag = IngestDiagnostics()
    ds = ingest_dataset(args.edges, args.labels, args.name, diagnostics=diag)
    save_dataset(ds, args.out)
    print(
        f"ingested {len(ds)} graphs into {args.out} "
        f"(self loops stripped: {diag.self_loops_stripped}, "
        f"duplicates stripped: {diag.duplicate_edges_stripped}, "
        f"remapped: {diag.graphs_remapped})"
    )
    return 0


def cmd_stats(args) -> int:
    _, table = run_stats(args.dataset)
    print(table)
    return 0


def cmd_featurize(args) -> int:
    metrics = parse_metric_keys(args.metrics) if args.metrics is not None else None
    cfg = FeaturizeConfig(
        dataset_path=args.dataset,
        out_path=args.out,
        scheme=args.scheme,
        k=args.k,
        horizon=args.horizon,
        step=args.step,
        method=args.method,
        metrics=metrics,
        rescale_spectral=args.rescale_spectral,
        standardize=args.standardize,
        workers=args.threads,
        skip_errors=args.skip_errors,
    )
    manifest = run_featurize(cfg)
    print(
        f"wrote {manifest['graphs_written']} graphs (dim {manifest['dim']}) "
        f"to {args.out} in {manifest['wall_time_s']}s"
    )
    if manifest["graphs_failed"]:
        print(f"skipped {len(manifest['graphs_failed'])} graphs, see manifest")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ContractError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except IngestError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except NumericError as e:
        print(f"error: {e}", file=sys.stderr)
        return 4


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
