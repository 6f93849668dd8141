"""Command-line entry point: ``bernfilter <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import io
from .bernstein import FILTER_NAMES, design_coeffs, named_filter, validate_filter
from .classify import PRESETS, TrainConfig, run_splits
from .errors import BernfilterError
from .graph import grid_graph, normalized_operator
from .learn import LearnConfig, RegressionTask, interior_mask, learn_filter, make_regression_task
from .propagation import bernnet_apply
from .spectral import eigendecompose

FORMATS = """file formats:
  edge list     one edge per line: two whitespace-separated 0-based node ids; '#' starts a comment
  coefficients  line 1: order K; line 2: K+1 space-separated coefficients (17 significant digits)
  signal CSV    one value per node per line, or n rows of d comma-separated values; no header
  curve CSV     header 'lambda,value' followed by rows over [0, 2]
  mask          one 0/1 value per node per line
  dataset dir   edges.txt, features.csv (n rows, no header), labels.txt (one int per line)
  split file    splits/<seed>.json: {"train": [ids], "val": [ids], "test": [ids]}
"""


def _emit(args, record: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(record, sort_keys=True))
    else:
        print(text)


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        h, w = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like HxW, got {text!r}") from None
    return h, w


def cmd_design(args) -> int:
    c = design_coeffs(named_filter(args.filter), args.order)
    if args.out:
        io.write_coeffs(c, args.out)
    if args.curve_out:
        io.write_curve(io.export_curve(c, args.points), args.curve_out)
    _emit(args, {"filter": args.filter, "K": c.K, "theta": c.theta.tolist()},
          f"{args.filter} K={c.K}: " + " ".join(f"{v:.6g}" for v in c.theta))
    return 0


def cmd_apply(args) -> int:
    graph = io.read_edge_list(args.graph, args.nodes)
    c = io.read_coeffs(args.coeffs)
    x = io.read_signal(args.signal)
    z = bernnet_apply(normalized_operator(graph), c, x)
    io.write_signal(z, args.out)
    _emit(args, {"n": graph.n, "K": c.K, "shape": list(z.shape), "out": args.out},
          f"filtered signal of shape {z.shape} written to {args.out}")
    return 0


def cmd_validate(args) -> int:
    report = validate_filter(io.read_coeffs(args.coeffs), args.grid_points)
    record = report.as_dict() | {"valid": report.valid}
    text = (f"min={report.min_value:.6g} max={report.max_value:.6g} "
            f"nonneg_ok={str(report.nonneg_ok).lower()} bounded_ok={str(report.bounded_ok).lower()} "
            f"theta_nonneg={str(report.theta_nonneg).lower()} theta_bounded={str(report.theta_bounded).lower()}")
    _emit(args, record, text)
    return 0 if report.valid else 1


def cmd_spectrum(args) -> int:
    graph = io.read_edge_list(args.graph, args.nodes)
    dec = eigendecompose(normalized_operator(graph), method=args.method)
    lines = ["index,eigenvalue"] + [f"{i},{io.FLOAT_FMT % v}" for i, v in enumerate(dec.eigenvalues)]
    if args.out:
        Path(args.out).write_text("\n".join(lines) + "\n")
    else:
        print("\n".join(lines))
    return 0


def cmd_learn_filter(args) -> int:
    if args.grid:
        h, w = args.grid
        graph = grid_graph(h, w)
    elif args.graph:
        graph = io.read_edge_list(args.graph, args.nodes)
    else:
        raise BernfilterError("one of --graph or --grid is required")
    x = io.read_signal(args.signal)
    if args.mask:
        mask = io.read_mask(args.mask, graph.n)
    elif args.mask_border:
        if not args.grid:
            raise BernfilterError("--mask-border needs --grid")
        mask = interior_mask(*args.grid)
    else:
        mask = None
    if args.named_filter:
        task = make_regression_task(graph, named_filter(args.named_filter), x, mask)
    elif args.target:
        task = RegressionTask(graph, x, io.read_signal(args.target), mask)
    else:
        raise BernfilterError("one of --target or --named-filter is required")
    cfg = LearnConfig(K=args.order, lr=args.lr, max_epochs=args.epochs, patience=args.patience,
                      seed=args.seed, layers=args.layers, init=args.init)
    report = learn_filter(task, cfg)
    if args.out:
        io.write_coeffs(report.coeffs, args.out)
    if args.curve_out:
        io.write_curve(io.export_curve(report.coeffs, args.points), args.curve_out)
    _emit(args,
          {"sse": report.sse, "r2": report.r2, "epochs": report.epochs, "theta": report.coeffs.theta.tolist()},
          f"sse={report.sse:.6g} r2={report.r2:.6f} epochs={report.epochs} theta="
          + " ".join(f"{v:.4g}" for v in report.coeffs.theta))
    return 0


def cmd_train(args) -> int:
    dataset = io.load_dataset(args.data)
    cfg = PRESETS[args.preset] if args.preset else TrainConfig()
    overrides = {k: getattr(args, k) for k in (
        "hidden", "lr_linear", "lr_prop", "dropout_linear", "dropout_prop", "weight_decay", "K",
        "max_epochs", "patience") if getattr(args, k) is not None}
    cfg = replace(cfg, **overrides)
    fixed = io.load_split_dir(args.data, dataset.n, range(args.seed, args.seed + args.splits))
    results = run_splits(dataset, cfg, n_splits=args.splits, seed=args.seed, fixed_splits=fixed)
    accs = np.array([r.test_accuracy for r in results])
    std = float(accs.std(ddof=1)) if accs.size > 1 else 0.0
    best = max(results, key=lambda r: r.val_accuracy)
    if args.coeffs_out:
        io.write_coeffs(best.params.coeffs, args.coeffs_out)
        coeff_csv = Path(args.coeffs_out).with_suffix(".csv")
        coeff_csv.write_text("k,theta\n" + "".join(
            f"{k},{io.FLOAT_FMT % v}\n" for k, v in enumerate(best.params.theta)))
    if args.curve_out:
        io.write_curve(io.export_curve(best.params.coeffs, args.points), args.curve_out)
    record = {"accuracies": accs.tolist(), "mean": float(accs.mean()), "std": std,
              "theta": best.params.theta.tolist()}
    text = "\n".join([f"split {i}: test accuracy {a:.4f}" for i, a in enumerate(accs)]
                     + [f"mean {accs.mean():.4f} +/- {std:.4f} over {accs.size} splits"])
    _emit(args, record, text)
    return 0


def cmd_synth(args) -> int:
    if args.kind_cmd == "grid":
        io.write_edge_list(grid_graph(args.height, args.width), args.graph_out)
        x = io.synth_grid_signal(args.height, args.width, seed=args.seed, kind=args.kind)
        io.write_signal(x, args.signal_out)
        _emit(args, {"n": x.size, "graph": args.graph_out, "signal": args.signal_out},
              f"{args.height}x{args.width} grid written to {args.graph_out}, signal to {args.signal_out}")
    else:
        ds = io.two_cluster_dataset(size=args.size, noise=args.noise, seed=args.seed)
        io.write_dataset(ds, args.out)
        _emit(args, {"n": ds.n, "out": args.out}, f"two-cluster dataset ({ds.n} nodes) written to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    parser = argparse.ArgumentParser(prog="bernfilter", description="Bernstein-polynomial graph spectral filters.",
                                     epilog=FORMATS, formatter_class=fmt)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, func):
        p = sub.add_parser(name, help=help_text, description=help_text, epilog=FORMATS, formatter_class=fmt)
        p.add_argument("--json", action="store_true", help="print the summary as one JSON line")
        p.set_defaults(func=func)
        return p

    p = add("design", "sample a catalog filter into Bernstein coefficients", cmd_design)
    p.add_argument("--filter", required=True, choices=FILTER_NAMES, help="catalog filter name")
    p.add_argument("--order", type=int, default=10, help="polynomial order K (default 10)")
    p.add_argument("--out", help="coefficient file to write")
    p.add_argument("--curve-out", help="CSV of the response over [0, 2]")
    p.add_argument("--points", type=int, default=1000, help="curve sample count (default 1000)")

    p = add("apply", "filter a signal on a graph with given coefficients", cmd_apply)
    p.add_argument("--graph", required=True, help="edge list file")
    p.add_argument("--nodes", type=int, help="node count (default: max id + 1)")
    p.add_argument("--coeffs", required=True, help="coefficient file")
    p.add_argument("--signal", required=True, help="signal CSV (vector or n x d)")
    p.add_argument("--out", required=True, help="output CSV, same shape as the signal")

    p = add("validate", "check 0 <= g(lambda) <= 1 on a grid; exit 1 if violated", cmd_validate)
    p.add_argument("--coeffs", required=True, help="coefficient file")
    p.add_argument("--grid-points", type=int, default=1000, help="lambda grid size (default 1000)")

    p = add("spectrum", "eigenvalues of the normalized Laplacian as CSV", cmd_spectrum)
    p.add_argument("--graph", required=True, help="edge list file")
    p.add_argument("--nodes", type=int, help="node count (default: max id + 1)")
    p.add_argument("--method", choices=("auto", "jacobi", "lapack"), default="auto",
                   help="eigensolver; auto uses Jacobi up to 200 nodes (default auto)")
    p.add_argument("--out", help="CSV path (default: stdout)")

    p = add("learn-filter", "learn non-negative coefficients from a signal and its filtered version",
            cmd_learn_filter)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--graph", help="edge list file")
    g.add_argument("--grid", type=_parse_grid, help="use an HxW grid graph instead of --graph")
    p.add_argument("--nodes", type=int, help="node count for --graph")
    p.add_argument("--signal", required=True, help="input signal CSV")
    t = p.add_mutually_exclusive_group()
    t.add_argument("--target", help="target signal CSV")
    t.add_argument("--named-filter", choices=FILTER_NAMES, help="synthesize the target exactly via the eigenbasis")
    p.add_argument("--order", type=int, default=10, help="K (default 10)")
    p.add_argument("--epochs", type=int, default=2000, help="maximum epochs (default 2000)")
    p.add_argument("--patience", type=int, default=100, help="early-stopping patience (default 100)")
    p.add_argument("--lr", type=float, default=0.01, help="Adam learning rate (default 0.01)")
    p.add_argument("--layers", type=int, choices=(1, 2), default=2,
                   help="stacked filter layers sharing coefficients (default 2)")
    p.add_argument("--mask", help="0/1 mask file selecting scored nodes")
    p.add_argument("--mask-border", action="store_true", help="with --grid: score interior nodes only")
    p.add_argument("--init", choices=("ones", "random"), default="ones",
                   help="starting coefficients: all-pass or uniform [0, 1) (default ones)")
    p.add_argument("--seed", type=int, default=0, help="seed for --init random (default 0)")
    p.add_argument("--out", help="learned coefficient file")
    p.add_argument("--curve-out", help="CSV of the learned response")
    p.add_argument("--points", type=int, default=1000, help="curve sample count (default 1000)")

    p = add("train", "node classification over seeded 60/20/20 splits", cmd_train)
    p.add_argument("--data", required=True,
                   help="dataset directory; splits/<seed>.json there overrides the random split for that seed")
    p.add_argument("--preset", choices=sorted(PRESETS), help="published hyperparameters for a benchmark")
    p.add_argument("--hidden", type=int, help="MLP hidden width (default 64)")
    p.add_argument("--lr-linear", type=float, help="Adam learning rate of the MLP (default 0.01)")
    p.add_argument("--lr-prop", type=float, help="Adam learning rate of theta (default 0.01)")
    p.add_argument("--dropout-linear", type=float, help="dropout inside the MLP (default 0.5)")
    p.add_argument("--dropout-prop", type=float, help="dropout before propagation (default 0.5)")
    p.add_argument("--weight-decay", type=float, help="L2 penalty on MLP weights (default 0.0005)")
    p.add_argument("--K", "--order", dest="K", type=int, help="polynomial order (default 10)")
    p.add_argument("--max-epochs", type=int, help="epoch cap (default 1000)")
    p.add_argument("--patience", type=int, help="validation-loss patience (default 200)")
    p.add_argument("--splits", type=int, default=10, help="number of random splits (default 10)")
    p.add_argument("--seed", type=int, default=0, help="split i uses seed + i (default 0)")
    p.add_argument("--coeffs-out", help="coefficients of the best-validation split (also writes a .csv)")
    p.add_argument("--curve-out", help="CSV of that split's learned response")
    p.add_argument("--points", type=int, default=1000, help="curve sample count (default 1000)")

    p = add("synth", "write synthetic inputs", cmd_synth)
    kinds = p.add_subparsers(dest="kind_cmd", required=True)
    q = kinds.add_parser("grid", help="grid graph plus an image-like signal", epilog=FORMATS, formatter_class=fmt)
    q.add_argument("--height", type=int, required=True, help="grid rows")
    q.add_argument("--width", type=int, required=True, help="grid columns")
    q.add_argument("--kind", choices=("random", "gradient", "checker"), default="random",
                   help="pixel pattern (default random)")
    q.add_argument("--seed", type=int, default=0, help="seed for --kind random (default 0)")
    q.add_argument("--graph-out", required=True, help="edge list to write")
    q.add_argument("--signal-out", required=True, help="signal CSV to write")
    q.add_argument("--json", action="store_true", help="print the summary as one JSON line")
    q = kinds.add_parser("two-cluster", help="two cliques joined by a bridge", epilog=FORMATS, formatter_class=fmt)
    q.add_argument("--size", type=int, default=10, help="nodes per clique")
    q.add_argument("--noise", type=float, default=0.5, help="feature noise std (default 0.5)")
    q.add_argument("--seed", type=int, default=0, help="seed for noise and bridge edges (default 0)")
    q.add_argument("--out", required=True, help="dataset directory")
    q.add_argument("--json", action="store_true", help="print the summary as one JSON line")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BernfilterError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
