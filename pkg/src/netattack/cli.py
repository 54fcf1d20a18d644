"""Command line front end.

Subcommands:
  generate  grow a scale-free graph and write it as an edge-list file
  attack    run the first configured strategy once, write a step trace CSV
  sweep     run the full strategy-by-trial grid, write curves/thresholds
  report    replot curve CSVs into an SVG chart

Exit codes: 0 success, 1 configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .attacks import run_attack
from .experiment import (
    ConfigError,
    ExperimentConfig,
    materialize_graph,
    run_experiment,
    write_trace_csv,
)
from .generators import BaParams, generate_ba, write_edge_list
from .metrics import CrashCriterion
from ._version import __version__


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netattack",
        description="Attack and failure simulations on scale-free networks.",
    )
    parser.add_argument("--version", action="version", version=f"netattack {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="grow a graph and write an edge-list file")
    p.add_argument("--n", type=int, required=True, help="number of nodes")
    p.add_argument("--m", type=int, required=True, help="edges added per new node")
    p.add_argument("--seed", type=int, default=0, help="generator seed (default 0)")
    p.add_argument("--out", required=True, help="output edge-list path")

    p = sub.add_parser("attack", help="single run of the config's first strategy")
    p.add_argument("--config", required=True, help="experiment JSON config")
    p.add_argument("--seed", type=int, default=None, help="override base_seed")
    p.add_argument("--out", default=None, help="trace CSV path (default: <output_dir>/trace_<strategy>.csv)")
    p.add_argument("--epsilon", type=float, default=None, help="override crash epsilon")

    p = sub.add_parser("sweep", help="full experiment: curves, thresholds, manifest")
    p.add_argument("--config", required=True, help="experiment JSON config")
    p.add_argument("--seed", type=int, default=None, help="override base_seed")
    p.add_argument("--out", default=None, help="override output directory")
    p.add_argument("--threads", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--epsilon", type=float, default=None, help="override crash epsilon")

    p = sub.add_parser("report", help="plot curve CSVs as one SVG chart")
    p.add_argument("curves", nargs="+", help="curve CSV files from a sweep")
    p.add_argument("--out", required=True, help="output SVG path")
    p.add_argument(
        "--column",
        choices=("S", "d"),
        default="S",
        help="which observable to plot (default S)",
    )

    return parser


def _load_config(args) -> ExperimentConfig:
    import dataclasses
    import json

    config = ExperimentConfig.from_file(args.config)
    if getattr(args, "seed", None) is not None:
        config = dataclasses.replace(config, base_seed=args.seed)
    if getattr(args, "epsilon", None) is not None:
        CrashCriterion(args.epsilon)  # range check up front
        config = dataclasses.replace(config, crash_epsilon=args.epsilon)
    return config


def _cmd_generate(args) -> int:
    g = generate_ba(BaParams(n=args.n, m=args.m, seed=args.seed))
    write_edge_list(
        g,
        args.out,
        comments=[f"ba n={args.n} m={args.m} seed={args.seed}", f"edges={g.edge_count}"],
    )
    print(f"wrote {args.out}: {g.node_count} nodes, {g.edge_count} edges")
    return 0


def _cmd_attack(args) -> int:
    config = _load_config(args)
    spec = config.strategies[0]
    g = materialize_graph(config.network, config.base_seed)
    trace = run_attack(
        g,
        spec.with_seed(config.base_seed + spec.seed),
        budget=config.budget,
        cadence=config.cadence.resolve(g.node_count),
        early_stop=config.early_stop,
        criterion=CrashCriterion(config.crash_epsilon),
    )
    if args.out is not None:
        out = Path(args.out)
    else:
        if config.output_dir is None:
            raise ConfigError("no trace output path (config output_dir or --out)")
        out = Path(config.output_dir) / f"trace_{spec.label}.csv"
        out.parent.mkdir(parents=True, exist_ok=True)
    write_trace_csv(out, trace)
    final = trace.final
    print(
        f"{spec.label}: removed {trace.removed_count}/{trace.total_nodes}"
        f" ({trace.stop_reason}), final S={final.giant_fraction:.4f} -> {out}"
    )
    return 0


def _cmd_sweep(args) -> int:
    config = _load_config(args)
    if args.threads < 1:
        raise ConfigError(f"--threads must be >= 1, got {args.threads}")
    manifest = run_experiment(config, threads=args.threads, output_dir=args.out)
    out = args.out if args.out is not None else config.output_dir
    for row in manifest["thresholds"]:
        mean = row["mean"]
        shown = "absent" if mean is None else f"{mean:.4f}"
        print(f"{row['strategy']}: crash threshold mean={shown} (n={row['n']})")
    print(f"outputs in {out}: {', '.join(manifest['outputs'])}")
    return 0


def _cmd_report(args) -> int:
    from .svgplot import Series, render_line_chart

    col = "S_mean" if args.column == "S" else "d_mean"
    series = []
    for path in args.curves:
        points = []
        with open(path, newline="", encoding="utf-8") as fh:
            filtered = (line for line in fh if not line.startswith("#"))
            for row in csv.DictReader(filtered):
                val = row.get(col, "")
                if val:
                    points.append((float(row["f"]), float(val)))
        if points:
            label = Path(path).name.removesuffix(".curve.csv").removesuffix(".csv")
            series.append(Series(label, points))
    if not series:
        raise ConfigError(f"no {args.column} data found in the given curve files")
    y_label = "S" if args.column == "S" else "d"
    svg = render_line_chart(
        series,
        title=f"{y_label} vs fraction removed",
        x_label="f",
        y_label=y_label,
    )
    Path(args.out).write_text(svg, encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "attack": _cmd_attack,
    "sweep": _cmd_sweep,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - last-resort runtime report
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
