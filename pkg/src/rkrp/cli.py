"""Command-line benchmark front end.

Subcommands: sweep-n, sweep-alpha, sweep-s, cond, demo. All randomness
comes from --seed (or the config file); no ambient entropy, so the same
command always produces byte-identical CSV.

Exit codes: 0 success, 2 configuration, 3 file I/O, 4 partitioning,
5 decode failure, 6 infeasible straggler pattern.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench
from .bench import ExperimentConfig
from .codes import encode_tasks
from .decode import decode, relative_error
from .errors import (
    ConfigurationError,
    DecodeError,
    DimensionError,
    InfeasiblePatternError,
    MatrixIOError,
    PartitionError,
    RkrpError,
    SingularMatrixError,
)
from .matio import load_matrix, save_matrix
from .metrics import make_spec
from .partition import pad_to_multiple, split
from .runtime import FixedSet, compute_all, sample_pattern

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_PARTITION = 4
EXIT_DECODE = 5
EXIT_INFEASIBLE = 6


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rkrp-bench",
        description="Numerical-stability benchmarks for coded matrix multiplication",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_sweep_flags(p):
        p.add_argument("--kinds", help="comma-separated code kinds "
                       f"(default {','.join(bench.DEFAULT_KINDS)})")
        p.add_argument("--trials", type=int, help="Monte-Carlo trials per grid point")
        p.add_argument("--seed", type=int, help="base seed (default 0)")
        p.add_argument("--out", help="CSV output path (default stdout)")
        p.add_argument("--all-entries", action="store_true", default=None,
                       help="score the full product instead of the (1,1) entries")
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--plot", action="store_true", default=None,
                       help="also render a PNG next to the CSV")

    p = sub.add_parser("sweep-n", help="error vs worker count at fixed alpha")
    p.add_argument("--alpha", type=float, help="straggler fraction (default 0.1)")
    add_sweep_flags(p)

    p = sub.add_parser("sweep-alpha", help="error vs straggler fraction at fixed K")
    p.add_argument("--k", type=int, help="number of block products (default 49)")
    add_sweep_flags(p)

    p = sub.add_parser("sweep-s", help="error vs straggler count, N = K + S")
    p.add_argument("--k", type=int, help="number of block products (default 49)")
    p.add_argument("--s-max", type=int, help="largest straggler count (default 26)")
    add_sweep_flags(p)

    p = sub.add_parser("cond", help="mean log condition number vs alpha")
    p.add_argument("--k", type=int, help="number of block products (default 49)")
    add_sweep_flags(p)

    p = sub.add_parser("demo", help="one end-to-end coded multiplication from files")
    p.add_argument("a_t", help="left factor file (n1 x n2, 'rows cols' header)")
    p.add_argument("b", help="right factor file (n2 x n3)")
    p.add_argument("--kind", default="rkrp_systematic", help="code kind")
    p.add_argument("-m", type=int, default=2, help="row-block count (default 2)")
    p.add_argument("-n", type=int, default=3, help="col-block count (default 3)")
    p.add_argument("--big-n", type=int, help="worker count (default K + #stragglers)")
    p.add_argument("--seed", type=int, default=0, help="coefficient seed")
    p.add_argument("--stragglers", default="",
                   help="comma-separated 1-based worker indices that never respond")
    p.add_argument("--pad", action="store_true",
                   help="zero-pad inputs to divisible shapes, truncate after")
    p.add_argument("--out", default="product.txt", help="product output file")
    p.add_argument("--report", help="JSON report path (default <out>.report.json)")
    return parser


def _load_config_file(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise MatrixIOError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigurationError(f"config {path} must hold a JSON object")
    return doc


_CONFIG_KEYS = {"kinds", "k", "alpha", "s_max", "k_grid", "alpha_grid",
                "trials", "seed", "out", "all_entries", "plot"}


def _merge_config(args, experiment: str) -> ExperimentConfig:
    """Defaults < config file < explicit flags."""
    merged: dict = {}
    if getattr(args, "config", None):
        doc = _load_config_file(args.config)
        unknown = set(doc) - _CONFIG_KEYS
        if unknown:
            raise ConfigurationError(
                f"unknown config keys: {', '.join(sorted(unknown))}")
        merged.update(doc)

    def override(key, value):
        if value is not None:
            merged[key] = value

    override("kinds", getattr(args, "kinds", None))
    override("k", getattr(args, "k", None))
    override("alpha", getattr(args, "alpha", None))
    override("s_max", getattr(args, "s_max", None))
    override("trials", getattr(args, "trials", None))
    override("seed", getattr(args, "seed", None))
    override("out", getattr(args, "out", None))
    override("all_entries", getattr(args, "all_entries", None))
    override("plot", getattr(args, "plot", None))

    kinds = merged.get("kinds", bench.DEFAULT_KINDS)
    if isinstance(kinds, str):
        kinds = tuple(k.strip() for k in kinds.split(",") if k.strip())
    kwargs = dict(
        experiment=experiment,
        kinds=tuple(kinds),
        num_trials=int(merged.get("trials", 200 if experiment != "cond" else 100)),
        base_seed=int(merged.get("seed", 0)),
        out=merged.get("out"),
        all_entries=bool(merged.get("all_entries", False)),
        plot=bool(merged.get("plot", False)),
    )
    if "k" in merged:
        kwargs["k"] = int(merged["k"])
    if "alpha" in merged:
        kwargs["alpha"] = float(merged["alpha"])
    if "s_max" in merged:
        kwargs["s_max"] = int(merged["s_max"])
    if "k_grid" in merged:
        kwargs["k_grid"] = tuple(int(k) for k in merged["k_grid"])
    if "alpha_grid" in merged:
        kwargs["alpha_grid"] = tuple(float(a) for a in merged["alpha_grid"])
    if kwargs["plot"] and kwargs["out"] is None:
        raise ConfigurationError("--plot needs --out (the PNG lands next to the CSV)")
    return ExperimentConfig(**kwargs)


def _emit(config: ExperimentConfig, header: str, rows, meta,
          value_col: str, ylabel: str, logy: bool) -> None:
    text = bench.rows_to_csv(header, rows)
    if config.out is None:
        sys.stdout.write(text)
        return
    with open(config.out, "w", encoding="ascii") as fh:
        fh.write(text)
    with open(f"{config.out}.meta.json", "w", encoding="ascii") as fh:
        json.dump({"experiment": config.experiment, "seed": config.base_seed,
                   "num_trials": config.num_trials, "rows": meta}, fh, indent=1)
    geometries = sorted({(e["m"], e["n"], e["big_n"]) for e in meta})
    print(f"wrote {config.out} ({len(rows)} rows; geometries m,n,N: "
          + " ".join(f"{m}x{n}/{nn}" for m, n, nn in geometries) + ")",
          file=sys.stderr)
    if config.plot:
        from .plotting import render_benchmark_png

        png = f"{config.out}.png"
        render_benchmark_png(config.out, png, value_col=value_col,
                             ylabel=ylabel, logy=logy)
        print(f"wrote {png}", file=sys.stderr)


def _run_sweep(args, experiment: str) -> int:
    config = _merge_config(args, experiment)
    producer = {
        "sweep_n": bench.sweep_n_rows,
        "sweep_alpha": bench.sweep_alpha_rows,
        "sweep_s": bench.sweep_s_rows,
        "cond": bench.cond_rows,
    }[experiment]
    rows, meta = producer(config)
    if experiment == "cond":
        _emit(config, bench.COND_HEADER, rows, meta,
              value_col="mean_log_cond", ylabel="mean log condition number",
              logy=False)
    else:
        _emit(config, bench.ERROR_HEADER, rows, meta,
              value_col="eta_ave", ylabel="average relative error", logy=True)
    return EXIT_OK


def _run_demo(args) -> int:
    a_t = load_matrix(args.a_t)
    b = load_matrix(args.b)
    m, n = args.m, args.n
    orig_shape = (a_t.shape[0], b.shape[1])
    if args.pad:
        a_t = pad_to_multiple(a_t, m, 1)
        b = pad_to_multiple(b, 1, n)

    stragglers = sorted({int(tok) for tok in args.stragglers.split(",") if tok.strip()})
    big_n = args.big_n if args.big_n is not None else m * n + len(stragglers)
    for w in stragglers:
        if w < 1 or w > big_n:
            raise ConfigurationError(
                f"straggler index {w} outside [1, {big_n}]")

    a_blocks, b_blocks, part = split(a_t, b, m, n)
    spec = make_spec(args.kind, m, n, big_n, args.seed)
    results = compute_all(encode_tasks(spec, a_blocks, b_blocks))
    responders = [w for w in range(1, big_n + 1) if w not in set(stragglers)]
    pattern = sample_pattern(FixedSet(responders), big_n, seed=args.seed)
    survived = [res for res in results if res.worker in set(pattern.responders)]

    report = decode(spec, survived, part)
    product = report.product[:orig_shape[0], :orig_shape[1]]
    save_matrix(args.out, product)

    direct = (a_t @ b)[:orig_shape[0], :orig_shape[1]]
    summary = {
        "kind": spec.kind,
        "m": m,
        "n": n,
        "big_n": big_n,
        "stragglers": stragglers,
        "responders": list(pattern.responders),
        "solve_dim": report.solve_dim,
        "condition_estimate": report.condition_estimate,
        "relative_error_vs_direct": relative_error(direct, product),
        "product_file": str(args.out),
        "product_shape": list(product.shape),
    }
    report_path = args.report or f"{args.out}.report.json"
    with open(report_path, "w", encoding="ascii") as fh:
        json.dump(summary, fh, indent=1)
    print(f"wrote {args.out} and {report_path}", file=sys.stderr)
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "demo":
            return _run_demo(args)
        return _run_sweep(args, args.command.replace("-", "_"))
    except InfeasiblePatternError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DecodeError, SingularMatrixError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DECODE
    except (PartitionError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARTITION
    except MatrixIOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigurationError, RkrpError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
