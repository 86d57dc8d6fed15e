"""Command-line front end.

Subcommands: generate, denoise, estimate, metrics, bench.  Every run writes
a JSON manifest next to its outputs recording the resolved arguments and
seeds, so any output can be reproduced byte-for-byte by re-running the
recorded argv.

Exit codes: 0 ok, 2 bad arguments, 3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import bench, blockio, metrics
from .brown import BrownConstants, gates_to_meters, jason2_like, load_constants
from .errors import AltismoothError, BadRangeError
from .retrack import fit_block, svd_filter_stream
from .simulate import NOISE_MODES, NoiseSpec, clean_block, corrupt, input_rsnr, make_trajectory
from .solver import SolverConfig, denoise_stream

EXIT_OK = 0
EXIT_BAD_ARGS = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _parse_pair(text: str) -> tuple[float, float]:
    parts = text.replace(":", ",").split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}")
    return float(parts[0]), float(parts[1])


def _parse_floats(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p]


def _parse_ints(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p]


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master RNG seed")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads for chunked processing")
    common.add_argument("--config", type=Path, default=None,
                        help="constants profile file (default: packaged jason2-like)")
    common.add_argument("--scale", type=float, default=1.0,
                        help="Monte-Carlo count scale factor for bench suites")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="altismooth",
        description="Smooth-signal denoising and retracking for altimetric waveform tracks.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    gen = sub.add_parser("generate", parents=[common],
                         help="synthesise clean and noisy waveform blocks")
    gen.add_argument("--n", type=int, required=True, help="number of signals")
    gen.add_argument("--traj", choices=("constant", "smooth-random", "file"),
                     default="smooth-random")
    gen.add_argument("--swh", type=float, default=2.0, help="constant SWH [m]")
    tau_group = gen.add_mutually_exclusive_group()
    tau_group.add_argument("--tau-m", type=float, default=None, help="constant epoch [m]")
    tau_group.add_argument("--tau-gates", type=float, default=None,
                           help="constant epoch [gates]")
    gen.add_argument("--pu", type=float, default=130.0, help="constant amplitude")
    gen.add_argument("--swh-range", type=_parse_pair, default=(3.4, 5.4))
    gen.add_argument("--tau-range", type=_parse_pair, default=(14.3, 15.0),
                     help="epoch range in meters")
    gen.add_argument("--pu-range", type=_parse_pair, default=(150.0, 190.0))
    gen.add_argument("--traj-file", type=Path, default=None)
    gen.add_argument("--looks", type=float, default=90.0)
    gen.add_argument("--noise-mode", choices=NOISE_MODES,
                     default="multiplicative-speckle")
    gen.add_argument("--noise-var", type=float, default=None,
                     help="per-gate variance for additive-gaussian mode")
    gen.add_argument("--out-dir", type=Path, default=Path("."))

    den = sub.add_parser("denoise", parents=[common],
                         help="denoise a block file with the coordinate-descent solver")
    den.add_argument("--input", type=Path, required=True)
    den.add_argument("--output", type=Path, required=True)
    den.add_argument("--chunk", type=int, default=500)
    den.add_argument("--zeta", type=float, default=2.0)
    den.add_argument("--eta", type=float, default=2.0)
    den.add_argument("--xi", type=float, default=1e-3)
    den.add_argument("--tmax", type=int, default=100)
    den.add_argument("--lengthscale", type=float, default=30.0)
    den.add_argument("--emit-cost-trace", type=Path, default=None,
                     help="write a chunk,iteration,cost CSV here")

    est = sub.add_parser("estimate", parents=[common],
                         help="retrack each signal of a block")
    est.add_argument("--input", type=Path, required=True)
    est.add_argument("--output", type=Path, required=True)
    est.add_argument("--method", choices=("ls", "svd-ls", "sse-ls"), default="ls")
    est.add_argument("--svd-threshold", type=float, default=0.84)
    est.add_argument("--chunk", type=int, default=500)

    met = sub.add_parser("metrics", parents=[common],
                         help="evaluate RSNR and parameter error statistics")
    met.add_argument("--clean", type=Path, default=None, help="clean block file")
    met.add_argument("--est", type=Path, default=None, help="estimated block file")
    met.add_argument("--series", type=Path, default=None,
                     help="estimate CSV from the estimate subcommand")
    met.add_argument("--truth", type=Path, default=None, help="trajectory CSV")
    met.add_argument("--output", type=Path, required=True)

    ben = sub.add_parser("bench", parents=[common],
                         help="run a reproduction experiment and write its report CSV")
    ben.add_argument("--suite", choices=("table1", "table2", "fig4"), required=True)
    ben.add_argument("--out", type=Path, required=True, help="output directory")
    ben.add_argument("--n", type=int, default=None,
                     help="table1 track length (default 5000 * scale)")
    ben.add_argument("--m-list", type=_parse_ints,
                     default=list(bench.TABLE1_M_LIST))
    ben.add_argument("--swh-list", type=_parse_floats,
                     default=list(bench.SWEEP_SWH_LIST))
    ben.add_argument("--runs", type=int, default=None,
                     help="Monte-Carlo runs per SWH (default 500 * scale)")
    ben.add_argument("--looks", type=float, default=90.0)
    ben.add_argument("--svd-threshold", type=float, default=0.84)
    ben.add_argument("--chunk", type=int, default=500)
    return parser


def _constants(args) -> BrownConstants:
    if args.config is not None:
        return load_constants(args.config)
    return jason2_like()


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        zeta=getattr(args, "zeta", 2.0),
        eta=getattr(args, "eta", 2.0),
        xi=getattr(args, "xi", 1e-3),
        t_max=getattr(args, "tmax", 100),
        lengthscale=getattr(args, "lengthscale", 30.0),
    )


def _manifest_args(args) -> dict:
    out = {}
    for key, value in sorted(vars(args).items()):
        if key == "subcommand":
            continue
        out[key] = str(value) if isinstance(value, Path) else value
    return out


def cmd_generate(args, argv) -> int:
    started = time.time()
    consts = _constants(args)
    if args.traj == "constant":
        if args.tau_gates is not None:
            tau_m = float(gates_to_meters(args.tau_gates, consts))
        elif args.tau_m is not None:
            tau_m = args.tau_m
        else:
            tau_m = float(gates_to_meters(31.0, consts))
        traj = make_trajectory("constant", args.n, swh=args.swh, tau=tau_m,
                               pu=args.pu, seed=args.seed, consts=consts)
    elif args.traj == "smooth-random":
        traj = make_trajectory(
            "smooth-random", args.n,
            swh_range=args.swh_range, tau_range=args.tau_range,
            pu_range=args.pu_range,
            seed=bench.derive_seed(args.seed, bench.TRAJ_STREAM),
            consts=consts,
        )
    else:
        if args.traj_file is None:
            raise BadRangeError("--traj file needs --traj-file")
        traj = make_trajectory("file", args.n, path=args.traj_file,
                               seed=args.seed, consts=consts)

    clean = clean_block(traj, consts)
    spec = NoiseSpec(
        looks=args.looks,
        seed=bench.derive_seed(args.seed, bench.NOISE_STREAM),
        mode=args.noise_mode,
        noise_var=args.noise_var,
    )
    noisy = corrupt(clean, spec)

    out_dir = args.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "clean": out_dir / "clean.blk",
        "noisy": out_dir / "noisy.blk",
        "trajectory": out_dir / "trajectory.csv",
    }
    blockio.write_block(paths["clean"], clean)
    blockio.write_block(paths["noisy"], noisy)
    blockio.write_trajectory_csv(paths["trajectory"], traj)
    blockio.write_manifest(
        out_dir / "generate.manifest.json", "generate",
        {"argv": argv, **_manifest_args(args)},
        {k: str(v) for k, v in paths.items()},
        started,
        seeds={"master": args.seed, "noise": spec.seed},
    )
    print(f"wrote {clean.shape[0]}x{clean.shape[1]} blocks to {out_dir}")
    print(f"input RSNR: {input_rsnr(clean, noisy):.2f} dB")
    return EXIT_OK


def cmd_denoise(args, argv) -> int:
    started = time.time()
    block = blockio.read_block(args.input)
    config = _solver_config(args)
    denoised, states = denoise_stream(
        block, args.chunk, config, threads=args.threads, with_states=True
    )
    blockio.write_block(args.output, denoised)
    outputs = {"denoised": str(args.output)}
    if args.emit_cost_trace is not None:
        rows = []
        for ci, state in enumerate(states):
            for it, value in enumerate(state.cost_trace, start=1):
                rows.append({"chunk": ci, "iteration": it, "cost": value})
        blockio.write_report_csv(args.emit_cost_trace,
                                 ["chunk", "iteration", "cost"], rows)
        outputs["cost_trace"] = str(args.emit_cost_trace)
    blockio.write_manifest(
        Path(str(args.output) + ".manifest.json"), "denoise",
        {"argv": argv, **_manifest_args(args)}, outputs, started,
        seeds={"master": args.seed},
    )
    converged = sum(1 for s in states if s.stop_reason == "converged")
    print(f"denoised {block.shape[1]} signals in {len(states)} chunk(s); "
          f"{converged}/{len(states)} converged")
    return EXIT_OK


def cmd_estimate(args, argv) -> int:
    started = time.time()
    consts = _constants(args)
    block = blockio.read_block(args.input)
    if args.method == "svd-ls":
        block = svd_filter_stream(block, args.chunk, args.svd_threshold)
    elif args.method == "sse-ls":
        block = denoise_stream(block, args.chunk, _solver_config(args),
                               threads=args.threads)
    fits = fit_block(block, consts)
    rows = [
        {
            "index": m,
            "swh_m": fit.params.swh,
            "tau_m": fit.params.tau,
            "pu": fit.params.pu,
            "residual": fit.residual_norm,
            "converged": int(fit.converged),
        }
        for m, fit in enumerate(fits)
    ]
    blockio.write_report_csv(
        args.output, ["index", "swh_m", "tau_m", "pu", "residual", "converged"], rows
    )
    blockio.write_manifest(
        Path(str(args.output) + ".manifest.json"), "estimate",
        {"argv": argv, **_manifest_args(args)},
        {"estimates": str(args.output)}, started,
        seeds={"master": args.seed},
    )
    print(f"retracked {len(rows)} signals with {args.method}")
    return EXIT_OK


def _read_series_csv(path):
    import csv as _csv

    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = _csv.DictReader(fh)
        rows = [(float(r["swh_m"]), float(r["tau_m"]), float(r["pu"])) for r in reader]
    return np.asarray(rows, dtype=float)


def cmd_metrics(args, argv) -> int:
    started = time.time()
    rows = []
    if (args.clean is None) != (args.est is None):
        raise BadRangeError("--clean and --est must be given together")
    if args.clean is not None:
        clean = blockio.read_block(args.clean)
        est = blockio.read_block(args.est)
        rows.append({"metric": "rsnr_db", "param": "block",
                     "value": metrics.rsnr(clean, est)})
    if args.series is not None:
        estimates = _read_series_csv(args.series)
        truth = _read_series_csv(args.truth) if args.truth is not None else None
        series = metrics.ParamSeries(estimates, truth)
        for p, name in enumerate(metrics.PARAM_NAMES):
            if truth is not None:
                rows.append({"metric": "rmse", "param": name, "value": series.rmse(p)})
            rows.append({"metric": "std", "param": name, "value": series.std(p)})
            if len(series) >= 20:
                rows.append({"metric": "std_20hz", "param": name,
                             "value": series.std_20hz(p)})
    if not rows:
        raise BadRangeError("nothing to do: give --clean/--est and/or --series")
    blockio.write_report_csv(args.output, ["metric", "param", "value"], rows)
    blockio.write_manifest(
        Path(str(args.output) + ".manifest.json"), "metrics",
        {"argv": argv, **_manifest_args(args)},
        {"metrics": str(args.output)}, started,
        seeds={"master": args.seed},
    )
    for row in rows:
        print(f"{row['metric']}[{row['param']}] = {row['value']:.6g}")
    return EXIT_OK


def cmd_bench(args, argv) -> int:
    started = time.time()
    consts = _constants(args)
    config = SolverConfig()
    args.out.mkdir(parents=True, exist_ok=True)

    if args.suite == "table1":
        n = args.n if args.n is not None else max(1, round(5000 * args.scale))
        m_list = [m for m in args.m_list if 1 <= m <= n]
        dropped = [m for m in args.m_list if m > n]
        if dropped:
            print(f"dropping chunk lengths {dropped} beyond the {n}-signal track",
                  file=sys.stderr)
        if not m_list:
            raise BadRangeError(f"no chunk length in {args.m_list} fits n={n}")
        result = bench.run_table1(n, m_list, args.looks, args.seed, consts,
                                  config, args.threads)
        fields = ["filter_length", "rsnr_db", "ms_per_signal"]
        print(f"input RSNR: {result['input_rsnr_db']:.2f} dB")
    else:
        runs = args.runs if args.runs is not None else max(1, round(500 * args.scale))
        if args.suite == "table2":
            result = bench.run_table2(args.swh_list, runs, args.looks, args.seed,
                                      consts, config, args.svd_threshold,
                                      args.chunk, args.threads)
            fields = ["swh", "rsnr_svd", "rsnr_sse"]
        else:
            result = bench.run_fig4(args.swh_list, runs, args.looks, args.seed,
                                    consts, config, args.svd_threshold,
                                    args.chunk, args.threads)
            fields = bench.FIG4_FIELDS

    report = args.out / f"{args.suite}.csv"
    blockio.write_report_csv(report, fields, result["rows"])
    extra = {k: v for k, v in result.items() if k != "rows"}
    blockio.write_manifest(
        args.out / f"{args.suite}.manifest.json", "bench",
        {"argv": argv, **_manifest_args(args), **extra},
        {"report": str(report)}, started,
        seeds={"master": args.seed},
    )
    for row in result["rows"]:
        print(",".join(f"{row[f]:.4g}" if isinstance(row[f], float) else str(row[f])
                       for f in fields))
    print(f"report written to {report}")
    return EXIT_OK


_COMMANDS = {
    "generate": cmd_generate,
    "denoise": cmd_denoise,
    "estimate": cmd_estimate,
    "metrics": cmd_metrics,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.subcommand](args, argv)
    except (BadRangeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_ARGS
    except AltismoothError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"io failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
