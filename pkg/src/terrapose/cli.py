"""Command line interface.

Subcommands:

``pose <scenario.json>``
    Run the scenario's pose query; write results JSON + CSV summary and,
    with ``--trace``, newline-delimited JSON of every iteration.

``path <scenario.json> --samples N``
    Run the scenario's path query at N samples along the route.

``bench``
    Time the pseudo-inverse force solve against the Lemke baseline across
    wheel counts and write a CSV.

``bench-kernels``
    Compare the compiled terrain kernels against the pure-numpy fallback.

Exit status is 0 only if every query converged; schema problems exit 1 and
solver failures exit 2, both with a structured JSON error record on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, bench, kernels, schemas
from .errors import ConvergenceError, SchemaError, SolverError, TerrainBoundsError
from .estimator import estimate_pose, pose_along_path

EXIT_OK = 0
EXIT_SCHEMA = 1
EXIT_SOLVER = 2


def _error_record(kind, message):
    json.dump({"error": {"kind": kind, "message": str(message)}}, sys.stderr)
    sys.stderr.write("\n")


def _out_dir(args):
    out = Path(args.out) if args.out else schemas.default_output_dir()
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_outputs(out_dir, scenario, results, trace_rows, mode):
    document = schemas.results_document(scenario.name, mode, results)
    json_path = out_dir / f"{scenario.name}_results.json"
    csv_path = out_dir / f"{scenario.name}_summary.csv"
    schemas.write_results_json(json_path, document)
    schemas.write_results_csv(csv_path, results)
    written = [str(json_path), str(csv_path)]
    if trace_rows is not None:
        trace_path = out_dir / f"{scenario.name}_trace.ndjson"
        with open(trace_path, "w", encoding="utf-8") as fh:
            for record in trace_rows:
                json.dump(record, fh)
                fh.write("\n")
        written.append(str(trace_path))
    return written


def _run_query(scenario, want_kind, samples_override, mode_override, with_trace):
    if scenario.query_kind != want_kind:
        raise SchemaError(
            f"scenario {scenario.name!r} has a {scenario.query_kind!r} query; "
            f"this subcommand needs {want_kind!r}"
        )
    mode = mode_override or scenario.mode
    trace_rows = [] if with_trace else None
    cb = trace_rows.append if with_trace else None
    if want_kind == "pose":
        result = estimate_pose(
            scenario.pose, scenario.vehicle, scenario.surface,
            params=scenario.params, z_start=scenario.z_start,
            clearance=scenario.clearance, mode=mode, trace=cb,
        )
        results = [(None, result)]
    else:
        samples = samples_override or scenario.samples
        results = pose_along_path(
            scenario.path, scenario.vehicle, scenario.surface, samples,
            params=scenario.params, clearance=scenario.clearance,
            warm_clearance=scenario.warm_clearance, mode=mode, trace=cb,
        )
    return results, trace_rows, mode


def _cmd_pose(args):
    scenario = schemas.load_scenario(args.scenario)
    results, trace_rows, mode = _run_query(scenario, "pose", None, args.mode, args.trace)
    written = _write_outputs(_out_dir(args), scenario, results, trace_rows, mode)
    _, result = results[0]
    z, roll, pitch = result.q
    print(
        f"{scenario.name}: converged in {result.iterations} iterations; "
        f"z={z:.4f} roll={roll:.5f} pitch={pitch:.5f} "
        f"contacts={result.contact_count}/{len(result.contacts)} mode={mode}"
    )
    for path in written:
        print(f"  wrote {path}")
    return EXIT_OK


def _cmd_path(args):
    scenario = schemas.load_scenario(args.scenario)
    results, trace_rows, mode = _run_query(scenario, "path", args.samples, args.mode, args.trace)
    written = _write_outputs(_out_dir(args), scenario, results, trace_rows, mode)
    print(f"{scenario.name}: {len(results)} samples converged (mode={mode})")
    for u, result in results:
        z, roll, pitch = result.q
        print(
            f"  u={u:.3f} z={z:.4f} roll={roll:.5f} pitch={pitch:.5f} "
            f"contacts={result.contact_count}/{len(result.contacts)}"
        )
    for path in written:
        print(f"  wrote {path}")
    return EXIT_OK


def _parse_wheel_counts(text):
    try:
        counts = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise SchemaError(f"--wheels must be comma-separated integers, got {text!r}")
    if not counts or any(c < 1 for c in counts):
        raise SchemaError(f"--wheels must name positive wheel counts, got {text!r}")
    return counts


def _cmd_bench(args):
    counts = _parse_wheel_counts(args.wheels)
    records = bench.run_benchmark(counts, repetitions=args.reps)
    out = Path(args.out) if args.out else schemas.default_output_dir() / "bench.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    bench.write_benchmark_csv(out, records)
    print(f"{'method':<6} {'wheels':>6} {'mean':>12} {'stddev':>12}")
    for r in records:
        print(f"{r.method:<6} {r.wheel_count:>6} {r.mean * 1e6:>10.2f}us {r.stddev * 1e6:>10.2f}us")
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_bench_kernels(args):
    available = kernels.available_backends()
    if "native" not in available:
        print("compiled kernels unavailable; timing the pure backend only", file=sys.stderr)
    records = bench.run_kernel_benchmark(points=args.points, repetitions=args.reps)
    out = Path(args.out) if args.out else schemas.default_output_dir() / "bench_kernels.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    bench.write_benchmark_csv(out, records)
    print(f"{'method':<16} {'n':>8} {'mean':>12} {'stddev':>12}")
    for r in records:
        print(f"{r.method:<16} {r.wheel_count:>8} {r.mean * 1e3:>10.3f}ms {r.stddev * 1e3:>10.3f}ms")
    means = {r.method: r.mean for r in records}
    if "heights/native" in means and "heights/pure" in means:
        print(f"height query speedup: {means['heights/pure'] / means['heights/native']:.1f}x")
        print(f"drop speedup: {means['drop/pure'] / means['drop/native']:.1f}x")
    print(f"wrote {out}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="terrapose",
        description="Static pose of a multi-wheel vehicle on B-spline terrain.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    pose = sub.add_parser("pose", help="solve one placement to equilibrium")
    pose.add_argument("scenario", help="scenario JSON file")
    pose.add_argument("--trace", action="store_true", help="write per-iteration NDJSON")
    pose.add_argument("--out", help="output directory (default $TERRAPOSE_OUT_DIR or .)")
    pose.add_argument("--mode", choices=["vertical", "normal"], help="override the wrench mode")
    pose.set_defaults(func=_cmd_pose)

    path = sub.add_parser("path", help="solve poses along a route")
    path.add_argument("scenario", help="scenario JSON file with a path query")
    path.add_argument("--samples", type=int, help="number of samples along the route")
    path.add_argument("--trace", action="store_true", help="write per-iteration NDJSON")
    path.add_argument("--out", help="output directory (default $TERRAPOSE_OUT_DIR or .)")
    path.add_argument("--mode", choices=["vertical", "normal"], help="override the wrench mode")
    path.set_defaults(func=_cmd_path)

    bench_cmd = sub.add_parser("bench", help="time the SVD solve against the Lemke baseline")
    bench_cmd.add_argument("--wheels", default="4,6,8,12,16,20,24",
                           help="comma-separated wheel counts")
    bench_cmd.add_argument("--reps", type=int, default=100, help="repetitions per point")
    bench_cmd.add_argument("--out", help="CSV output path")
    bench_cmd.set_defaults(func=_cmd_bench)

    kern = sub.add_parser("bench-kernels", help="compare compiled and pure terrain kernels")
    kern.add_argument("--points", type=int, default=20_000, help="height queries per repetition")
    kern.add_argument("--reps", type=int, default=20, help="repetitions")
    kern.add_argument("--out", help="CSV output path")
    kern.set_defaults(func=_cmd_bench_kernels)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        _error_record("schema", exc)
        return EXIT_SCHEMA
    except (ConvergenceError, SolverError, TerrainBoundsError, ValueError) as exc:
        _error_record("solver", exc)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
