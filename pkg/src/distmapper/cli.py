"""Command line entry point: ``distmapper {run,bench,validate,gen,amdahl,amdahl-table}``.

Exit status is 0 on success, 1 when a validation check fails and 2 for usage
or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .clustering import ClusterParams
from .cover import (CoverError, CoverParams, flatten_cover, preprocess_cover,
                    validate_preprocessed_cover)
from .dataio import (SHAPES, AxisOutOfBounds, FilterSpec, ParseError, evaluate_filter,
                     export_dot, export_json, generate_shape, read_points_csv,
                     read_points_off, write_points_csv)
from .distributed import distributed_mapper
from .graph import graph_equal
from .perf import amdahl_speedup, amdahl_table, format_amdahl_table, run_benchmark
from .sequential import sequential_mapper


class UsageError(Exception):
    pass


def _parse_gen(text: str, seed: int):
    parts = text.split(":")
    if parts[0] not in SHAPES or len(parts) > 3:
        raise UsageError(f"--gen expects SHAPE[:N[:NOISE]] with SHAPE in {SHAPES}")
    try:
        n = int(parts[1]) if len(parts) > 1 else 1000
        noise = float(parts[2]) if len(parts) > 2 else 0.0
    except ValueError:
        raise UsageError(f"bad --gen value {text!r}") from None
    return generate_shape(parts[0], n, noise, seed)


def _load_cloud(args):
    if args.input and args.gen:
        raise UsageError("give either --input or --gen, not both")
    if args.input:
        path = Path(args.input)
        if path.suffix.lower() == ".off":
            return read_points_off(path)
        return read_points_csv(path, args.dim)
    return _parse_gen(args.gen or "circle:1000:0.05", args.seed)


def _overlap(text):
    if text == "auto":
        return None
    try:
        w = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a number or 'auto'") from None
    if w <= 0:
        raise argparse.ArgumentTypeError("overlap width must be positive")
    return w


def _instance(args):
    cloud = _load_cloud(args)
    try:
        spec = FilterSpec.parse(args.filter)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    fv = evaluate_filter(cloud, spec)
    cover_params = CoverParams(args.chunks, args.resolution, args.gain, args.overlap_width)
    cluster_params = ClusterParams(args.eps, args.min_pts)
    return cloud, spec, fv, cover_params, cluster_params


def _add_instance_args(p):
    src = p.add_argument_group("input")
    src.add_argument("--input", help="CSV or OFF point file")
    src.add_argument("--dim", type=int, default=None,
                     help="CSV only: number of leading coordinate columns (rest become filter columns)")
    src.add_argument("--gen", help="synthetic cloud SHAPE[:N[:NOISE]], e.g. torus:40000:0.01")
    src.add_argument("--seed", type=int, default=0)
    src.add_argument("--filter", default="coord:0", help="coord:K, l2norm or col:NAME (default coord:0)")
    cov = p.add_argument_group("cover")
    cov.add_argument("--chunks", type=int, default=4, help="number of chain-cover chunks N")
    cov.add_argument("--resolution", type=int, default=4,
                     help="intervals per chunk; the flattened cover has N*M + N-1 intervals")
    cov.add_argument("--gain", type=float, default=0.25)
    cov.add_argument("--overlap-width", type=_overlap, default=None, metavar="W|auto",
                     help="chunk overlap width (auto = gain * chunk length)")
    cl = p.add_argument_group("clustering")
    cl.add_argument("--eps", type=float, default=0.1)
    cl.add_argument("--min-pts", type=int, default=3)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="distmapper", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="compute a Mapper graph")
    _add_instance_args(p)
    p.add_argument("--mode", choices=("sequential", "distributed"), default="distributed")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="JSON output path")
    p.add_argument("--dot", help="DOT output path")

    p = sub.add_parser("bench", help="measure speedup over worker counts")
    _add_instance_args(p)
    p.add_argument("--workers-list", default="1,2,4")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--out", help="metrics JSON path (default: stdout)")

    p = sub.add_parser("validate", help="check cover invariants and sequential == distributed")
    _add_instance_args(p)
    p.add_argument("--workers", type=int, default=2)

    p = sub.add_parser("gen", help="write a synthetic point cloud as CSV")
    p.add_argument("shape", choices=SHAPES)
    p.add_argument("-n", type=int, default=1000)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("amdahl", help="Amdahl speedup for one (part, N)")
    p.add_argument("--part", type=float, required=True)
    p.add_argument("--n", type=int, required=True)

    sub.add_parser("amdahl-table", help="print the Amdahl speedup table")
    return parser


def _cmd_run(args):
    cloud, spec, fv, cover_params, cluster_params = _instance(args)
    pc = preprocess_cover(*fv.range, cover_params)
    flat = flatten_cover(pc)
    if args.mode == "sequential":
        t0 = time.perf_counter()
        graph = sequential_mapper(cloud, fv, flat, cluster_params)
        timings = {"total": 1e3 * (time.perf_counter() - t0)}
    else:
        graph, t = distributed_mapper(cloud, fv, pc, cluster_params, workers=args.workers)
        timings = t.as_ms()
    print(f"{graph.n_nodes} nodes, {graph.n_edges} edges, {graph.n_components()} components")
    if args.out:
        meta = {"config": _config(args, spec), "timings_ms": timings}
        export_json(graph, args.out, flat, meta)
    if args.dot:
        export_dot(graph, args.dot)
    return 0


def _config(args, spec):
    keys = ("input", "gen", "seed", "chunks", "resolution", "gain", "overlap_width",
            "eps", "min_pts", "mode", "workers")
    cfg = {k: getattr(args, k) for k in keys if hasattr(args, k)}
    cfg["filter"] = str(spec)
    return cfg


def _cmd_bench(args):
    cloud, spec, fv, cover_params, cluster_params = _instance(args)
    try:
        counts = [int(w) for w in args.workers_list.split(",")]
    except ValueError:
        raise UsageError(f"bad --workers-list {args.workers_list!r}") from None
    report = run_benchmark(cloud, fv, cover_params, cluster_params, counts, args.repeats)
    doc = report.as_dict()
    doc["config"] = _config(args, spec)
    text = json.dumps(doc, indent=1)
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text)
    for w, s in report.stats.items():
        print(f"workers={w}: best {s.best:.3f}s speedup {s.speedup:.2f} efficiency {s.efficiency:.2f}",
              file=sys.stderr)
    return 0


def _cmd_validate(args):
    cloud, _, fv, cover_params, cluster_params = _instance(args)
    pc = preprocess_cover(*fv.range, cover_params)
    ok = True
    for v in validate_preprocessed_cover(pc):
        ok = False
        print(f"cover violation [{v.kind}]: {v.detail} {v.first or ''} {v.second or ''}", file=sys.stderr)
    seq = sequential_mapper(cloud, fv, flatten_cover(pc), cluster_params)
    dist, _ = distributed_mapper(cloud, fv, pc, cluster_params, workers=args.workers)
    if not graph_equal(seq, dist):
        ok = False
        print("sequential and distributed graphs differ", file=sys.stderr)
    print(f"{'ok' if ok else 'FAILED'}: {seq.n_nodes} nodes, {seq.n_edges} edges")
    return 0 if ok else 1


def _cmd_gen(args):
    write_points_csv(generate_shape(args.shape, args.n, args.noise, args.seed), args.out)
    return 0


def _cmd_amdahl(args):
    print(f"{amdahl_speedup(args.part, args.n):.2f}")
    return 0


def _cmd_amdahl_table(args):
    print(format_amdahl_table(amdahl_table()))
    return 0


COMMANDS = {"run": _cmd_run, "bench": _cmd_bench, "validate": _cmd_validate, "gen": _cmd_gen,
            "amdahl": _cmd_amdahl, "amdahl-table": _cmd_amdahl_table}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ParseError, AxisOutOfBounds, CoverError, ValueError, OSError) as exc:
        print(f"distmapper: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
