"""Command-line harness: trace generation, simulation runs, transition
profiling, table dumps and the storage budget."""

import argparse
import hashlib
import json
import os
import sys

from . import baselines, memsim, profiler, space, tracegen
from .engine import EngineConfig
from .geometry import GEOMETRIES

SCHEMA_VERSION = 1


def _resolve_seed(args) -> int:
    env = os.environ.get("PANGLOSS_SEED")
    return int(env) if env is not None else args.seed


def _engine_config(args) -> EngineConfig:
    return EngineConfig(geo=GEOMETRIES[args.level], degree=args.degree)


def _cmd_gen(args) -> int:
    spec = tracegen.build_spec(
        args.pattern,
        length=args.length,
        base_page=args.base_page,
        pages=args.pages,
        seed=_resolve_seed(args),
    )
    addresses = tracegen.generate(spec, GEOMETRIES[args.level])
    tracegen.write_trace(args.out, addresses, args.format)
    print(f"wrote {len(addresses)} accesses to {args.out} ({args.format})")
    return 0


def _cmd_run(args) -> int:
    trace = tracegen.read_trace(args.trace, args.trace_format)
    prefetcher = baselines.make_prefetcher(args.prefetcher, _engine_config(args))
    cache_cfg = memsim.CacheConfig(size_bytes=args.cache_kb * 1024, ways=args.ways)
    metrics = memsim.run_simulation(trace, prefetcher, cache_cfg, warmup=args.warmup)

    config = {
        "trace": args.trace,
        "prefetcher": args.prefetcher,
        "level": args.level,
        "degree": args.degree,
        "cache_kb": args.cache_kb,
        "ways": args.ways,
        "warmup": args.warmup,
    }
    config_hash = hashlib.sha256(json.dumps(config, sort_keys=True).encode()).hexdigest()[:16]
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "config_hash": config_hash,
        "metrics": metrics.as_dict(),
    }
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out_metrics:
        with open(args.out_metrics, "w") as out:
            out.write(text)
    else:
        sys.stdout.write(text)
    if args.out_csv:
        fresh = not os.path.exists(args.out_csv) or os.path.getsize(args.out_csv) == 0
        with open(args.out_csv, "a") as out:
            if fresh:
                out.write(memsim.METRICS_CSV_HEADER + "\n")
            out.write(memsim.metrics_csv_row(config_hash, args.prefetcher, metrics) + "\n")
    return 0


def _cmd_profile(args) -> int:
    trace = tracegen.read_trace(args.trace, args.trace_format)
    matrix = profiler.profile(trace, GEOMETRIES[args.level], args.mode)
    paths = profiler.export_matrix(matrix, args.out_prefix)
    print(f"{matrix.total} transitions, {len(matrix.nonzero())} nonzero cells")
    for name, path in paths.items():
        print(f"wrote {name}: {path}")
    return 0


def _cmd_space(args) -> int:
    print(space.format_table(space.space_budget()))
    return 0


def _cmd_dump_state(args) -> int:
    prefetcher = baselines.make_prefetcher(args.prefetcher, _engine_config(args))
    if not hasattr(prefetcher, "delta_cache"):
        raise ValueError(f"prefetcher {args.prefetcher!r} keeps no table state to dump")
    trace = tracegen.read_trace(args.trace, args.trace_format)
    for addr in trace:
        prefetcher.on_access(addr)
    delta_path = f"{args.out_prefix}_delta_cache.csv"
    prefetcher.delta_cache.dump_csv(delta_path)
    print(f"wrote {delta_path}")
    if hasattr(prefetcher, "page_cache"):
        page_path = f"{args.out_prefix}_page_cache.csv"
        prefetcher.page_cache.dump_csv(page_path)
        print(f"wrote {page_path}")
    return 0


def _add_level(parser) -> None:
    parser.add_argument("--level", choices=sorted(GEOMETRIES), default="l2",
                        help="table geometry preset (default l2)")


def _add_trace_input(parser) -> None:
    parser.add_argument("--trace", required=True, help="trace file to replay")
    parser.add_argument("--trace-format", choices=("auto", "text", "bin"), default="auto")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pangloss",
        description="Trace-driven simulator for the delta-transition Markov prefetcher",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic trace file")
    gen.add_argument("--pattern", required=True,
                     help="stride:D | multi:D1,D2,.. | cycle:D1,.. | "
                          "secondary:STRIDE,EXTRA[,PERIOD] | random | "
                          "interleave:SUB+SUB+..")
    gen.add_argument("--length", type=int, default=10000)
    gen.add_argument("--base-page", type=int, default=0)
    gen.add_argument("--pages", type=int, default=1024)
    gen.add_argument("--seed", type=int, default=0,
                     help="pattern seed; PANGLOSS_SEED overrides")
    gen.add_argument("--format", choices=("text", "bin"), default="text")
    gen.add_argument("--out", required=True)
    _add_level(gen)
    gen.set_defaults(func=_cmd_gen)

    run = sub.add_parser("run", help="simulate a trace and report metrics")
    _add_trace_input(run)
    run.add_argument("--prefetcher", choices=baselines.PREFETCHER_KINDS, default="pangloss")
    run.add_argument("--degree", type=int, default=4)
    run.add_argument("--cache-kb", type=int, default=512)
    run.add_argument("--ways", type=int, default=8)
    run.add_argument("--warmup", type=int, default=0,
                     help="accesses excluded from all counters")
    run.add_argument("--out-metrics", help="metrics JSON path (stdout if omitted)")
    run.add_argument("--out-csv", help="append one metrics row to this CSV")
    _add_level(run)
    run.set_defaults(func=_cmd_run)

    prof = sub.add_parser("profile", help="count delta transitions into matrix artifacts")
    _add_trace_input(prof)
    prof.add_argument("--mode", choices=profiler.PROFILE_MODES, default="global")
    prof.add_argument("--out-prefix", required=True)
    _add_level(prof)
    prof.set_defaults(func=_cmd_profile)

    spc = sub.add_parser("space", help="print the storage budget table")
    spc.set_defaults(func=_cmd_space)

    dump = sub.add_parser("dump-state", help="replay a trace and dump table contents")
    _add_trace_input(dump)
    dump.add_argument("--prefetcher", choices=("pangloss", "global-delta"), default="pangloss")
    dump.add_argument("--degree", type=int, default=4)
    dump.add_argument("--out-prefix", required=True)
    _add_level(dump)
    dump.set_defaults(func=_cmd_dump_state)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
