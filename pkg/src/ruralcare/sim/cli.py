"""Simulator command line: ``sim run``, ``sim gen``, ``sim compare``."""

import argparse
import json
import math
import sys
from pathlib import Path

from ..sync import ExchangeMode
from .engine import SimConfig, run
from .report import (
    CompareReport,
    compare,
    compare_csv,
    dump_report,
    format_table,
    render_figures,
    report_dict,
    write_report,
)
from .trace import generate_trace, load_trace_csv, load_workload_csv, trace_to_csv


def _add_run_args(parser, single_routing: bool):
    parser.add_argument("--trace", required=True, help="contact trace CSV")
    parser.add_argument("--workload", required=True, help="message workload CSV")
    if single_routing:
        parser.add_argument("--routing", choices=["epidemic", "direct"], default="epidemic")
    else:
        parser.add_argument(
            "--routing", choices=["epidemic", "direct"], action="append", default=None,
            help="repeatable; defaults to epidemic and direct",
        )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--horizon", type=float, required=True, help="simulation end (s)")
    parser.add_argument("--ttl", type=float, default=None, help="bundle TTL (s)")
    parser.add_argument(
        "--bandwidth", type=float, default=math.inf,
        help="default bundles/s for trace rows with a blank bandwidth cell",
    )


def _config(args, routing: str) -> SimConfig:
    kwargs = dict(
        routing=ExchangeMode(routing),
        seed=args.seed,
        horizon=args.horizon,
        default_bandwidth=args.bandwidth,
    )
    if args.ttl is not None:
        kwargs["ttl_seconds"] = int(args.ttl)
    return SimConfig(**kwargs)


def cmd_run(args) -> int:
    trace = load_trace_csv(args.trace)
    workload = load_workload_csv(args.workload)
    config = _config(args, args.routing)
    result = run(trace, workload, config)
    if args.out:
        write_report(result, config, args.out)
    else:
        sys.stdout.write(dump_report(report_dict(result, config)))
    if args.figures:
        render_figures(CompareReport(configs=(config,), results=(result,)), args.figures)
    return 0


def cmd_gen(args) -> int:
    trace = generate_trace(
        n_nodes=args.nodes,
        horizon=args.horizon,
        contact_rate=args.rate,
        seed=args.seed,
        duration=args.duration,
        bandwidth=args.contact_bandwidth,
    )
    text = trace_to_csv(trace)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_compare(args) -> int:
    trace = load_trace_csv(args.trace)
    workload = load_workload_csv(args.workload)
    routings = args.routing or ["epidemic", "direct"]
    configs = [_config(args, routing) for routing in routings]
    report = compare(trace, workload, configs)
    sys.stdout.write(format_table(report))
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "compare.json").write_text(
            json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        (out_dir / "compare.csv").write_text(compare_csv(report), encoding="utf-8")
        if not args.no_figures:
            render_figures(report, out_dir / "figures")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="sim", description="Contact-trace delivery simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="replay one trace/workload under one routing")
    _add_run_args(run_p, single_routing=True)
    run_p.add_argument("--out", default=None, help="write the JSON report here")
    run_p.add_argument("--figures", default=None, help="directory for rendered PNG figures")
    run_p.set_defaults(func=cmd_run)

    gen_p = sub.add_parser("gen", help="generate a random contact trace")
    gen_p.add_argument("--nodes", type=int, required=True)
    gen_p.add_argument("--rate", type=float, required=True, help="contacts per second")
    gen_p.add_argument("--seed", type=int, default=0)
    gen_p.add_argument("--horizon", type=float, default=86400.0)
    gen_p.add_argument("--duration", type=float, default=60.0, help="contact duration (s)")
    gen_p.add_argument("--contact-bandwidth", type=float, default=math.inf)
    gen_p.add_argument("--out", default=None)
    gen_p.set_defaults(func=cmd_gen)

    cmp_p = sub.add_parser("compare", help="run several routings and tabulate deltas")
    _add_run_args(cmp_p, single_routing=False)
    cmp_p.add_argument("--out", default=None, help="directory for compare.json/csv and figures")
    cmp_p.add_argument("--no-figures", action="store_true")
    cmp_p.set_defaults(func=cmd_compare)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
