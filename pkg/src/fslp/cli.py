"""Batch command line driver.

Subcommands: run <config>, perf <case>, convergence <case>, list-cases.
Exit codes: 0 success, 1 solver error, 2 config error.
"""

import argparse
import os
import sys

from .cases import convergence_study, get_case, list_cases, run_case
from .config import parse_config
from .errors import ConfigError, SolverError
from .output import write_fields
from .perf import format_table, perf_compare
from .schemes import SchemeConfig


def _build_parser():
    parser = argparse.ArgumentParser(prog="fslp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a config file")
    p_run.add_argument("config_path")
    p_run.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")

    p_perf = sub.add_parser("perf", help="compare scheme step counts and timings")
    p_perf.add_argument("case")
    p_perf.add_argument("--schemes", default="fslp,oslp")
    p_perf.add_argument("--nx", default="64")
    p_perf.add_argument("--t-end", type=float, default=None)
    p_perf.add_argument("--mach", type=float, default=None)

    p_conv = sub.add_parser("convergence", help="grid convergence study")
    p_conv.add_argument("case")
    p_conv.add_argument("--resolutions", default="32,64,128")
    p_conv.add_argument("--scheme", default="fslp")
    p_conv.add_argument("--order", type=int, default=2)
    p_conv.add_argument("--t-end", type=float, default=None)

    sub.add_parser("list-cases", help="list the available cases")
    return parser


def _cmd_run(args):
    with open(args.config_path, encoding="utf-8") as fh:
        text = fh.read()
    cfg = parse_config(text, overrides=args.override)
    case = get_case(cfg.case, mach=cfg.mach)
    config = cfg.scheme_config()
    os.makedirs(cfg.output_dir, exist_ok=True)
    grid, report, snapshots = run_case(
        case,
        config,
        resolution=cfg.resolution,
        t_end=cfg.t_end,
        snapshot_times=cfg.snapshots,
        diagnostics=cfg.diagnostics,
    )
    ext = {"csv": "csv", "vtk-legacy": "vtk"}
    for t_snap, snap in snapshots:
        for fmt in cfg.formats:
            path = os.path.join(cfg.output_dir, f"{cfg.case}_t{t_snap:.6g}.{ext[fmt]}")
            write_fields(snap, case.gas, fmt, path)
    for fmt in cfg.formats:
        path = os.path.join(cfg.output_dir, f"{cfg.case}_final.{ext[fmt]}")
        write_fields(grid, case.gas, fmt, path)
    print(
        f"{cfg.case}: {report.step_count} steps, wall {report.wall_time:.2f}s, "
        f"ekin_ratio {report.ekin_ratio:.6g}, max|vel| {report.max_abs_velocity:.3e}, "
        f"L1(rho) drift {report.l1_density:.6e}"
    )
    return 0


def _cmd_perf(args):
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    resolutions = [int(n) for n in str(args.nx).split(",") if n.strip()]
    records = perf_compare(args.case, resolutions, schemes, t_end=args.t_end, mach=args.mach)
    print(format_table(records))
    return 0


def _cmd_convergence(args):
    resolutions = [int(n) for n in args.resolutions.split(",") if n.strip()]
    case = get_case(args.case)
    config = SchemeConfig(scheme=args.scheme, order=args.order)
    study = convergence_study(case, config, resolutions, t_end=args.t_end)
    for n, e1, einf in zip(study["resolutions"], study["l1"], study["linf"]):
        print(f"N={n:5d}  L1={e1:.6e}  Linf={einf:.6e}")
    print(f"fitted L1 order: {study['slope']:.3f}")
    return 0


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "perf":
            return _cmd_perf(args)
        if args.command == "convergence":
            return _cmd_convergence(args)
        if args.command == "list-cases":
            print("\n".join(list_cases()))
            return 0
    except (ConfigError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, ValueError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
