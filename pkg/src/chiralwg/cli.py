"""Command-line entry point.

    chiralwg steady --config scenario.json
    chiralwg sweep --config scenario.json --param power --from 1e-3 --to 10 --steps 41 --log --out sweep.csv
    chiralwg figure fig7a --out data/
    chiralwg validate

Exit codes: 0 success, 2 configuration error, 3 solver error, 4 validation failure.
Sweep worker count comes from --workers or the CHIRALWG_WORKERS variable.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import SWEEP_PARAMETERS, ScenarioConfig, SweepSpec
from .dynamics import assemble_liouvillian, solve_steady
from .errors import AmbiguousDrive, ConfigError, SolverError
from .observables import compute_stats, drive_direction

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_VALIDATION = 0, 2, 3, 4


def format_stats(stats, method):
    def fmt(v):
        if v is None:
            return "undefined"
        if isinstance(v, complex):
            return f"{v.real:.6f}{v.imag:+.6f}j"
        if isinstance(v, float):
            return f"{v:.6f}" if abs(v) >= 1e-4 or v == 0 else f"{v:.6e}"
        return str(v)

    rows = [
        ("direction", stats.direction), ("p", stats.p), ("t", stats.t), ("r", stats.r),
        ("|t|^2", None if stats.t is None else abs(stats.t) ** 2),
        ("T", stats.T), ("R", stats.R), ("leakage", stats.leakage),
        ("I_c_T", stats.I_c_T), ("I_inc_T", stats.I_inc_T),
        ("I_c_R", stats.I_c_R), ("I_inc_R", stats.I_inc_R),
        ("g2_T", stats.g2_T), ("g2_R", stats.g2_R), ("purity", stats.purity), ("method", method),
    ]
    return "\n".join(f"{name:>9} = {fmt(value)}" for name, value in rows)


def cmd_steady(args):
    config = ScenarioConfig.load(args.config)
    chain = config.chain()
    drive_direction(config.drive)
    rho = solve_steady(assemble_liouvillian(chain, config.drive), chain, config.drive)
    stats = compute_stats(chain, config.drive, rho)
    print(format_stats(stats, rho.method))
    return EXIT_OK


def cmd_sweep(args):
    from .sweep import run_sweep, sweep_comments, write_table

    config = ScenarioConfig.load(args.config)
    if args.drive is None:
        drive_direction(config.drive)
    spec = SweepSpec(args.param, args.start, args.stop, args.steps, "log" if args.log else "linear")
    rows = run_sweep(config, spec, args.drive, args.workers)
    write_table(args.out, rows, comments=sweep_comments(config, spec, args.drive))
    failed = sum(bool(r["diagnostics"]) for r in rows)
    print(f"wrote {len(rows)} rows to {args.out}" + (f" ({failed} failed points)" if failed else ""))
    return EXIT_OK


def cmd_figure(args):
    from .figures import FIGURES, run_figure

    ids = sorted(FIGURES) if args.figure_id == "all" else [args.figure_id]
    for fig_id in ids:
        for path in run_figure(fig_id, args.out, args.workers):
            print(path)
    return EXIT_OK


def cmd_validate(args):
    from .validation import run_validate

    results = run_validate(stream=sys.stdout)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


def build_parser():
    from .figures import FIGURES

    parser = argparse.ArgumentParser(prog="chiralwg", description=__doc__.splitlines()[0] or None)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("steady", help="steady-state statistics for one scenario")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("sweep", help="sweep one parameter and write a CSV table")
    p.add_argument("--config", required=True)
    p.add_argument("--param", required=True, choices=SWEEP_PARAMETERS)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--log", action="store_true", help="geometric grid")
    p.add_argument("--drive", choices=("forward", "backward"),
                   help="put the configured drive amplitude on this port")
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="regenerate the data behind one figure")
    p.add_argument("figure_id", choices=[*sorted(FIGURES), "all"])
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("validate", help="run oracle and invariant checks")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, AmbiguousDrive) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
