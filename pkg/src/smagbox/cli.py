"""Command-line front end.

Subcommands: run, resume, analyze, analyze-force, verify-bound.
Exit codes: 0 success, 1 usage or bad input, 2 instability,
3 statistics not converged (verify-bound provisional or degenerate),
4 bound violation.
"""

import argparse
import json
import os
import sys

from . import __version__
from .bounds import check_bound
from .config import SCHEMA, build_config, load_config_file
from .driver import analyze_series, build_problem, resume_simulation, run_simulation
from .errors import ConfigError, InstabilityError, SchemaError, SmagboxError, SnapshotFormatError
from .statistics import read_summary

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INSTABILITY = 2
EXIT_UNCONVERGED = 3
EXIT_VIOLATION = 4


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; keep that for instability."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_config_flags(parser):
    parser.add_argument("-c", "--config", metavar="FILE", help="key = value config file")
    for key, (_, _, help_text) in SCHEMA.items():
        parser.add_argument(f"--{key}", metavar="V", dest=f"cfg::{key}", help=help_text)


def _collect_config(args):
    overrides = {}
    for name, value in vars(args).items():
        if name.startswith("cfg::") and value is not None:
            overrides[name.removeprefix("cfg::")] = value
    file_map = load_config_file(args.config) if args.config else {}
    return build_config(file_map, overrides)


def build_parser():
    parser = _Parser(prog="smagbox",
                     description="Periodic-box eddy-viscosity solver and "
                                 "dissipation-bound verifier")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_run = sub.add_parser("run", help="run a simulation")
    _add_config_flags(p_run)
    p_run.add_argument("--max-steps", type=int, default=None,
                       help="stop after this many steps (checkpoint and exit)")

    p_resume = sub.add_parser("resume", help="continue a run from its checkpoint")
    p_resume.add_argument("outdir")
    p_resume.add_argument("--t-end", type=float, default=None,
                          help="extend the run to this end time")
    p_resume.add_argument("--max-steps", type=int, default=None)

    p_an = sub.add_parser("analyze", help="summarize an existing series.csv")
    p_an.add_argument("series")
    p_an.add_argument("--meta", default=None, help="run_meta.json (default: sibling)")
    p_an.add_argument("--out", default=None, help="summary path (default: sibling summary.json)")
    p_an.add_argument("--spinup", default=None,
                      help='averaging cutoff time or "auto" (default: from run meta)')

    p_af = sub.add_parser("analyze-force", help="print force scales for a config")
    _add_config_flags(p_af)

    p_vb = sub.add_parser("verify-bound", help="check a summary against the bounds")
    p_vb.add_argument("summary")
    p_vb.add_argument("--out", default=None,
                      help="bound report path (default: sibling boundreport.json)")
    p_vb.add_argument("--alpha", type=float, action="append", default=None,
                      help="extra alpha values to evaluate (repeatable)")
    return parser


def _print_summary(summary):
    for key in ("U", "Re", "avg_epsS", "avg_eps0", "avg_epsdelta",
                "convergence_epsS", "energy_residual", "converged"):
        if key in summary:
            print(f"{key} = {summary[key]}")


def _cmd_run(args):
    cfg = _collect_config(args)
    result = run_simulation(cfg, max_steps=args.max_steps)
    print(f"run {'complete' if result.completed else 'paused'}: "
          f"{result.steps_taken} steps, output in {result.outdir}")
    _print_summary(result.summary)
    return EXIT_OK


def _cmd_resume(args):
    result = resume_simulation(args.outdir, t_end=args.t_end, max_steps=args.max_steps)
    print(f"resume {'complete' if result.completed else 'paused'}: "
          f"{result.steps_taken} steps, output in {result.outdir}")
    _print_summary(result.summary)
    return EXIT_OK


def _cmd_analyze(args):
    spinup = args.spinup
    if spinup is not None and spinup != "auto":
        spinup = float(spinup)
    summary = analyze_series(args.series, meta_path=args.meta, out_path=args.out,
                             spinup=spinup)
    _print_summary(summary)
    return EXIT_OK


def _cmd_analyze_force(args):
    cfg = _collect_config(args)
    if cfg.force_amplitude <= 0.0:
        raise ConfigError("force.amplitude", "analyze-force needs a nonzero force")
    _, _, force = build_problem(cfg)
    names = ("box", "grad_linf", "grad_rms", "grad_l3")
    print(f"F = {force.F:.12g}")
    for name, value in zip(names, force.candidates):
        print(f"L_candidate[{name}] = {value:.12g}")
    print(f"L = {force.L:.12g}")
    return EXIT_OK


def _cmd_verify_bound(args):
    summary = read_summary(args.summary)
    alphas = [2.0 / 3.0]
    if args.alpha:
        alphas.extend(args.alpha)
    report = check_bound(
        U=summary["U"],
        L=summary["L"],
        Re=summary["Re"],
        cs=summary["cs"],
        delta=summary["delta"],
        eps_measured=summary["avg_epsS"],
        converged=bool(summary["converged"]),
        alphas=alphas,
    )
    out = args.out or os.path.join(os.path.dirname(os.path.abspath(args.summary)),
                                   "boundreport.json")
    with open(out, "w", encoding="ascii") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")

    if report.degenerate:
        print("bound check skipped: degenerate scales (U or L is zero)")
        print("DEGENERATE")
        return EXIT_UNCONVERGED
    print(f"eps_measured = {report.eps_measured:.12g}")
    print(f"thm1_rhs = {report.thm1_rhs:.12g} (canonical 9/8 constant)")
    print(f"thm1_as_stated_rhs = {report.thm1_as_stated_rhs:.12g} (3/8 variant)")
    for a, v in sorted(report.thm2_rhs.items()):
        print(f"thm2_rhs[alpha={a:.6g}] = {v:.12g}")
    print(f"alpha_opt = {report.alpha_opt:.10g}, thm2_opt_rhs = {report.thm2_opt_rhs:.12g}")
    print(f"margin[thm1] = {report.margins['thm1']:.12g}")
    print(f"shear_reference_rhs = {report.shear_reference_rhs:.12g} (context only)")
    print(report.status)
    if report.violation:
        return EXIT_VIOLATION
    if report.status == "PROVISIONAL":
        return EXIT_UNCONVERGED
    return EXIT_OK


_COMMANDS = {
    "run": _cmd_run,
    "resume": _cmd_resume,
    "analyze": _cmd_analyze,
    "analyze-force": _cmd_analyze_force,
    "verify-bound": _cmd_verify_bound,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"smagbox: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"smagbox: file not found: {exc.filename or exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SchemaError, SnapshotFormatError) as exc:
        print(f"smagbox: schema mismatch: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InstabilityError as exc:
        print(f"smagbox: instability: {exc} (last good checkpoint retained)",
              file=sys.stderr)
        return EXIT_INSTABILITY
    except (ValueError, SmagboxError) as exc:
        print(f"smagbox: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main():
    sys.exit(main())
