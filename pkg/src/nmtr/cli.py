"""Command-line front end: ``nmtr run | verify | profile``.

Exit codes: 0 success, 1 configuration error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .core import ConfigError
from .experiment import (
    ExperimentConfig,
    format_checks,
    read_results_csv,
    run_experiment,
    verify,
)
from .problems import SUITES
from .profiles import MEASURES, profile_from_rows, write_profile_csv

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY = 0, 1, 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nmtr", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a solver x problem matrix")
    run.add_argument("--config", required=True, help="experiment JSON file")
    run.add_argument("--out", help="output directory (overrides config)")
    run.add_argument("--workers", type=int, help="parallel worker processes (overrides config)")
    run.add_argument("--suite", choices=sorted(SUITES), help="problem suite (overrides config)")
    run.add_argument("--solvers", help="comma-separated solver labels (overrides config)")

    ver = sub.add_parser("verify", help="gradient, term and invariant checks")
    ver.add_argument("--suite", required=True, choices=sorted(SUITES))

    prof = sub.add_parser("profile", help="performance profile from a results.csv")
    prof.add_argument("--results", required=True)
    prof.add_argument("--measure", choices=MEASURES, default="ng")
    prof.add_argument("--points", type=int, default=200, help="tau grid size")
    prof.add_argument("--out", help="write CSV here instead of stdout")
    return parser


def _cmd_run(args) -> int:
    cfg = ExperimentConfig.from_json(args.config)
    if args.out is not None:
        cfg.out = args.out
    if args.workers is not None:
        cfg.workers = args.workers
    if args.suite is not None:
        cfg.suite = args.suite
    if args.solvers is not None:
        cfg.solvers = [s.strip() for s in args.solvers.split(",") if s.strip()]
    runs = run_experiment(cfg)
    n_ok = sum(r.converged for r in runs)
    print(f"{len(runs)} runs, {n_ok} converged; results in {cfg.out}/results.csv")
    for r in runs:
        if not r.converged:
            print(f"  {r.problem_name} / {r.solver_name}: {r.status}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    checks = verify(args.suite)
    print(format_checks(checks))
    return EXIT_OK if all(c.ok for c in checks) else EXIT_VERIFY


def _cmd_profile(args) -> int:
    rows = read_results_csv(args.results)
    solvers, taus, rho = profile_from_rows(rows, args.measure, args.points)
    write_profile_csv(args.out or sys.stdout, solvers, taus, rho)
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"run": _cmd_run, "verify": _cmd_verify, "profile": _cmd_profile}[args.command]
    try:
        return handler(args)
    except (ConfigError, KeyError, FileNotFoundError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
