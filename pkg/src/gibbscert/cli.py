"""Command-line interface.

Subcommands:

    gibbscert run <file> [--out DIR] [--seed INT] [--tol FLOAT]
    gibbscert sweep <file> --param NAME --values v1,v2,... [--out DIR] [...]
    gibbscert describe <construction-id>
    gibbscert list

``run`` accepts either a path to a scenario file or the name of a bundled
scenario.  Exit codes: 0 all checks pass, 1 a check failed, 2 input error
(parse failure, unknown construction/parameter, infeasible construction).
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import CheckFailedError, GibbsCertError
from .runner import (
    EXIT_CHECK_FAILURE,
    EXIT_INPUT_ERROR,
    EXIT_PASS,
    bundled_scenario_names,
    bundled_scenario_path,
    describe,
    run_scenario,
    sweep,
)

__all__ = ["main"]


def _resolve_scenario(argument: str) -> str:
    if os.path.exists(argument):
        return argument
    if not argument.endswith(".scn") and "/" not in argument:
        return bundled_scenario_path(argument)
    raise FileNotFoundError(f"scenario file not found: {argument}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gibbscert",
        description=(
            "Construct, certify, and bound the coherence cost of "
            "Gibbs-preserving quantum operations."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario file (or bundled scenario name)")
    run_p.add_argument("scenario", help="path to a .scn file or a bundled scenario name")
    run_p.add_argument("--out", default=".", help="output directory for reports")
    run_p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    run_p.add_argument("--tol", type=float, default=1e-9, help="residual tolerance for checks")

    sweep_p = sub.add_parser("sweep", help="sweep a numeric parameter and tabulate bounds")
    sweep_p.add_argument("scenario", help="path to a .scn file or a bundled scenario name")
    sweep_p.add_argument("--param", required=True, help="construction parameter or 'epsilon'")
    sweep_p.add_argument(
        "--values", required=True, help="comma-separated numeric values to sweep over"
    )
    sweep_p.add_argument("--out", default=".", help="output directory for the CSV")
    sweep_p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    sweep_p.add_argument("--tol", type=float, default=1e-9, help="residual tolerance")

    desc_p = sub.add_parser("describe", help="show a construction's parameter schema")
    desc_p.add_argument("construction", help="construction identifier")

    sub.add_parser("list", help="list bundled scenarios and registered constructions")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            path = _resolve_scenario(args.scenario)
            report = run_scenario(path, out_dir=args.out, seed=args.seed, tol=args.tol)
            with open(report.summary_path, "r", encoding="utf-8") as handle:
                sys.stdout.write(handle.read())
            print(f"reports: {report.summary_path}, {report.csv_path}")
            return report.exit_code
        if args.command == "sweep":
            path = _resolve_scenario(args.scenario)
            raw = [v for v in args.values.split(",") if v.strip()]
            values = [float(v) for v in raw]
            csv_path = sweep(
                path, args.param, values, out_dir=args.out, seed=args.seed, tol=args.tol
            )
            print(f"sweep written: {csv_path}")
            return EXIT_PASS
        if args.command == "describe":
            sys.stdout.write(describe(args.construction))
            return EXIT_PASS
        if args.command == "list":
            print("bundled scenarios:")
            for name in bundled_scenario_names():
                print(f"  {name}")
            print("constructions:")
            from .runner import CONSTRUCTIONS

            for name in sorted(CONSTRUCTIONS):
                print(f"  {name}")
            return EXIT_PASS
    except CheckFailedError as exc:
        print(f"check failure: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILURE
    except (GibbsCertError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
