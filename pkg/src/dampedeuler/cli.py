"""Command line entry point: run, sweep, check."""

from __future__ import annotations

import argparse
import logging
import sys

from . import harness


def _parse_vary(pairs):
    vary = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise SystemExit(f"--vary expects key=v1,v2,..., got {pair!r}")
        key, _, raw = pair.partition("=")
        vary[key.strip()] = [v.strip() for v in raw.split(",") if v.strip()]
    return vary


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dampedeuler",
        description="1D compressible Euler runs with time-dependent damping "
        "and energy diagnostics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one config file")
    p_run.add_argument("config")
    p_run.add_argument("--outdir", default=None, help="override the output directory")

    p_sweep = sub.add_parser("sweep", help="cartesian parameter sweep")
    p_sweep.add_argument("config")
    p_sweep.add_argument(
        "--vary",
        action="append",
        metavar="key=v1,v2,...",
        help="sweep values for mu, lambda, epsilon, or law (repeatable)",
    )
    p_sweep.add_argument("--cap", type=int, default=64, help="max number of runs")
    p_sweep.add_argument("--workers", type=int, default=1, help="parallel worker cap")
    p_sweep.add_argument("--outdir", default=None)

    p_check = sub.add_parser("check", help="run an acceptance suite")
    p_check.add_argument(
        "suite",
        choices=[
            "transform",
            "equivalence",
            "energy",
            "fps",
            "residual",
            "blowup",
            "kernels",
            "diagnostics",
            "all",
        ],
    )

    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")

    if args.command == "run":
        return harness.cmd_run(args.config, outdir=args.outdir)
    if args.command == "sweep":
        return harness.cmd_sweep(
            args.config,
            _parse_vary(args.vary),
            outdir=args.outdir,
            cap=args.cap,
            workers=args.workers,
        )
    return harness.cmd_check(args.suite)


if __name__ == "__main__":
    sys.exit(main())
