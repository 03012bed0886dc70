#!/usr/bin/env python
"""
h1 <subcommand> [--in FILE]... [--out FILE] [options]

Exit status: 0 ok, 2 bad input, 3 not regular / not normal / singular,
4 not congruent, 5 integrability violated.
"""
import argparse
import logging
import sys
from typing import Optional, Sequence

from h1frames import COMMAND_GROUPS, find_protocol
from h1frames.utils.config import JobConfig, parse_grid
from h1frames.utils.exceptions import H1Error, InvalidInput

LOG_FORMAT = "%(asctime)s %(levelname)s: %(message)s"

def _orientation(text : str)->int:
    if text in ("+", "+1", "1"):
        return 1
    if text in ("-", "-1"):
        return -1
    raise argparse.ArgumentTypeError(f"orientation must be + or -, got {text!r}")

def build_parser()->argparse.ArgumentParser:
    subcommands = "; ".join(
        f"{group.group_enum.value}: {', '.join(group.subcommands)}" for group in COMMAND_GROUPS
    )
    parser = argparse.ArgumentParser(
        prog = "h1",
        description = "Invariants, reconstruction and congruence of curves and surfaces in H^1",
    )
    parser.add_argument("subcommand", help = subcommands)
    parser.add_argument("--in", dest = "inputs", action = "append", default = [], metavar = "FILE")
    parser.add_argument("--out", dest = "output", metavar = "FILE")
    parser.add_argument("--report", metavar = "FILE", help = "JSON sidecar with residuals")
    parser.add_argument("--plot", metavar = "FILE", help = "t,x,y,z CSV of a geodesic")
    parser.add_argument("--tol", type = float)
    parser.add_argument("--grid", metavar = "NxM")
    parser.add_argument("--derivatives", choices = ("analytic", "fd"), default = "analytic")
    parser.add_argument("--orientation", type = _orientation, default = 1)
    parser.add_argument("--eps-regular", type = float)
    parser.add_argument("--eps-singular", type = float)
    parser.add_argument("--t-end", type = float)
    parser.add_argument("--steps", type = int, default = 1000)
    parser.add_argument("-v", "--verbose", action = "store_true")
    return parser

def config_from_args(args : argparse.Namespace)->JobConfig:
    return JobConfig(
        subcommand = args.subcommand,
        inputs = tuple(args.inputs),
        output = args.output,
        report = args.report,
        plot = args.plot,
        tol = args.tol,
        grid = parse_grid(args.grid),
        derivatives = args.derivatives,
        orientation = args.orientation,
        eps_regular = args.eps_regular,
        eps_singular = args.eps_singular,
        t_end = args.t_end,
        n_steps = args.steps,
    )

def main(argv : Optional[Sequence[str]] = None)->int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return InvalidInput.exit_code if e.code else 0

    logging.basicConfig(
        level = logging.DEBUG if args.verbose else logging.WARNING,
        format = LOG_FORMAT,
    )
    try:
        config = config_from_args(args)
        protocol = find_protocol(config.subcommand)
        if protocol is None:
            raise InvalidInput(f"Unknown subcommand {config.subcommand!r}")
        logging.info(f"Running {protocol.name}")
        return protocol.run(config)
    except H1Error as e:
        logging.error(str(e))
        return e.exit_code
    except (ValueError, OSError) as e:
        logging.error(f"{type(e).__name__}: {e}")
        return InvalidInput.exit_code

if __name__ == "__main__":
    sys.exit(main())
