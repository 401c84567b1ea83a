#!/usr/bin/env python3

"""
Get args through argparse
"""

import argparse
from argparse import ArgumentParser
from pathlib import Path
from typing import Dict, List, Optional

from geograph.enums import Command
from geograph.errors import ArgumentError
from geograph.globals import DEFAULT_SAMPLES, DEFAULT_SEED, CATALOG_DIR_ENV_VAR, WORKERS_ENV_VAR
from geograph.logging import get_logger
from geograph.space import load_catalog_space, parse_space

logger = get_logger()


def get_geograph_args(argv: Optional[List[str]] = None):
    """
    Use the simple argument parse to return an argument object
    :param argv: defaults to sys.argv
    :return:
    """
    parser = ArgumentParser(prog="geograph", description=f"""
Geodesic graphs and natural reductivity of homogeneous Finsler metrics.

Commands:
  * solve    print the linear family graph and the closed-form Finsler graph
  * verdict  decide natural reductivity of the space's norm
  * verify   run the residual battery against the graph the verdict would use
  * catalog  list the built-in spaces
  * describe echo the validated space

The following environment variables are read:
  * {WORKERS_ENV_VAR}      (threads for sampled checks, default 1)
  * {CATALOG_DIR_ENV_VAR}  (directory of catalog json files)
""",
                            formatter_class=argparse.RawTextHelpFormatter)

    parser.add_argument("command",
                        choices=[command.value for command in Command],
                        help="What to run")

    parser.add_argument("--space",
                        required=False,
                        help="Name of a built-in catalog space")

    parser.add_argument("--file",
                        required=False,
                        help="Path to a space json file")

    parser.add_argument("--seed",
                        type=int,
                        default=DEFAULT_SEED,
                        help="Seed of every sampled check")

    parser.add_argument("--samples",
                        type=int,
                        default=DEFAULT_SAMPLES,
                        help="Random directions per sampled check")

    parser.add_argument("--param",
                        action="append",
                        default=[],
                        help="Override a space parameter, key=rational, may be repeated")

    parser.add_argument("--json",
                        action="store_true",
                        default=False,
                        help="Print the run report as json")

    parser.add_argument("--verbose",
                        action="store_true",
                        default=False,
                        help="Set log level from info to debug")

    return parser.parse_args(argv)


def get_param_overrides(params: List[str]) -> Dict[str, str]:
    """
    key=rational pairs to a dict
    :param params:
    :return:
    """
    overrides = {}
    for param in params:
        key, sep, value = param.partition("=")
        if not sep or not key.strip() or not value.strip():
            logger.error(f"--param expects key=rational, got '{param}'")
            raise ArgumentError(f"--param expects key=rational, got '{param}'")
        overrides[key.strip()] = value.strip()
    return overrides


def check_geograph_args(args):
    """
    Read through inputs and assign objects based on input types
    :return:
    """
    setattr(args, "command", Command(args.command))

    if args.samples < 1:
        logger.error(f"--samples must be positive, got {args.samples}")
        raise ArgumentError(f"--samples must be positive, got {args.samples}")

    if args.seed < 0:
        logger.error(f"--seed must be non-negative, got {args.seed}")
        raise ArgumentError(f"--seed must be non-negative, got {args.seed}")

    setattr(args, "overrides", get_param_overrides(args.param))

    if args.command is Command.CATALOG:
        setattr(args, "space_file", None)
        return args

    # Confirm exactly one space source
    if args.space is not None and args.file is not None:
        logger.error("Please specify either --space OR --file")
        raise ArgumentError("Please specify either --space OR --file")
    elif args.space is None and args.file is None:
        logger.error("Please specify either --space OR --file")
        raise ArgumentError("Please specify either --space OR --file")

    if args.space is not None:
        space_file = load_catalog_space(args.space, args.overrides)
    else:
        space_file = parse_space(Path(args.file), args.overrides)

    setattr(args, "space_file", space_file)

    return args
