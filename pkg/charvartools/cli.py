"""Command line interface: ``charvar --n 1``, ``charvar --poly ...``, ``charvar --tables``."""
import argparse
import json
import sys

from . import utils
from .cache import default_cache
from .pipeline import cmd_pipeline
from .tables import cmd_tables, tables_to_dict, tables_to_text
from .utils import message, parse_radicands, solver_config

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_STAGE_FAILURE = 2
EXIT_MISMATCH = 3


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    """Parser whose usage errors exit with status 1."""

    def error(self, msg):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {msg}\n")


def build_parser():
    parser = ArgumentParser(
        prog="charvar",
        description="Character varieties of two-bridge links from 1/n surgery on the Borromean rings",
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--n", type=int, help="surgery index n >= 1")
    source.add_argument("--word", help="relator word in a, b, e.g. 'b a b^-1 a^-1 b^-1 a b'")
    source.add_argument("--poly", help="character polynomial in x, y, z")
    source.add_argument("--tables", action="store_true", help="recompute both tables and diff them")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--cache-dir", default=None, help="directory of the intermediate cache")
    parser.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    parser.add_argument("--radicands", default=None, help="allowed radicands, e.g. 2,3")
    parser.add_argument("--max-n", type=int, default=solver_config["max_validated_n"])
    parser.add_argument("--processes", type=int, default=1, help="worker processes for --tables")
    parser.add_argument("--samples", type=int, default=200, help="fiber dichotomy samples")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--verbosity", type=int, default=utils.global_verbosity)
    return parser


def _emit(text):
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def main(argv=None):
    """Entry point; returns the process exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    utils.global_verbosity = args.verbosity
    try:
        radicands = parse_radicands(args.radicands)
        if args.n is not None and args.n < 1:
            raise UsageError(f"--n must be at least 1, got {args.n}")
        if args.max_n < 1:
            raise UsageError(f"--max-n must be at least 1, got {args.max_n}")
        if args.processes < 1:
            raise UsageError(f"--processes must be at least 1, got {args.processes}")
    except (UsageError, ValueError) as err:
        message(f"charvar: {err}", message_verbosity=0)
        return EXIT_USAGE
    cache = default_cache(args.cache_dir, enabled=not args.no_cache)

    if args.tables:
        component_table, conic_table, mismatches, failures = cmd_tables(
            max_n=args.max_n,
            processes=args.processes,
            cache=cache,
            radicands=radicands,
            samples=args.samples,
            seed=args.seed,
            verbosity=args.verbosity,
        )
        result = (component_table, conic_table, mismatches, failures)
        if args.format == "json":
            _emit(json.dumps(tables_to_dict(*result), sort_keys=True, indent=2))
        else:
            _emit(tables_to_text(*result))
        return EXIT_MISMATCH if mismatches else EXIT_OK

    if args.n is not None:
        spec = {"n": args.n}
    elif args.word is not None:
        spec = {"word": args.word}
    else:
        spec = {"polynomial": args.poly}
    try:
        report = cmd_pipeline(
            spec,
            cache=cache,
            radicands=radicands,
            samples=args.samples,
            seed=args.seed,
            verbosity=args.verbosity,
        )
    except ValueError as err:
        message(f"charvar: {err}", message_verbosity=0)
        return EXIT_USAGE
    _emit(report.to_json() if args.format == "json" else report.to_text())
    return EXIT_STAGE_FAILURE if report.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
