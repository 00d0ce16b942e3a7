"""Command-line entry point: ``rwcert prove | check | bench``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .certificates import dumps
from .orchestrator import ProveConfig, parse_engines, prove_file, run_bench, run_check
from .rewriting import ParseError
from .sat import solver_from_env

EXIT_OK, EXIT_ERROR, EXIT_MAYBE = 0, 1, 2


def _config(args) -> ProveConfig:
    return ProveConfig(
        mode=args.mode,
        engines=parse_engines(args.engine),
        timeout=args.timeout,
        automata_states=args.states,
        solver=solver_from_env(),
    )


def cmd_prove(args) -> int:
    verdict = prove_file(args.file, _config(args))
    print(verdict.status)
    if verdict.definitive:
        print(f"engine: {verdict.engine}")
        if args.cert:
            Path(args.cert).write_text(dumps(verdict.certificate), encoding="utf-8")
            print(f"certificate: {args.cert}")
        return EXIT_OK
    print(f"reason: {verdict.reason}")
    return EXIT_MAYBE


def cmd_check(args) -> int:
    try:
        cert = json.loads(Path(args.cert).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        print(f"INVALID(malformed certificate: {e})")
        return EXIT_ERROR
    result = run_check(cert, Path(args.system).read_text(encoding="utf-8"))
    print(result)
    return EXIT_OK if result else EXIT_ERROR


def cmd_bench(args) -> int:
    rows = run_bench(args.directory, args.report, _config(args))
    for row in rows:
        print(f"{row['name']}\t{row['verdict']}\t{row['engine']}\t{row['seconds']}")
    return EXIT_OK


def _common(p):
    p.add_argument("--mode", choices=["string", "cycle"], help="override the file's mode")
    p.add_argument("--engine", default="auto", help="auto or a comma list of loop,matrix,automata")
    p.add_argument("--timeout", type=float, default=60.0, metavar="SECONDS")
    p.add_argument("--states", type=int, default=4, help="largest automaton to search for")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rwcert", description=__doc__)
    parser.add_argument("--version", action="version", version=f"rwcert {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prove", help="decide termination of a system")
    _common(p)
    p.add_argument("--cert", metavar="OUT.json", help="write the certificate here")
    p.add_argument("file")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("check", help="verify a certificate against a system")
    p.add_argument("--cert", required=True, metavar="FILE.json")
    p.add_argument("system")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", help="run every system file in a directory")
    _common(p)
    p.add_argument("--report", required=True, metavar="OUT.csv")
    p.add_argument("directory")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
