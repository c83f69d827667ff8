"""Command-line entry point: ``twistcalc <command> <file>``."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

import voluptuous as vol

from .const import (
    COMMANDS,
    CONF_EFFECTIVE_SEARCH_BOUND,
    CONF_REFINED,
    CONF_SECOND_KIND,
    CONF_SEMISTABLE_SEARCH_LENGTH,
    DOMAIN,
    SURFACE_OPERATIONS,
    VERSION,
    ExitCode,
)
from .document import CurveDocument, format_document, parse
from .exceptions import ParseErrors, TwistcalcError
from .report import run

_LOGGER = logging.getLogger(__name__)


def _read(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    return Path(source).read_text(encoding="utf-8")


def _shared() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--json", action="store_true", help="print the report as JSON")
    shared.add_argument("--debug", action="store_true", help="log analysis steps to stderr")
    shared.add_argument(
        "--refined", action="store_true", help="use the refined dimension bound"
    )
    shared.add_argument(
        "--second-kind",
        action="store_true",
        help="blow up every node that is not a self-node before building spin structures",
    )
    shared.add_argument(
        "--search-bound",
        type=int,
        default=None,
        help="coefficient bound of the effectivity search",
    )
    shared.add_argument(
        "--semistable-length",
        type=int,
        default=None,
        help="longest rational chain tried by the semistable model search",
    )
    return shared


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=DOMAIN,
        description="Twisted canonical divisors, limit spin structures and flat surgeries.",
    )
    parser.add_argument("--version", action="version", version=f"{DOMAIN} {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)
    shared = _shared()
    for command in COMMANDS:
        command_parser = sub.add_parser(command, parents=[shared])
        if command == "surface":
            command_parser.add_argument("operation", choices=SURFACE_OPERATIONS)
        if command == "chain":
            command_parser.add_argument(
                "source",
                nargs="+",
                help="document path, or the chain itself: g=3 t2=inf t3=4",
            )
        else:
            command_parser.add_argument("source", help="document path, - for stdin")
        if command == "dim":
            command_parser.add_argument(
                "--bdim", type=int, default=None, help="dimension of the boundary stratum"
            )
    return parser


def _document(args: argparse.Namespace) -> CurveDocument:
    if args.command == "chain":
        if any("=" in word for word in args.source):
            return parse("chain " + " ".join(args.source))
        (source,) = args.source
        return parse(_read(source))
    return parse(_read(args.source))


def _options(args: argparse.Namespace) -> dict[str, object]:
    options: dict[str, object] = {
        CONF_REFINED: args.refined,
        CONF_SECOND_KIND: args.second_kind,
    }
    if args.search_bound is not None:
        options[CONF_EFFECTIVE_SEARCH_BOUND] = args.search_bound
    if args.semistable_length is not None:
        options[CONF_SEMISTABLE_SEARCH_LENGTH] = args.semistable_length
    return options


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.debug:
        logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
        logging.getLogger(DOMAIN).setLevel(logging.DEBUG)
    try:
        document = _document(args)
        if args.command == "format":
            sys.stdout.write(format_document(document))
            return ExitCode.DECIDED
        report = run(
            document,
            args.command,
            operation=getattr(args, "operation", None),
            base_dimension=getattr(args, "bdim", None),
            **_options(args),
        )
    except ParseErrors as e:
        source = args.source if isinstance(args.source, str) else " ".join(args.source)
        for issue in e.issues:
            print(f"{source}: {issue}", file=sys.stderr)
        return ExitCode.ERROR
    except (TwistcalcError, vol.Invalid, OSError, ValueError) as e:
        if args.debug:
            _LOGGER.error("%s failed: %s", args.command, e, exc_info=True)
        else:
            print(f"{DOMAIN} {args.command}: {e}", file=sys.stderr)
        return ExitCode.ERROR
    print(report.render(as_json=args.json))
    return report.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
