import argparse
import asyncio
import json
import logging
import sys
from typing import NoReturn, Sequence

from pydantic import ValidationError

from sepdec import __version__
from sepdec.commands import register_all
from sepdec.config import settings, settings_error
from sepdec.exceptions import InputError, SepDecError, UsageError

logger = logging.getLogger("sepdec")


class CommandParser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(message, usage=self.format_usage().strip())


def build_parser() -> CommandParser:
    common = CommandParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="residual tolerance override")
    common.add_argument("--json-errors", action="store_true", help="emit errors as JSON")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = CommandParser(
        prog="sepdec",
        description="PPT decisions and separable decompositions for shifted-diagonal states",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    register_all(subparsers, common)
    return parser


def configure_logging(verbosity: int) -> None:
    level = getattr(logging, settings.log_level.upper(), logging.WARNING)
    if verbosity == 1:
        level = min(level, logging.INFO)
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=settings.log_format, stream=sys.stderr, force=True)


def report_error(error: SepDecError, json_errors: bool) -> int:
    if json_errors:
        sys.stderr.write(json.dumps(error.to_dict()) + "\n")
    else:
        sys.stderr.write(f"sepdec: {error.code}: {error.message}\n")
    return error.exit_code


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    json_errors = "--json-errors" in argv

    try:
        args = build_parser().parse_args(argv)
    except SepDecError as error:
        return report_error(error, json_errors)
    except SystemExit as exit_request:
        # --help and --version
        return int(exit_request.code or 0)

    configure_logging(args.verbose)
    if settings_error is not None:
        return report_error(settings_error, json_errors)
    try:
        tolerances = settings.tolerances(args.tol)
    except ValidationError as exc:
        return report_error(
            InputError("invalid tolerance", errors=[e["msg"] for e in exc.errors()]), json_errors
        )

    try:
        return asyncio.run(args.handler(args, tolerances))
    except SepDecError as error:
        logger.info("%s failed with %s", args.command, error.code)
        return report_error(error, json_errors)
    except Exception as exc:
        # stderr carries only the JSON object under --json-errors
        log = logger.debug if json_errors else logger.error
        log("unexpected failure in %s", args.command, exc_info=True)
        return report_error(SepDecError(f"internal error: {exc}"), json_errors)


def cli() -> None:
    sys.exit(run())


if __name__ == "__main__":
    cli()
