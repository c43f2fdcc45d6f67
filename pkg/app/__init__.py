import argparse
import logging
import sys
from typing import List, Optional

from app.core.config import config
from app.core.utils import (
    EXIT_DOMAIN,
    EXIT_PARSE,
    EXIT_USAGE,
    CommandResult,
    dump_json,
)

from app.modules.poly.commands import poly_commands
from app.modules.group.commands import group_commands
from app.modules.efunction.commands import efunction_commands
from app.modules.corpus.commands import corpus_commands

from app.modules.poly.viewmodel import PolynomialError, PolynomialParseError
from app.modules.group.viewmodel import GroupError, GroupSpecError
from app.modules.qexp.viewmodel import QExpError, QExpParseError
from app.modules.efunction.basis.viewmodel import EFunctionError
from app.modules.corpus.viewmodel import CorpusError, CorpusFormatError

logger = logging.getLogger("bhmirror.app")


class CliParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def create_app() -> argparse.ArgumentParser:
    parser = CliParser(prog="bhmirror", description=f"{config.PROJECT_NAME}: orbifold E-functions of invertible polynomials")
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    common = {
        "format": (("--format",), {"choices": ["text", "json"], "default": config.DEFAULT_FORMAT, "help": "output format"}),
    }

    poly_commands.register(subparsers, common)
    group_commands.register(subparsers, common)
    efunction_commands.register(subparsers, common)
    corpus_commands.register(subparsers, common)

    return parser


def dispatch(args) -> CommandResult:
    try:
        return args.handler(args)

    except (PolynomialParseError, GroupSpecError, QExpParseError, CorpusFormatError) as e:
        return CommandResult.fail(EXIT_PARSE, str(e), details=getattr(e, "code", None))

    except (PolynomialError, GroupError, QExpError, EFunctionError, CorpusError) as e:
        return CommandResult.fail(EXIT_DOMAIN, str(e), details=getattr(e, "code", None))

    except Exception as e:
        logger.error(f"Unexpected error in {args.command}: {e}", exc_info=True)
        return CommandResult.fail(EXIT_DOMAIN, "Internal error.", details=str(e))


def main(argv: Optional[List[str]] = None) -> int:
    parser = create_app()
    args = parser.parse_args(argv)
    if not getattr(args, "handler", None):
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    result = dispatch(args)
    if args.format == "json":
        print(dump_json(result.body))
    elif result.code == 0 or result.body.get("data") is not None:
        print(result.text)
    else:
        print(result.text, file=sys.stderr)
    return result.code
