import argparse
import json
import math
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

from pydantic import BaseModel

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_VERIFICATION = 4


def success_response(message: str, data: Any = None) -> dict:
    """Return a standardized success envelope."""
    return {"success": True, "message": message, "data": data}


def error_response(message: str, details: Optional[str] = None) -> dict:
    """Return a standardized error envelope."""
    body = {"success": False, "message": message}
    if details:
        body["details"] = details
    return body


def dump_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, default=str, ensure_ascii=False)


def frac_mod1(value: Fraction) -> Fraction:
    """Canonical representative of value in [0, 1)."""
    return value - math.floor(value)


def common_denominator(values: Iterable[Fraction]) -> int:
    d = 1
    for v in values:
        d = math.lcm(d, Fraction(v).denominator)
    return d


class CommandResult(BaseModel):
    """What a command hands back to the entry point: envelope, text rendering, exit code."""
    code: int = EXIT_OK
    body: dict
    text: str = ""

    @classmethod
    def ok(cls, message: str, data: Any = None, text: str = "") -> "CommandResult":
        return cls(code=EXIT_OK, body=success_response(message, data), text=text or message)

    @classmethod
    def fail(
        cls, code: int, message: str, details: Optional[str] = None, data: Any = None, text: str = ""
    ) -> "CommandResult":
        body = error_response(message, details)
        if data is not None:
            body["data"] = data
        return cls(code=code, body=body, text=text or f"error: {message}" + (f" ({details})" if details else ""))


class CommandGroup:
    """A named set of sub-commands, registered on the root parser by create_app()."""

    def __init__(self, name: str):
        self.name = name
        self._commands: List[Tuple[str, str, List[Tuple[tuple, dict]], Callable]] = []

    def command(self, name: str, help: str, arguments: Optional[List[Tuple[tuple, dict]]] = None):
        def decorator(fn: Callable[[argparse.Namespace], CommandResult]):
            self._commands.append((name, help, arguments or [], fn))
            return fn
        return decorator

    def register(self, subparsers, common: Dict[str, Tuple[tuple, dict]]):
        for name, help, arguments, fn in self._commands:
            parser = subparsers.add_parser(name, help=help, description=help)
            for args, kwargs in arguments:
                parser.add_argument(*args, **kwargs)
            for args, kwargs in common.values():
                parser.add_argument(*args, **kwargs)
            parser.set_defaults(handler=fn)
