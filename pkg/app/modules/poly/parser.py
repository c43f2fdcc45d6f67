"""
Recursive-descent reader for polynomial text.

    poly   := term ('+' term)*
    term   := [int '*']? factor ('*' factor)*
    factor := var ('^' int)?
    var    := w | x | y | z | x1 ... x99

Whitespace is insignificant. Coefficients are accepted and reported back,
nothing downstream depends on them.
"""
import re
from typing import Dict, List, Tuple

VAR_PATTERN = re.compile(r"x[1-9][0-9]?(?![0-9])|[wxyz](?![0-9])")
INT_PATTERN = re.compile(r"[0-9]+")


class PolynomialSyntaxError(Exception):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


def variable_sort_key(name: str) -> Tuple[int, int, str]:
    if len(name) == 1:
        return (0, 0, name)
    return (1, int(name[1:]), name)


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise PolynomialSyntaxError(f"expected '{ch}', found '{found}'", self.pos)
        self.pos += 1

    def integer(self) -> int:
        self.skip_ws()
        m = INT_PATTERN.match(self.text, self.pos)
        if not m:
            raise PolynomialSyntaxError("expected an integer", self.pos)
        self.pos = m.end()
        return int(m.group())

    def variable(self) -> str:
        self.skip_ws()
        m = VAR_PATTERN.match(self.text, self.pos)
        if not m:
            raise PolynomialSyntaxError("expected a variable (w, x, y, z or x1..x99)", self.pos)
        self.pos = m.end()
        return m.group()

    def factor(self) -> Tuple[str, int]:
        name = self.variable()
        exponent = 1
        if self.peek() == "^":
            self.pos += 1
            exponent = self.integer()
        return name, exponent

    def term(self) -> Tuple[Dict[str, int], int, int]:
        start = self.pos
        coeff = 1
        if self.peek().isdigit():
            coeff = self.integer()
            self.expect("*")
        powers: Dict[str, int] = {}
        name, e = self.factor()
        powers[name] = powers.get(name, 0) + e
        while self.peek() == "*":
            self.pos += 1
            name, e = self.factor()
            powers[name] = powers.get(name, 0) + e
        return powers, coeff, start

    def poly(self) -> List[Tuple[Dict[str, int], int, int]]:
        if not self.peek():
            raise PolynomialSyntaxError("empty polynomial", self.pos)
        terms = [self.term()]
        while self.peek() == "+":
            self.pos += 1
            terms.append(self.term())
        if self.peek():
            raise PolynomialSyntaxError(f"unexpected '{self.peek()}'", self.pos)
        return terms


def read_terms(text: str) -> List[Tuple[Dict[str, int], int, int]]:
    """Return (powers, coefficient, source position) for each term in order."""
    return _Reader(text).poly()
