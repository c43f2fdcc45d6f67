import json
import logging
import re
from collections import defaultdict
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

from app.modules.poly.models import InvertiblePolynomial
from app.modules.poly.viewmodel import poly_viewmodel
from app.modules.qexp.models import BiExpPolynomial, HodgeTable

logger = logging.getLogger("bhmirror.modules.qexp.viewmodel")

MODE_SL = "SL"
MODE_G0 = "G0"

RATIONAL = r"-?[0-9]+(?:/[0-9]+)?"
FACTOR_PATTERNS = (
    ("both", re.compile(r"\(t\*tb\)\^\((" + RATIONAL + r")\)")),
    ("ratio", re.compile(r"\(tb/t\)\^\((" + RATIONAL + r")\)")),
    ("tbar", re.compile(r"tb\^\((" + RATIONAL + r")\)")),
    ("t", re.compile(r"t\^\((" + RATIONAL + r")\)")),
    ("tbar", re.compile(r"tb(?![\^\w])")),
    ("t", re.compile(r"t(?![\^\w])")),
)
COEFF_PATTERN = re.compile(r"[0-9]+")


class QExpError(Exception):
    """Base exception for QExp module."""
    def __init__(self, message: str, code: Optional[str] = None):
        self.message = message
        self.code = code
        super().__init__(message)


class ModeError(QExpError):
    """Raised when a computation needs G inside SL or g0 in G and the pair has neither."""
    pass


class QExpParseError(QExpError):
    """Raised when E-function text or JSON cannot be read."""
    pass


def _power_of_minus_one(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise ModeError(f"sign exponent {what} = {x} is not an integer", code="CONVENTION")
    return -1 if x.numerator % 2 else 1


def _mode_sign(p: Fraction, q: Fraction, mode: str) -> int:
    if mode == MODE_SL:
        return _power_of_minus_one(p + q, "p+q")
    if mode == MODE_G0:
        return _power_of_minus_one(q - p, "q-p")
    raise ModeError(f"unknown mode '{mode}'", code="UNKNOWN_MODE")


def _require_g0(modes: Set[str], what: str):
    if MODE_G0 not in modes:
        raise ModeError(f"{what} is defined only for groups containing g0", code="NEEDS_G0")


def _fmt(x: Fraction) -> str:
    return str(x)


class QExpViewModel:

    # arithmetic

    def add(self, a: BiExpPolynomial, b: BiExpPolynomial) -> BiExpPolynomial:
        return a + b

    def negate(self, a: BiExpPolynomial) -> BiExpPolynomial:
        return -a

    def scale(self, a: BiExpPolynomial, k: int) -> BiExpPolynomial:
        return a.scale(k)

    def equals(self, a: BiExpPolynomial, b: BiExpPolynomial) -> bool:
        return a.terms == b.terms

    def invert_t(self, P: BiExpPolynomial) -> BiExpPolynomial:
        return BiExpPolynomial(terms=tuple((-a, b, c) for a, b, c in P.terms))

    def chi(self, P: BiExpPolynomial) -> int:
        return sum(c for _, _, c in P.terms)

    def poincare_polynomial(self, P: BiExpPolynomial) -> Dict[Fraction, int]:
        """E(1, y): t-exponents dropped, coefficients summed per tb-exponent."""
        acc: Dict[Fraction, int] = defaultdict(int)
        for _, b, c in P.terms:
            acc[b] += c
        return {b: c for b, c in sorted(acc.items()) if c}

    def check_duality(self, P: BiExpPolynomial, Q: BiExpPolynomial, n: int) -> bool:
        expected = self.invert_t(Q).scale(-1 if n % 2 else 1)
        return self.equals(P, expected)

    # hodge tables

    def hodge_numbers(self, table: HodgeTable) -> Dict[Tuple[Fraction, Fraction], int]:
        return {(e.p, e.q): e.h for e in table.entries}

    def parity_disjoint(self, table: HodgeTable) -> bool:
        return all(not (e.dim_even and e.dim_odd) for e in table.entries)

    def e_to_hodge(self, table: HodgeTable, mode: str) -> BiExpPolynomial:
        """Signed generating function: sum of sign(p, q) * h^{p,q} * t^(p-n/2) * tb^(q-n/2)."""
        half = Fraction(table.n, 2)
        terms = []
        for e in table.entries:
            if e.dim_even and e.dim_odd:
                raise ModeError(
                    f"both parities are non-zero at (p,q) = ({e.p}, {e.q}); no mode applies",
                    code="PARITY_OVERLAP",
                )
            sign = _mode_sign(e.p, e.q, mode)
            if (sign > 0) != (e.dim_odd == 0):
                raise ModeError(
                    f"{mode} sign at ({e.p}, {e.q}) disagrees with the sector parity", code="PARITY_MISMATCH"
                )
            terms.append((e.p - half, e.q - half, sign * e.h))
        return BiExpPolynomial(terms=terms)

    def hodge_from_e(self, P: BiExpPolynomial, n: int, mode: str) -> HodgeTable:
        half = Fraction(n, 2)
        entries = {}
        for a, b, c in P.terms:
            p, q = a + half, b + half
            h = _mode_sign(p, q, mode) * c
            if h < 0:
                raise ModeError(f"negative Hodge number at ({p}, {q}) under {mode} signing", code="NEGATIVE_DIMENSION")
            entries[(p, q)] = (h, 0) if c > 0 else (0, h)
        return HodgeTable(n=n, entries=entries)

    def hodge_symmetric(self, table: HodgeTable, dual_table: HodgeTable) -> bool:
        """h^{p,q}(f,G) = h^{n-p,q}(f~,G~)."""
        n = table.n
        mirrored = {(n - p, q): h for (p, q), h in self.hodge_numbers(dual_table).items()}
        return self.hodge_numbers(table) == mirrored

    # exponents and variance

    def exponents(self, table: HodgeTable, modes: Set[str]) -> List[Fraction]:
        _require_g0(modes, "the exponent multiset")
        out: List[Fraction] = []
        for e in table.entries:
            out.extend([e.q] * e.h)
        return sorted(out)

    def _moment(self, table: HodgeTable, power: int) -> Fraction:
        half = Fraction(table.n, 2)
        total = Fraction(0)
        for e in table.entries:
            total += _power_of_minus_one(e.q - e.p, "q-p") * (e.q - half) ** power * e.h
        return total

    def variance(self, table: HodgeTable, modes: Set[str]) -> Fraction:
        _require_g0(modes, "the variance")
        return self._moment(table, 2)

    def mean_exponent_defect(self, table: HodgeTable, modes: Set[str]) -> Fraction:
        _require_g0(modes, "the exponent mean")
        return self._moment(table, 1)

    def c_hat(self, f: InvertiblePolynomial) -> Fraction:
        return poly_viewmodel.c_hat(f)

    def variance_corollary_holds(self, f: InvertiblePolynomial, table: HodgeTable, modes: Set[str]) -> bool:
        chi = self.chi(self.e_to_hodge(table, MODE_G0))
        var = self.variance(table, modes)
        mean = self.mean_exponent_defect(table, modes)
        ok = var == self.c_hat(f) * chi / 12 and mean == 0
        if not ok:
            logger.debug(f"Variance corollary fails for {f}: Var={var}, c_hat={self.c_hat(f)}, chi={chi}, mean={mean}")
        return ok

    # text forms

    def to_text(self, P: BiExpPolynomial) -> str:
        """Canonical form: c * t^(a) * tb^(b), lexicographic in (a, b)."""
        if P.is_zero():
            return "0"
        parts = []
        for i, (a, b, c) in enumerate(P.terms):
            body = f"{abs(c)} * t^({_fmt(a)}) * tb^({_fmt(b)})"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def to_pretty(self, P: BiExpPolynomial) -> str:
        if P.is_zero():
            return "0"
        ordered = sorted(P.terms, key=lambda term: (term[0] + term[1], term[1]))
        parts = []
        for i, (a, b, c) in enumerate(ordered):
            if a == 0 and b == 0:
                body = str(abs(c))
            else:
                if a == b:
                    mono = f"(t*tb)^({_fmt(a)})"
                elif a == -b:
                    mono = f"(tb/t)^({_fmt(b)})"
                elif b == 0:
                    mono = f"t^({_fmt(a)})"
                elif a == 0:
                    mono = f"tb^({_fmt(b)})"
                else:
                    mono = f"t^({_fmt(a)})*tb^({_fmt(b)})"
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def to_json(self, P: BiExpPolynomial) -> List[dict]:
        return [{"t": _fmt(a), "tbar": _fmt(b), "coeff": c} for a, b, c in P.terms]

    def from_json(self, payload) -> BiExpPolynomial:
        if isinstance(payload, str):
            try:
                payload = json.loads(payload)
            except json.JSONDecodeError as e:
                raise QExpParseError(f"invalid JSON: {e}", code="BAD_JSON")
        if not isinstance(payload, list):
            raise QExpParseError("E-function JSON must be an array of terms", code="BAD_JSON")
        terms = []
        for item in payload:
            try:
                coeff = item["coeff"]
                if not isinstance(coeff, int) or isinstance(coeff, bool):
                    raise ValueError(f"coefficient {coeff!r} is not an integer")
                terms.append((Fraction(str(item["t"])), Fraction(str(item["tbar"])), coeff))
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
                raise QExpParseError(f"bad term {item!r}: {e}", code="BAD_JSON")
        return BiExpPolynomial(terms=terms)

    def parse_qexp(self, text: str) -> BiExpPolynomial:
        """Reads both the canonical and the pretty text forms."""
        s = "".join(text.split())
        if not s:
            raise QExpParseError("empty E-function text", code="EMPTY")
        if s == "0":
            return BiExpPolynomial.zero()
        terms = []
        pos = 0
        while pos < len(s):
            sign = 1
            if s[pos] in "+-":
                sign = -1 if s[pos] == "-" else 1
                pos += 1
            elif terms:
                raise QExpParseError(f"expected '+' or '-' at position {pos}", code="BAD_TEXT")
            coeff = None
            m = COEFF_PATTERN.match(s, pos)
            if m:
                coeff = int(m.group())
                pos = m.end()
                if s.startswith("*", pos):
                    pos += 1
            a = b = Fraction(0)
            factors = 0
            while True:
                for kind, pattern in FACTOR_PATTERNS:
                    m = pattern.match(s, pos)
                    if m:
                        break
                else:
                    break
                x = Fraction(m.group(1)) if m.groups() else Fraction(1)
                if kind == "both":
                    a, b = a + x, b + x
                elif kind == "ratio":
                    a, b = a - x, b + x
                elif kind == "t":
                    a += x
                else:
                    b += x
                factors += 1
                pos = m.end()
                if s.startswith("*", pos):
                    pos += 1
                else:
                    break
            if coeff is None and not factors:
                raise QExpParseError(f"expected a term at position {pos}", code="BAD_TEXT")
            if s[pos - 1] == "*":
                raise QExpParseError(f"dangling '*' before position {pos}", code="BAD_TEXT")
            terms.append((a, b, sign * (1 if coeff is None else coeff)))
        return BiExpPolynomial(terms=terms)


qexp_viewmodel = QExpViewModel()
