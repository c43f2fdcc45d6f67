from collections import defaultdict
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, field_validator

Exponent = Tuple[Fraction, Fraction]


class BiExpPolynomial(BaseModel):
    """Finite sum of c * t^a * tb^b with rational a, b; terms sorted by (a, b), no zero coefficients."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    terms: Tuple[Tuple[Fraction, Fraction, int], ...] = ()

    @field_validator("terms", mode="before")
    @classmethod
    def _canonical(cls, value):
        acc: Dict[Exponent, int] = defaultdict(int)
        items = value.items() if isinstance(value, dict) else (((a, b), c) for a, b, c in value)
        for (a, b), c in items:
            acc[(Fraction(a), Fraction(b))] += int(c)
        return tuple((a, b, c) for (a, b), c in sorted(acc.items()) if c != 0)

    @classmethod
    def zero(cls) -> "BiExpPolynomial":
        return cls(terms=())

    @classmethod
    def monomial(cls, e_t, e_tbar, coeff: int = 1) -> "BiExpPolynomial":
        return cls(terms=((e_t, e_tbar, coeff),))

    def as_dict(self) -> Dict[Exponent, int]:
        return {(a, b): c for a, b, c in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "BiExpPolynomial") -> "BiExpPolynomial":
        return BiExpPolynomial(terms=self.terms + other.terms)

    def __neg__(self) -> "BiExpPolynomial":
        return BiExpPolynomial(terms=tuple((a, b, -c) for a, b, c in self.terms))

    def __sub__(self, other: "BiExpPolynomial") -> "BiExpPolynomial":
        return self + (-other)

    def __mul__(self, other: "BiExpPolynomial") -> "BiExpPolynomial":
        return BiExpPolynomial(terms=tuple(
            (a1 + a2, b1 + b2, c1 * c2)
            for a1, b1, c1 in self.terms
            for a2, b2, c2 in other.terms
        ))

    def scale(self, k: int) -> "BiExpPolynomial":
        return BiExpPolynomial(terms=tuple((a, b, k * c) for a, b, c in self.terms))

    def __len__(self) -> int:
        return len(self.terms)


class HodgeEntry(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    p: Fraction
    q: Fraction
    dim_even: int
    dim_odd: int

    @property
    def h(self) -> int:
        return self.dim_even + self.dim_odd


class HodgeTable(BaseModel):
    """(p, q) -> (even-sector dimension, odd-sector dimension)."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    entries: Tuple[HodgeEntry, ...] = ()

    @field_validator("entries", mode="before")
    @classmethod
    def _canonical(cls, value):
        acc: Dict[Exponent, List[int]] = defaultdict(lambda: [0, 0])
        if isinstance(value, dict):
            items = (((p, q), dims) for (p, q), dims in value.items())
        else:
            items = (((e.p, e.q), (e.dim_even, e.dim_odd)) if isinstance(e, HodgeEntry) else ((e[0], e[1]), (e[2], e[3]))
                     for e in value)
        for (p, q), (even, odd) in items:
            if even < 0 or odd < 0:
                raise ValueError(f"negative dimension at ({p}, {q})")
            slot = acc[(Fraction(p), Fraction(q))]
            slot[0] += even
            slot[1] += odd
        return tuple(
            HodgeEntry(p=p, q=q, dim_even=even, dim_odd=odd)
            for (p, q), (even, odd) in sorted(acc.items())
            if even or odd
        )

    def as_dict(self) -> Dict[Exponent, Tuple[int, int]]:
        return {(e.p, e.q): (e.dim_even, e.dim_odd) for e in self.entries}

    def __len__(self) -> int:
        return len(self.entries)


class HodgeRow(BaseModel):
    p: str
    q: str
    dim_even: int
    dim_odd: int
    h: int


class HodgeReport(BaseModel):
    polynomial: str
    group: str
    n: int
    modes: List[str]
    rows: List[HodgeRow]
    parity_disjoint: bool


class VarianceReport(BaseModel):
    polynomial: str
    group: str
    variance: str
    mean_defect: str
    c_hat: str
    chi: int
    expected: str
    corollary_ok: bool
    exponents: List[str]


class EFunctionReport(BaseModel):
    polynomial: str
    group: str
    engine: str
    efunction: str
    canonical: str
    json_terms: List[dict]
    chi: int
    engines_agree: Optional[bool] = None


class DualityReport(BaseModel):
    polynomial: str
    group: str
    transpose: str
    dual_group: str
    n: int
    efunction: str
    dual_efunction: str
    engines_agree: bool
    passed: bool
    details: Optional[str] = None


class ExpectationRecord(BaseModel):
    efunction: Optional[List[dict]] = None
    chi: Optional[int] = None
    variance: Optional[str] = None

