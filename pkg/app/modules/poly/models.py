from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator


class AtomKind(str, Enum):
    CHAIN = "chain"
    LOOP = "loop"


class Atom(BaseModel):
    """One chain or loop summand; var_indices run along the successor map."""
    model_config = ConfigDict(frozen=True)

    kind: AtomKind
    var_indices: Tuple[int, ...]
    a: Tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.var_indices)

    @property
    def is_fermat(self) -> bool:
        return self.kind == AtomKind.CHAIN and self.m == 1

    def label(self) -> str:
        return f"{self.kind.value}({','.join(str(x) for x in self.a)})"


class InvertiblePolynomial(BaseModel):
    """Exponent matrix E (row i = monomial i) over named variables."""
    model_config = ConfigDict(frozen=True)

    n: int
    E: Tuple[Tuple[int, ...], ...]
    vars: Tuple[str, ...]

    @model_validator(mode="after")
    def _check_shape(self):
        if len(self.E) != self.n or len(self.vars) != self.n:
            raise ValueError("exponent matrix and variable list must both have n entries")
        for row in self.E:
            if len(row) != self.n or any(e < 0 for e in row):
                raise ValueError("exponent rows must have n non-negative entries")
        return self

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.E)

    def to_text(self) -> str:
        if self.n == 0:
            return "0"
        terms = []
        for row in self.E:
            factors = []
            for name, e in zip(self.vars, row):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            terms.append("*".join(factors))
        return " + ".join(terms)

    def __str__(self) -> str:
        return self.to_text()


class WeightSystem(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    q: Tuple[Fraction, ...]
    d: int

    @property
    def w(self) -> Tuple[int, ...]:
        return tuple(int(x * self.d) for x in self.q)


class ParsedPolynomial(BaseModel):
    polynomial: InvertiblePolynomial
    warnings: List[str] = []


class InfoReport(BaseModel):
    polynomial: str
    n: int
    E: List[List[int]]
    det: int
    atoms: List[str]
    q: List[str]
    weights: List[int]
    degree: int
    milnor_number: int
    group_order: int
    grading_operator: str
    c_hat: str
    transpose: str
    warnings: List[str] = []
    atom_details: Optional[List[dict]] = None
