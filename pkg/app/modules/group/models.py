from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, PrivateAttr, field_validator

from app.core.utils import common_denominator, frac_mod1
from app.modules.poly.models import InvertiblePolynomial


class GroupElement(BaseModel):
    """Diagonal symmetry (e[c_1], ..., e[c_n]) stored as canonical c_i in [0, 1)."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    comps: Tuple[Fraction, ...]

    @field_validator("comps", mode="before")
    @classmethod
    def _canonical(cls, value):
        return tuple(frac_mod1(Fraction(c)) for c in value)

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls(comps=(Fraction(0),) * n)

    @property
    def n(self) -> int:
        return len(self.comps)

    @property
    def age(self) -> Fraction:
        return sum(self.comps, Fraction(0))

    @property
    def fixed(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.comps) if c == 0)

    @property
    def n_fixed(self) -> int:
        return sum(1 for c in self.comps if c == 0)

    @property
    def order(self) -> int:
        return common_denominator(self.comps)

    @property
    def is_identity(self) -> bool:
        return all(c == 0 for c in self.comps)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(comps=tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(comps=tuple(-a for a in self.comps))

    def __lt__(self, other: "GroupElement") -> bool:
        return self.comps < other.comps

    def to_text(self) -> str:
        r = self.order
        return f"1/{r}(" + ",".join(str(int(c * r)) for c in self.comps) + ")"

    def __str__(self) -> str:
        return self.to_text()


class AbelianSubgroup(BaseModel):
    """Finite subgroup of G_f with its full element list (sorted, identity first)."""
    model_config = ConfigDict(frozen=True)

    ambient: InvertiblePolynomial
    gens: Tuple[GroupElement, ...]
    elements: Tuple[GroupElement, ...]

    _members: frozenset = PrivateAttr(default=frozenset())

    def model_post_init(self, __context) -> None:
        self._members = frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: GroupElement) -> bool:
        return g in self._members

    def same_elements(self, other: "AbelianSubgroup") -> bool:
        return self.elements == other.elements

    def describe(self) -> str:
        if not self.gens:
            return "trivial"
        return ", ".join(g.to_text() for g in self.gens)


class GroupReport(BaseModel):
    polynomial: str
    generators: List[str]
    order: int
    elements: Optional[List[str]] = None


class DualReport(BaseModel):
    polynomial: str
    group: GroupReport
    transpose: str
    dual_group: GroupReport
    det: int
    order_product_ok: bool
    double_dual_ok: bool
