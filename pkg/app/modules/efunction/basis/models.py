from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from app.modules.group.models import GroupElement


class BasisMonomial(BaseModel):
    """prod x_i^{k_i} dx_i over its support, with degree ell = sum q_i (k_i + 1)."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k: Tuple[Tuple[int, int], ...]
    ell: Fraction

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self.k)

    def exponent(self, i: int) -> int:
        for j, e in self.k:
            if j == i:
                return e
        raise KeyError(i)

    def exponents(self) -> Tuple[int, ...]:
        return tuple(e for _, e in self.k)


class SectorContribution(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    g: GroupElement
    fixed: Tuple[int, ...]
    age_g: Fraction
    invariant_monomials: Tuple[BasisMonomial, ...]

    @property
    def n_g(self) -> int:
        return len(self.fixed)


class PairRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    g: GroupElement
    gdual: GroupElement
    m_hat: int


class PairTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    rows: Tuple[PairRow, ...]

    def as_dict(self) -> dict:
        return {(row.g, row.gdual): row.m_hat for row in self.rows}

    def transposed(self) -> dict:
        return {(row.gdual, row.g): row.m_hat for row in self.rows}


class PsiStructureReport(BaseModel):
    atom: str
    kind: str
    basis_size: int
    dual_order: int
    image_size: int
    injective: bool
    image_ok: bool
    fibers_ok: bool
    degree_law_ok: bool

    @property
    def passed(self) -> bool:
        return self.image_ok and self.fibers_ok and self.degree_law_ok


class PairsReport(BaseModel):
    polynomial: str
    group: str
    transpose: str
    dual_group: str
    rows: List[dict]
    symmetric: Optional[bool] = None
    sign_law: Optional[bool] = None
    efunction: str
