import logging
import math
from collections import Counter, defaultdict
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

from app.core.utils import common_denominator
from app.modules.group.models import AbelianSubgroup, GroupElement
from app.modules.group.viewmodel import group_viewmodel
from app.modules.poly.models import Atom, AtomKind, InvertiblePolynomial
from app.modules.poly.viewmodel import decompose_polynomial, poly_viewmodel
from app.modules.qexp.models import BiExpPolynomial, HodgeTable
from app.modules.efunction.basis.models import (
    BasisMonomial,
    PairRow,
    PairTable,
    PsiStructureReport,
    SectorContribution,
)

logger = logging.getLogger("bhmirror.modules.efunction.basis")


class EFunctionError(Exception):
    """Base exception for EFunction module."""
    def __init__(self, message: str, code: Optional[str] = None):
        self.message = message
        self.code = code
        super().__init__(message)


class ConventionError(EFunctionError):
    """Raised when a computed object leaves the group it must lie in."""
    pass


def _chain_excluded(k: Sequence[int], a: Sequence[int]) -> bool:
    """Prefix pattern k1 = a1-1, k2 = 0, k3 = a3-1, ... ending at an odd position."""
    m = len(a)
    j = 0
    while j < m:
        if k[j] != a[j] - 1:
            return False
        if j + 1 == m or k[j + 1] != 0:
            return True
        j += 2
    return False


@lru_cache(maxsize=None)
def kreuzer_exponents(atom: Atom) -> Tuple[Tuple[int, ...], ...]:
    """Exponent vectors in atom order (along the successor map)."""
    box = product(*(range(a) for a in atom.a))
    if atom.kind == AtomKind.LOOP:
        return tuple(box)
    return tuple(k for k in box if not _chain_excluded(k, atom.a))


@lru_cache(maxsize=None)
def _basis_exponents(f: InvertiblePolynomial) -> Tuple[Tuple[int, ...], ...]:
    atoms = decompose_polynomial(f)
    out = []
    for combo in product(*(kreuzer_exponents(atom) for atom in atoms)):
        k = [0] * f.n
        for atom, ks in zip(atoms, combo):
            for i, e in zip(atom.var_indices, ks):
                k[i] = e
        out.append(tuple(k))
    return tuple(sorted(out))


def _degree(q: Sequence[Fraction], k: Sequence[Tuple[int, int]]) -> Fraction:
    return sum((q[i] * (e + 1) for i, e in k), Fraction(0))


@lru_cache(maxsize=None)
def _invariant_monomials(
    f: InvertiblePolynomial, gens: Tuple[GroupElement, ...], fixed: Tuple[int, ...]
) -> Tuple[BasisMonomial, ...]:
    q = poly_viewmodel.weights(f).q
    fg = poly_viewmodel.restrict(f, fixed)
    kept = []
    for ks in _basis_exponents(fg):
        k = tuple(zip(fixed, ks))
        if all(sum((h.comps[i] * (e + 1) for i, e in k), Fraction(0)).denominator == 1 for h in gens):
            kept.append(BasisMonomial(k=k, ell=_degree(q, k)))
    return tuple(kept)


def _power_of_two(m: int) -> bool:
    return m > 0 and m & (m - 1) == 0


class BasisViewModel:

    def kreuzer_basis(self, f: InvertiblePolynomial, atom: Atom) -> List[BasisMonomial]:
        q = poly_viewmodel.weights(f).q
        monomials = []
        for ks in kreuzer_exponents(atom):
            k = tuple(sorted(zip(atom.var_indices, ks)))
            monomials.append(BasisMonomial(k=k, ell=_degree(q, k)))
        return monomials

    def polynomial_basis(self, f: InvertiblePolynomial) -> List[BasisMonomial]:
        """Full-support basis of the Milnor algebra; the empty polynomial has one empty monomial."""
        q = poly_viewmodel.weights(f).q
        return [
            BasisMonomial(k=tuple(enumerate(ks)), ell=_degree(q, tuple(enumerate(ks))))
            for ks in _basis_exponents(f)
        ]

    def psi(self, f: InvertiblePolynomial, k: BasisMonomial) -> GroupElement:
        if k.support != tuple(range(f.n)):
            raise EFunctionError(f"psi needs a monomial on all {f.n} variables", code="PARTIAL_SUPPORT")
        inv = poly_viewmodel.inverse(f)
        v = [e + 1 for e in k.exponents()]
        return GroupElement(comps=tuple(
            sum((v[i] * inv[i][j] for i in range(f.n)), Fraction(0)) for j in range(f.n)
        ))

    def invariant_test(self, G: AbelianSubgroup, fixed: Sequence[int], k: BasisMonomial) -> bool:
        if not set(k.support) <= set(fixed):
            raise EFunctionError("monomial support leaves the fixed locus", code="BAD_SUPPORT")
        return all(
            sum((h.comps[i] * (e + 1) for i, e in k.k), Fraction(0)).denominator == 1
            for h in G.gens
        )

    def sector(self, f: InvertiblePolynomial, G: AbelianSubgroup, g: GroupElement) -> SectorContribution:
        if g not in G:
            raise EFunctionError(f"{g} is not an element of <{G.describe()}>", code="NOT_IN_GROUP")
        fixed = g.fixed
        return SectorContribution(
            g=g, fixed=fixed, age_g=g.age, invariant_monomials=_invariant_monomials(f, G.gens, fixed)
        )

    def sectors(self, f: InvertiblePolynomial, G: AbelianSubgroup) -> List[SectorContribution]:
        return [self.sector(f, G, g) for g in G.elements]

    def hodge_table(self, f: InvertiblePolynomial, G: AbelianSubgroup) -> HodgeTable:
        acc: Dict[Tuple[Fraction, Fraction], List[int]] = defaultdict(lambda: [0, 0])
        for sec in self.sectors(f, G):
            for mono in sec.invariant_monomials:
                p = sec.age_g + sec.n_g - mono.ell
                q = sec.age_g + mono.ell
                acc[(p, q)][sec.n_g % 2] += 1
            if sec.invariant_monomials:
                logger.debug(f"Sector {sec.g}: n_g={sec.n_g}, {len(sec.invariant_monomials)} invariant monomials")
        return HodgeTable(n=f.n, entries={pq: tuple(dims) for pq, dims in acc.items()})

    def efunction_basis(self, f: InvertiblePolynomial, G: AbelianSubgroup) -> BiExpPolynomial:
        half = Fraction(f.n, 2)
        table = self.hodge_table(f, G)
        return BiExpPolynomial(terms=tuple(
            (e.p - half, e.q - half, e.dim_even - e.dim_odd) for e in table.entries
        ))

    # pairs

    def pair_table(self, f: InvertiblePolynomial, G: AbelianSubgroup) -> PairTable:
        dual = group_viewmodel.dual_group(f, G)
        tally: Counter = Counter()
        for sec in self.sectors(f, G):
            fg = poly_viewmodel.restrict(f, sec.fixed)
            inv = poly_viewmodel.inverse(fg)
            for mono in sec.invariant_monomials:
                v = [e + 1 for e in mono.exponents()]
                comps = [Fraction(0)] * f.n
                for j, idx in enumerate(sec.fixed):
                    comps[idx] = sum((v[i] * inv[i][j] for i in range(len(v))), Fraction(0))
                gt = GroupElement(comps=tuple(comps))
                if gt not in dual:
                    raise ConventionError(
                        f"psi image {gt} of a {sec.g}-sector monomial is not in the dual group <{dual.describe()}>",
                        code="DUAL_EMBEDDING",
                    )
                tally[(sec.g, gt)] += 1
        rows = tuple(
            PairRow(g=g, gdual=gt, m_hat=m)
            for (g, gt), m in sorted(tally.items(), key=lambda item: (item[0][0].comps, item[0][1].comps))
        )
        return PairTable(n=f.n, rows=rows)

    def expected_m_hat(self, f: InvertiblePolynomial, g: GroupElement, gdual: GroupElement) -> int:
        """2^r, r = number of even loops on which both g and gdual are trivial."""
        r = 0
        for atom in decompose_polynomial(f):
            if atom.kind == AtomKind.LOOP and atom.m % 2 == 0:
                if all(g.comps[i] == 0 and gdual.comps[i] == 0 for i in atom.var_indices):
                    r += 1
        return 2 ** r

    def pair_multiplicities_ok(self, f: InvertiblePolynomial, table: PairTable) -> bool:
        return all(
            _power_of_two(row.m_hat) and row.m_hat == self.expected_m_hat(f, row.g, row.gdual)
            for row in table.rows
        )

    def pair_sign_law(self, table: PairTable) -> bool:
        return all((row.g.n_fixed - (table.n - row.gdual.n_fixed)) % 2 == 0 for row in table.rows)

    def efunction_pairs(self, f: InvertiblePolynomial, G: AbelianSubgroup) -> BiExpPolynomial:
        n = f.n
        terms = []
        for row in self.pair_table(f, G).rows:
            a = row.g.age - Fraction(n - row.g.n_fixed, 2)
            b = row.gdual.age - Fraction(n - row.gdual.n_fixed, 2)
            sign = -1 if row.g.n_fixed % 2 else 1
            terms.append((a - b, a + b, sign * row.m_hat))
        return BiExpPolynomial(terms=terms)

    # closed forms and structure checks

    def steenbrink_closed_form(self, f: InvertiblePolynomial) -> BiExpPolynomial:
        """(-1)^n y^(-n/2) prod (y^q_i - y)/(1 - y^q_i), y = tb/t, by exact division in z = y^(1/D)."""
        q = poly_viewmodel.weights(f).q
        D = math.lcm(2, common_denominator(q))
        z = sp.Symbol("z")
        num = sp.Poly(1, z)
        den = sp.Poly(1, z)
        for qi in q:
            num *= sp.Poly(z ** int(qi * D) - z ** D, z)
            den *= sp.Poly(1 - z ** int(qi * D), z)
        quotient, remainder = sp.div(num, den)
        if not remainder.is_zero:
            raise ConventionError(f"closed form of {f} does not divide exactly", code="INEXACT_DIVISION")
        sign = -1 if f.n % 2 else 1
        terms = []
        for (k,), c in quotient.terms():
            e = Fraction(int(k), D) - Fraction(f.n, 2)
            terms.append((-e, e, sign * int(c)))
        return BiExpPolynomial(terms=terms)

    def steenbrink_identity_holds(self, f: InvertiblePolynomial, E: BiExpPolynomial) -> bool:
        """With y = tb/t: P(y) * prod(1 - y^q_i) = prod(y^q_i - y), P = (-1)^n y^(n/2) E."""
        if any(a != -b for a, b, _ in E.terms):
            return False
        half = Fraction(f.n, 2)
        sign = -1 if f.n % 2 else 1
        lhs = BiExpPolynomial(terms=tuple((0, b + half, sign * c) for _, b, c in E.terms))
        rhs = BiExpPolynomial.monomial(0, 0)
        for qi in poly_viewmodel.weights(f).q:
            lhs = lhs * BiExpPolynomial(terms=((0, 0, 1), (0, qi, -1)))
            rhs = rhs * BiExpPolynomial(terms=((0, qi, 1), (0, 1, -1)))
        return lhs.terms == rhs.terms

    def psi_structure(self, f: InvertiblePolynomial, atom: Atom) -> PsiStructureReport:
        A = poly_viewmodel.atom_polynomial(f, atom)
        basis = self.polynomial_basis(A)
        dual = group_viewmodel.gf_group(poly_viewmodel.transpose(A))
        images = Counter()
        degree_law_ok = True
        for k in basis:
            h = self.psi(A, k)
            images[h] += 1
            if k.ell != h.age + Fraction(h.n_fixed, 2):
                degree_law_ok = False
        identity = GroupElement.identity(A.n)
        injective = all(c == 1 for c in images.values())
        if atom.kind == AtomKind.CHAIN:
            expected = {h for h in dual.elements if h.n_fixed % 2 == 0}
            fibers_ok = injective
        elif atom.m % 2:
            expected = set(dual.elements) - {identity}
            fibers_ok = injective
        else:
            expected = set(dual.elements)
            fibers_ok = all(c == (2 if h == identity else 1) for h, c in images.items())
        report = PsiStructureReport(
            atom=atom.label(),
            kind=atom.kind.value,
            basis_size=len(basis),
            dual_order=dual.order,
            image_size=len(images),
            injective=injective,
            image_ok=set(images) == expected,
            fibers_ok=fibers_ok,
            degree_law_ok=degree_law_ok,
        )
        if not report.passed:
            logger.warning(f"psi structure fails for {atom.label()} in {f}: {report.model_dump()}")
        return report

    def milnor_counts_ok(self, f: InvertiblePolynomial) -> bool:
        """Basis size equals prod(1/q_i - 1) on every fixed locus of G_f."""
        loci = {g.fixed for g in group_viewmodel.gf_group(f).elements}
        for fixed in sorted(loci):
            fg = poly_viewmodel.restrict(f, fixed)
            count = len(_basis_exponents(fg))
            if count != poly_viewmodel.milnor_number(fg):
                logger.warning(f"basis of {fg} has {count} monomials, mu = {poly_viewmodel.milnor_number(fg)}")
                return False
        return True

    def palindromic(self, f: InvertiblePolynomial) -> bool:
        ells = Counter(k.ell for k in self.polynomial_basis(f))
        return ells == Counter({f.n - ell: c for ell, c in ells.items()})


basis_viewmodel = BasisViewModel()
