import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy as sp

from app.core.utils import common_denominator
from app.modules.poly.models import Atom, AtomKind, InvertiblePolynomial, ParsedPolynomial, WeightSystem
from app.modules.poly.parser import PolynomialSyntaxError, read_terms, variable_sort_key

logger = logging.getLogger("bhmirror.modules.poly.viewmodel")

EMPTY_POLYNOMIAL = InvertiblePolynomial(n=0, E=(), vars=())


class PolynomialError(Exception):
    """Base exception for Polynomial module."""
    def __init__(self, message: str, code: Optional[str] = None):
        self.message = message
        self.code = code
        super().__init__(message)


class PolynomialParseError(PolynomialError):
    """Raised when polynomial text does not follow the grammar."""
    def __init__(self, message: str, position: Optional[int] = None, code: Optional[str] = None):
        self.position = position
        super().__init__(message, code)


class DecompositionError(PolynomialError):
    """Raised when a polynomial is not a sum of chain and loop atoms."""
    pass


def _monomial_text(row: Sequence[int], names: Sequence[str]) -> str:
    factors = [name if e == 1 else f"{name}^{e}" for name, e in zip(names, row) if e]
    return "*".join(factors) or "1"


def exact_det(E: Sequence[Sequence[int]]) -> int:
    if not E:
        return 1
    return int(sp.Matrix([list(row) for row in E]).det())


def exact_inverse(E: Sequence[Sequence[int]]) -> Tuple[Tuple[Fraction, ...], ...]:
    if not E:
        return ()
    inv = sp.Matrix([list(row) for row in E]).inv()
    return tuple(
        tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(inv.cols))
        for i in range(inv.rows)
    )


def _match_rows(rows: Sequence[Sequence[int]], names: Sequence[str]) -> Tuple[Tuple[int, ...], ...]:
    """Permute rows so that monomial i carries its unique exponent >= 2 on variable i."""
    n = len(names)
    placed: Dict[int, Tuple[int, ...]] = {}
    for row in rows:
        big = [j for j, e in enumerate(row) if e >= 2]
        ones = [j for j, e in enumerate(row) if e == 1]
        text = _monomial_text(row, names)
        if len(big) != 1:
            if not big:
                raise DecompositionError(
                    f"monomial '{text}' has no exponent >= 2; exponents a_i = 1 are not supported",
                    code="NO_DIAGONAL",
                )
            raise DecompositionError(f"monomial '{text}' has two exponents >= 2", code="TWO_DIAGONALS")
        if len(ones) > 1:
            raise DecompositionError(f"monomial '{text}' has two exponents equal to 1", code="TWO_LINKS")
        j = big[0]
        if j in placed:
            raise DecompositionError(
                f"monomials '{_monomial_text(placed[j], names)}' and '{text}' both carry a power of {names[j]}",
                code="MATCHING_FAILED",
            )
        placed[j] = tuple(row)
    return tuple(placed[j] for j in range(n))


def build_polynomial(rows: Sequence[Sequence[int]], names: Sequence[str]) -> InvertiblePolynomial:
    """Normalize the monomial order and validate the result."""
    names = tuple(names)
    rows = [tuple(int(e) for e in row) for row in rows]
    n = len(names)
    if len(rows) != n:
        raise DecompositionError(
            f"{len(rows)} monomials for {n} variables; an invertible polynomial needs as many monomials as variables",
            code="COUNT_MISMATCH",
        )
    supports = set()
    for row in rows:
        if tuple(row) in supports:
            raise DecompositionError(f"repeated monomial '{_monomial_text(row, names)}'", code="REPEATED_MONOMIAL")
        supports.add(tuple(row))
    for j, name in enumerate(names):
        if all(row[j] == 0 for row in rows):
            raise DecompositionError(f"variable {name} does not occur in any monomial", code="ZERO_COLUMN")

    f = InvertiblePolynomial(n=n, E=_match_rows(rows, names), vars=names)
    decompose_polynomial(f)
    det = exact_det(f.E)
    if det == 0:
        raise DecompositionError("exponent matrix is singular", code="SINGULAR")
    assert det > 0, f"det E = {det} after matching"
    return f


@lru_cache(maxsize=None)
def decompose_polynomial(f: InvertiblePolynomial) -> Tuple[Atom, ...]:
    succ: Dict[int, int] = {}
    for i, row in enumerate(f.E):
        text = _monomial_text(row, f.vars)
        if row[i] < 2:
            raise DecompositionError(f"monomial '{text}' is not matched to {f.vars[i]}", code="MATCHING_FAILED")
        others = [j for j, e in enumerate(row) if e and j != i]
        if len(others) > 1 or any(row[j] != 1 for j in others):
            raise DecompositionError(f"monomial '{text}' is neither x^a nor x^a*y", code="NOT_ATOMIC")
        if others:
            succ[i] = others[0]

    preimage: Dict[int, int] = {}
    for i, j in succ.items():
        if j in preimage:
            raise DecompositionError(
                f"variable {f.vars[j]} links two monomials "
                f"('{_monomial_text(f.E[preimage[j]], f.vars)}' and '{_monomial_text(f.E[i], f.vars)}')",
                code="NOT_ATOMIC",
            )
        preimage[j] = i

    atoms: List[Atom] = []
    seen = set()
    for head in range(f.n):
        if head in preimage:
            continue
        path = [head]
        while path[-1] in succ:
            path.append(succ[path[-1]])
        seen.update(path)
        atoms.append(Atom(kind=AtomKind.CHAIN, var_indices=tuple(path), a=tuple(f.E[i][i] for i in path)))

    for start in range(f.n):
        if start in seen:
            continue
        cycle = [start]
        while succ[cycle[-1]] != start:
            cycle.append(succ[cycle[-1]])
        seen.update(cycle)
        atoms.append(Atom(kind=AtomKind.LOOP, var_indices=tuple(cycle), a=tuple(f.E[i][i] for i in cycle)))

    atoms.sort(key=lambda atom: min(atom.var_indices))
    return tuple(atoms)


@lru_cache(maxsize=None)
def _weights(f: InvertiblePolynomial) -> WeightSystem:
    q: List[Optional[Fraction]] = [None] * f.n
    for atom in decompose_polynomial(f):
        if atom.kind == AtomKind.CHAIN:
            nxt = Fraction(0)
            for i, a in reversed(list(zip(atom.var_indices, atom.a))):
                q[i] = (1 - nxt) / a
                nxt = q[i]
        else:
            idx = atom.var_indices
            sub = sp.Matrix([[f.E[i][j] for j in idx] for i in idx])
            sol = sub.LUsolve(sp.ones(len(idx), 1))
            for pos, i in enumerate(idx):
                q[i] = Fraction(int(sol[pos].p), int(sol[pos].q))
    weights = tuple(q)
    for i, row in enumerate(f.E):
        assert sum(e * w for e, w in zip(row, weights)) == 1, f"E.q != 1 at row {i}"
    return WeightSystem(q=weights, d=common_denominator(weights))


class PolynomialViewModel:

    def parse_polynomial(self, text: str) -> ParsedPolynomial:
        try:
            terms = read_terms(text)
        except PolynomialSyntaxError as e:
            raise PolynomialParseError(str(e), position=e.position)

        names = sorted({name for powers, _, _ in terms for name in powers}, key=variable_sort_key)
        warnings: List[str] = []
        rows = []
        for powers, coeff, pos in terms:
            if coeff == 0:
                raise PolynomialParseError(f"zero coefficient at position {pos}", position=pos)
            if coeff != 1:
                warnings.append(f"coefficient {coeff} at position {pos} ignored")
            rows.append(tuple(powers.get(name, 0) for name in names))

        for w in warnings:
            logger.warning(w)

        f = build_polynomial(rows, names)
        logger.debug(f"Parsed '{text}' as n={f.n}, E={f.E}")
        return ParsedPolynomial(polynomial=f, warnings=warnings)

    def polynomial(self, text: str) -> InvertiblePolynomial:
        return self.parse_polynomial(text).polynomial

    def decompose(self, f: InvertiblePolynomial) -> List[Atom]:
        return list(decompose_polynomial(f))

    def weights(self, f: InvertiblePolynomial) -> WeightSystem:
        return _weights(f)

    def det(self, f: InvertiblePolynomial) -> int:
        return exact_det(f.E)

    def inverse(self, f: InvertiblePolynomial) -> Tuple[Tuple[Fraction, ...], ...]:
        return _inverse(f)

    def transpose(self, f: InvertiblePolynomial) -> InvertiblePolynomial:
        return _transpose(f)

    def milnor_number(self, f: InvertiblePolynomial) -> int:
        mu = Fraction(1)
        for qi in _weights(f).q:
            mu *= 1 / qi - 1
        assert mu.denominator == 1, f"non-integral Milnor number {mu}"
        return int(mu)

    def c_hat(self, f: InvertiblePolynomial) -> Fraction:
        return f.n - 2 * sum(_weights(f).q, Fraction(0))

    def restrict(self, f: InvertiblePolynomial, fixed: Iterable[int]) -> InvertiblePolynomial:
        return _restrict(f, tuple(sorted(set(fixed))))

    def atom_polynomial(self, f: InvertiblePolynomial, atom: Atom) -> InvertiblePolynomial:
        return _restrict(f, tuple(sorted(atom.var_indices)))


@lru_cache(maxsize=None)
def _inverse(f: InvertiblePolynomial) -> Tuple[Tuple[Fraction, ...], ...]:
    return exact_inverse(f.E)


@lru_cache(maxsize=None)
def _transpose(f: InvertiblePolynomial) -> InvertiblePolynomial:
    return build_polynomial([f.column(j) for j in range(f.n)], f.vars)


@lru_cache(maxsize=None)
def _restrict(f: InvertiblePolynomial, fixed: Tuple[int, ...]) -> InvertiblePolynomial:
    if not fixed:
        return EMPTY_POLYNOMIAL
    keep = set(fixed)
    rows = [
        tuple(row[j] for j in fixed)
        for row in f.E
        if all(j in keep for j, e in enumerate(row) if e)
    ]
    names = tuple(f.vars[j] for j in fixed)
    try:
        return build_polynomial(rows, names)
    except DecompositionError as e:
        raise DecompositionError(
            f"restriction to {{{', '.join(names)}}} is not a fixed locus: {e.message}",
            code="NOT_FIXED_LOCUS",
        )


poly_viewmodel = PolynomialViewModel()
