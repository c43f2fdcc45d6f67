import logging
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Set

from app.core.config import config
from app.core.utils import frac_mod1
from app.modules.group.models import AbelianSubgroup, GroupElement
from app.modules.poly.models import InvertiblePolynomial
from app.modules.poly.viewmodel import poly_viewmodel

logger = logging.getLogger("bhmirror.modules.group.viewmodel")

SHORTHAND_PATTERN = re.compile(r"^1\s*/\s*(\d+)\s*\(([^()]*)\)$")
TUPLE_PATTERN = re.compile(r"^\(([^()]*)\)$")

MODE_SL = "SL"
MODE_G0 = "G0"


class GroupError(Exception):
    """Base exception for Group module."""
    def __init__(self, message: str, code: Optional[str] = None):
        self.message = message
        self.code = code
        super().__init__(message)


class MembershipError(GroupError):
    """Raised when an element is not a diagonal symmetry of the polynomial."""
    def __init__(self, message: str, row: Optional[int] = None, code: Optional[str] = None):
        self.row = row
        super().__init__(message, code)


class GroupSpecError(GroupError):
    """Raised when a group or element text cannot be read."""
    pass


class GroupSizeError(GroupError):
    """Raised when a group is too large to enumerate."""
    pass


def _violated_row(f: InvertiblePolynomial, comps: Sequence[Fraction]) -> Optional[int]:
    for i, row in enumerate(f.E):
        if sum(e * c for e, c in zip(row, comps)).denominator != 1:
            return i
    return None


def _closure(n: int, gens: Sequence[GroupElement]) -> List[GroupElement]:
    identity = GroupElement.identity(n)
    seen: Set[GroupElement] = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                s = g + h
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
                    if len(seen) > config.MAX_GROUP_ORDER:
                        raise GroupSizeError(
                            f"group order exceeds {config.MAX_GROUP_ORDER}", code="GROUP_TOO_LARGE"
                        )
        frontier = nxt
    return sorted(seen)


def reduce_generators(n: int, elements: Iterable[GroupElement]) -> List[GroupElement]:
    """Greedy generating set, highest-order elements first."""
    pool = sorted((g for g in elements if not g.is_identity), key=lambda g: (-g.order, g.comps))
    gens: List[GroupElement] = []
    span: Set[GroupElement] = {GroupElement.identity(n)}
    for g in pool:
        if g in span:
            continue
        gens.append(g)
        span = set(_closure(n, gens))
    return gens


class GroupViewModel:

    def subgroup(self, f: InvertiblePolynomial, gens: Iterable[GroupElement]) -> AbelianSubgroup:
        gens = tuple(gens)
        for g in gens:
            if g.n != f.n:
                raise MembershipError(f"element {g} has {g.n} components, expected {f.n}", code="WRONG_LENGTH")
            row = _violated_row(f, g.comps)
            if row is not None:
                raise MembershipError(
                    f"element {g} is not a symmetry of {f}: row {row + 1} of E gives a non-integer",
                    row=row,
                    code="NOT_IN_GF",
                )
        elements = _closure(f.n, gens)
        logger.debug(f"Subgroup of order {len(elements)} generated by {[str(g) for g in gens]}")
        return AbelianSubgroup(ambient=f, gens=gens, elements=tuple(elements))

    def gf_group(self, f: InvertiblePolynomial) -> AbelianSubgroup:
        return _gf_group(f)

    def trivial_group(self, f: InvertiblePolynomial) -> AbelianSubgroup:
        return self.subgroup(f, [])

    def age(self, g: GroupElement) -> Fraction:
        return g.age

    def fixed_indices(self, g: GroupElement) -> tuple:
        return g.fixed

    def n_of(self, g: GroupElement) -> int:
        return g.n_fixed

    def grading_operator(self, f: InvertiblePolynomial) -> GroupElement:
        return GroupElement(comps=poly_viewmodel.weights(f).q)

    def is_in_sl(self, g: GroupElement) -> bool:
        return g.age.denominator == 1

    def is_member(self, f: InvertiblePolynomial, g: GroupElement) -> bool:
        return g.n == f.n and _violated_row(f, g.comps) is None

    def pairing(self, f: InvertiblePolynomial, g: GroupElement, h: GroupElement) -> Fraction:
        """e[h^T E g] between g in G_f and h in G_{f~}, as a value in [0, 1)."""
        if not self.is_member(f, g):
            raise MembershipError(f"{g} is not in G_f for {f}", code="NOT_IN_GF")
        ft = poly_viewmodel.transpose(f)
        if not self.is_member(ft, h):
            raise MembershipError(f"{h} is not in G_f for the transpose {ft}", code="NOT_IN_GFT")
        return _pair(f, g, h)

    def dual_group(self, f: InvertiblePolynomial, G: AbelianSubgroup) -> AbelianSubgroup:
        ft = poly_viewmodel.transpose(f)
        ambient = _gf_group(ft)
        images = [_image(f, g) for g in G.gens]
        elements = tuple(
            h for h in ambient.elements
            if all(sum(c * v for c, v in zip(h.comps, image)).denominator == 1 for image in images)
        )
        gens = tuple(reduce_generators(f.n, elements))
        dual = AbelianSubgroup(ambient=ft, gens=gens, elements=elements)
        logger.debug(f"Dual of <{G.describe()}> (order {G.order}) is <{dual.describe()}> (order {dual.order})")
        return dual

    def sl_subgroup(self, f: InvertiblePolynomial) -> AbelianSubgroup:
        elements = tuple(g for g in _gf_group(f).elements if self.is_in_sl(g))
        return AbelianSubgroup(ambient=f, gens=tuple(reduce_generators(f.n, elements)), elements=elements)

    def g0_subgroup(self, f: InvertiblePolynomial) -> AbelianSubgroup:
        return self.subgroup(f, [self.grading_operator(f)])

    def contains_g0(self, G: AbelianSubgroup) -> bool:
        return self.grading_operator(G.ambient) in G

    def is_sl_group(self, G: AbelianSubgroup) -> bool:
        return all(self.is_in_sl(g) for g in G.gens)

    def mode_of(self, G: AbelianSubgroup) -> Set[str]:
        modes = set()
        if self.is_sl_group(G):
            modes.add(MODE_SL)
        if self.contains_g0(G):
            modes.add(MODE_G0)
        return modes

    def all_subgroups(self, f: InvertiblePolynomial, limit: int = 512) -> List[AbelianSubgroup]:
        """Every subgroup of G_f, by joining cyclic subgroups until nothing new appears."""
        gf = _gf_group(f)
        if gf.order > limit:
            raise GroupSizeError(
                f"|G_f| = {gf.order} is too large for subgroup enumeration (limit {limit})",
                code="GROUP_TOO_LARGE",
            )
        found = {}
        for g in gf.elements:
            elements = tuple(_closure(f.n, [g]))
            found.setdefault(elements, [g] if not g.is_identity else [])
        cyclic = list(found.items())
        frontier = list(found.items())
        while frontier:
            nxt = []
            for elements, gens in frontier:
                for _, cyclic_gens in cyclic:
                    if not cyclic_gens or cyclic_gens[0] in elements:
                        continue
                    joined = tuple(_closure(f.n, list(gens) + cyclic_gens))
                    if joined not in found:
                        found[joined] = list(gens) + cyclic_gens
                        nxt.append((joined, found[joined]))
            frontier = nxt
        groups = [
            AbelianSubgroup(ambient=f, gens=tuple(reduce_generators(f.n, elements)), elements=elements)
            for elements in found
        ]
        groups.sort(key=lambda G: (G.order, [g.comps for g in G.elements]))
        logger.debug(f"{len(groups)} subgroups of G_f for {f}")
        return groups

    def parse_element(self, f: InvertiblePolynomial, text: str) -> GroupElement:
        text = text.strip()
        m = SHORTHAND_PATTERN.match(text)
        try:
            if m:
                r = int(m.group(1))
                if r == 0:
                    raise GroupSpecError(f"zero denominator in '{text}'", code="BAD_ELEMENT")
                values = [Fraction(int(a.strip()), r) for a in m.group(2).split(",")] if m.group(2).strip() else []
            else:
                m = TUPLE_PATTERN.match(text)
                if not m:
                    raise GroupSpecError(f"cannot read group element '{text}'", code="BAD_ELEMENT")
                values = [Fraction(a.strip()) for a in m.group(1).split(",")] if m.group(1).strip() else []
        except (ValueError, ZeroDivisionError) as e:
            raise GroupSpecError(f"cannot read group element '{text}': {e}", code="BAD_ELEMENT")
        if len(values) != f.n:
            raise GroupSpecError(f"element '{text}' has {len(values)} components, expected {f.n}", code="BAD_ELEMENT")
        return GroupElement(comps=tuple(values))

    def parse_group(self, f: InvertiblePolynomial, spec: str) -> AbelianSubgroup:
        """Group spec: comma-separated generators and the tokens trivial, Gf, G0, SL."""
        gens: List[GroupElement] = []
        for token in split_top_level(spec):
            if token == "trivial":
                continue
            elif token == "Gf":
                gens.extend(_gf_group(f).gens)
            elif token == "G0":
                gens.append(self.grading_operator(f))
            elif token == "SL":
                gens.extend(self.sl_subgroup(f).gens)
            else:
                gens.append(self.parse_element(f, token))
        return self.subgroup(f, gens)


def split_top_level(spec: str) -> List[str]:
    tokens, depth, current = [], 0, []
    for ch in spec:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            tokens.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    tokens.append("".join(current).strip())
    tokens = [t for t in tokens if t]
    if not tokens:
        raise GroupSpecError("empty group spec", code="BAD_SPEC")
    return tokens


def _image(f: InvertiblePolynomial, g: GroupElement) -> List[int]:
    """E.g, an integer vector for members of G_f."""
    return [int(sum(e * c for e, c in zip(row, g.comps))) for row in f.E]


def _pair(f: InvertiblePolynomial, g: GroupElement, h: GroupElement) -> Fraction:
    return frac_mod1(sum((c * v for c, v in zip(h.comps, _image(f, g))), Fraction(0)))


@lru_cache(maxsize=None)
def _gf_group(f: InvertiblePolynomial) -> AbelianSubgroup:
    inv = poly_viewmodel.inverse(f)
    columns = [GroupElement(comps=tuple(inv[i][j] for i in range(f.n))) for j in range(f.n)]
    gens = tuple(c for c in columns if not c.is_identity)
    elements = _closure(f.n, gens)
    det = poly_viewmodel.det(f)
    assert len(elements) == det, f"|G_f| = {len(elements)} but det E = {det}"
    return AbelianSubgroup(ambient=f, gens=gens, elements=tuple(elements))


group_viewmodel = GroupViewModel()
