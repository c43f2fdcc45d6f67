import logging
import math
from collections import defaultdict
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from app.core.utils import common_denominator
from app.modules.efunction.basis.viewmodel import EFunctionError
from app.modules.efunction.series.models import CharSeriesTerm
from app.modules.group.models import AbelianSubgroup, GroupElement
from app.modules.poly.models import InvertiblePolynomial
from app.modules.poly.viewmodel import poly_viewmodel
from app.modules.qexp.models import BiExpPolynomial

logger = logging.getLogger("bhmirror.modules.efunction.series")

HALF = Fraction(1, 2)


class SeriesViewModel:

    def coordinate_series(self, qi: Fraction, limit: Fraction) -> List[CharSeriesTerm]:
        """Expansion of y^(-1/2) (lambda y^q - y) / (1 - lambda y^q) up to y^limit, ascending."""
        terms = []
        k = 0
        while (k + 1) * qi - HALF <= limit:
            terms.append(CharSeriesTerm(y_exp=(k + 1) * qi - HALF, char=(k + 1,), coeff=1))
            if k * qi + HALF <= limit:
                terms.append(CharSeriesTerm(y_exp=k * qi + HALF, char=(k,), coeff=-1))
            k += 1
        terms.sort(key=lambda t: (t.y_exp, t.char))
        return terms

    def invariant_series(
        self, q: Sequence[Fraction], fixed: Tuple[int, ...], gens: Sequence[GroupElement]
    ) -> Dict[Fraction, int]:
        """G-invariant part of the product of coordinate series over `fixed`, as y-exponent -> coefficient."""
        D = math.lcm(2, common_denominator(q))
        orders = [h.order for h in gens]
        bound = sum((1 - q[i] for i in fixed), Fraction(0)) - Fraction(len(fixed), 2)
        mins = [q[i] - HALF for i in fixed]

        state: Dict[Tuple[int, Tuple[int, ...]], int] = {(0, (0,) * len(gens)): 1}
        for idx, i in enumerate(fixed):
            limit = bound - sum(mins[idx + 1:], Fraction(0))
            factor = self.coordinate_series(q[i], limit - sum(mins[:idx], Fraction(0)))
            steps = [int(h.comps[i] * m) for h, m in zip(gens, orders)]
            scaled = [(int(t.y_exp * D), t.char[0], t.coeff) for t in factor]
            cap = int(limit * D)
            new: Dict[Tuple[int, Tuple[int, ...]], int] = defaultdict(int)
            for (e, phase), c in state.items():
                for fe, ch, fc in scaled:
                    if e + fe > cap:
                        break
                    key = (e + fe, tuple((p + ch * s) % m for p, s, m in zip(phase, steps, orders)))
                    new[key] += c * fc
            state = {key: c for key, c in new.items() if c}

        out: Dict[Fraction, int] = defaultdict(int)
        for (e, phase), c in state.items():
            if all(p == 0 for p in phase):
                out[Fraction(e, D)] += c
        return {e: c for e, c in sorted(out.items()) if c}

    def efunction_series(self, f: InvertiblePolynomial, G: AbelianSubgroup) -> BiExpPolynomial:
        if G.ambient != f:
            raise EFunctionError(f"group <{G.describe()}> belongs to {G.ambient}, not {f}", code="WRONG_AMBIENT")
        n = f.n
        q = poly_viewmodel.weights(f).q
        by_locus: Dict[Tuple[int, ...], Dict[Fraction, int]] = {}
        acc: Dict[Tuple[Fraction, Fraction], int] = defaultdict(int)
        for g in G.elements:
            fixed = g.fixed
            if fixed not in by_locus:
                by_locus[fixed] = self.invariant_series(q, fixed, G.gens)
            a = g.age - Fraction(n - len(fixed), 2)
            sign = -1 if len(fixed) % 2 else 1
            for e, c in by_locus[fixed].items():
                acc[(a - e, a + e)] += sign * c
        logger.debug(f"Series engine: {len(by_locus)} fixed loci for <{G.describe()}> on {f}")
        return BiExpPolynomial(terms=acc)


series_viewmodel = SeriesViewModel()
