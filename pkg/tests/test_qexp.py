from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from app.modules.poly.viewmodel import poly_viewmodel
from app.modules.qexp.models import BiExpPolynomial, HodgeEntry, HodgeTable
from app.modules.qexp.viewmodel import (
    MODE_G0,
    MODE_SL,
    ModeError,
    QExpParseError,
    qexp_viewmodel,
)

# x^3 with the trivial group, and its mirror x^3 with G_f
X3_TRIVIAL = HodgeTable(n=1, entries={(F(2, 3), F(1, 3)): (0, 1), (F(1, 3), F(2, 3)): (0, 1)})
X3_GF = HodgeTable(n=1, entries={(F(1, 3), F(1, 3)): (1, 0), (F(2, 3), F(2, 3)): (1, 0)})
FERMAT44_G0 = HodgeTable(
    n=2, entries={(F(1, 2), F(1, 2)): (1, 0), (F(1), F(1)): (4, 0), (F(3, 2), F(3, 2)): (1, 0)}
)

fractions = st.builds(F, st.integers(-12, 12), st.sampled_from([1, 2, 3, 4, 6]))
polynomials = st.lists(
    st.tuples(fractions, fractions, st.integers(-5, 5)), max_size=6
).map(lambda terms: BiExpPolynomial(terms=terms))


def x3_trivial_e():
    return BiExpPolynomial(terms={(F(-1, 6), F(1, 6)): -1, (F(1, 6), F(-1, 6)): -1})


class TestBiExpPolynomial:
    def test_terms_are_merged_and_sorted(self):
        P = BiExpPolynomial(terms=[(F(1, 2), 0, 1), (0, 0, 2), (F(1, 2), 0, -1), (0, 0, 1)])
        assert P.terms == ((F(0), F(0), 3),)

    def test_zero(self):
        assert BiExpPolynomial.zero().is_zero()
        assert qexp_viewmodel.to_text(BiExpPolynomial.zero()) == "0"
        assert qexp_viewmodel.chi(BiExpPolynomial.zero()) == 0

    def test_product(self):
        P = BiExpPolynomial.monomial(F(1, 3), 0) + BiExpPolynomial.monomial(0, F(1, 3))
        Q = P * P
        assert Q.as_dict() == {(F(2, 3), F(0)): 1, (F(1, 3), F(1, 3)): 2, (F(0), F(2, 3)): 1}


@settings(max_examples=60, deadline=None)
@given(polynomials, polynomials, polynomials)
def test_ring_laws(P, Q, R):
    vm = qexp_viewmodel
    assert vm.equals(vm.add(P, Q), vm.add(Q, P))
    assert vm.equals(vm.add(vm.add(P, Q), R), vm.add(P, vm.add(Q, R)))
    assert vm.add(P, vm.negate(P)).is_zero()
    assert vm.equals(P * (Q + R), P * Q + P * R)
    assert vm.chi(P * Q) == vm.chi(P) * vm.chi(Q)
    assert vm.chi(P + Q) == vm.chi(P) + vm.chi(Q)


@settings(max_examples=60, deadline=None)
@given(polynomials)
def test_invert_t_is_an_involution(P):
    assert qexp_viewmodel.equals(qexp_viewmodel.invert_t(qexp_viewmodel.invert_t(P)), P)
    assert qexp_viewmodel.chi(qexp_viewmodel.invert_t(P)) == qexp_viewmodel.chi(P)


class TestInvertT:
    def test_example(self):
        P = BiExpPolynomial(terms={(F(1, 2), F(1, 3)): 2, (F(-1, 4), 0): -1})
        assert qexp_viewmodel.invert_t(P).as_dict() == {(F(-1, 2), F(1, 3)): 2, (F(1, 4), F(0)): -1}

    def test_poincare(self):
        assert qexp_viewmodel.poincare_polynomial(x3_trivial_e()) == {F(-1, 6): -1, F(1, 6): -1}


class TestHodgeTable:
    def test_rejects_negative_dimension(self):
        with pytest.raises(ValueError):
            HodgeTable(n=1, entries={(0, 0): (-1, 0)})

    def test_drops_empty_entries(self):
        table = HodgeTable(n=1, entries=[HodgeEntry(p=F(0), q=F(0), dim_even=0, dim_odd=0), (1, 1, 1, 0)])
        assert table.as_dict() == {(F(1), F(1)): (1, 0)}

    def test_parity(self):
        assert qexp_viewmodel.parity_disjoint(X3_TRIVIAL)
        assert not qexp_viewmodel.parity_disjoint(HodgeTable(n=2, entries={(1, 1): (1, 1)}))


class TestSignedE:
    def test_sl_mode(self):
        E = qexp_viewmodel.e_to_hodge(X3_TRIVIAL, MODE_SL)
        assert qexp_viewmodel.equals(E, x3_trivial_e())
        assert qexp_viewmodel.chi(E) == -2

    def test_g0_mode(self):
        E = qexp_viewmodel.e_to_hodge(X3_GF, MODE_G0)
        assert E.as_dict() == {(F(-1, 6), F(-1, 6)): 1, (F(1, 6), F(1, 6)): 1}
        assert qexp_viewmodel.chi(qexp_viewmodel.e_to_hodge(FERMAT44_G0, MODE_G0)) == 6

    def test_non_integer_sign(self):
        with pytest.raises(ModeError) as err:
            qexp_viewmodel.e_to_hodge(X3_TRIVIAL, MODE_G0)
        assert err.value.code == "CONVENTION"

    def test_parity_mismatch(self):
        with pytest.raises(ModeError) as err:
            qexp_viewmodel.e_to_hodge(FERMAT44_G0, MODE_SL)
        assert err.value.code == "PARITY_MISMATCH"

    def test_parity_overlap(self):
        with pytest.raises(ModeError) as err:
            qexp_viewmodel.e_to_hodge(HodgeTable(n=2, entries={(1, 1): (1, 1)}), MODE_G0)
        assert err.value.code == "PARITY_OVERLAP"

    def test_unknown_mode(self):
        with pytest.raises(ModeError) as err:
            qexp_viewmodel.e_to_hodge(X3_GF, "GL")
        assert err.value.code == "UNKNOWN_MODE"

    def test_hodge_from_e_inverts(self):
        E = qexp_viewmodel.e_to_hodge(X3_TRIVIAL, MODE_SL)
        assert qexp_viewmodel.hodge_from_e(E, 1, MODE_SL) == X3_TRIVIAL
        E = qexp_viewmodel.e_to_hodge(FERMAT44_G0, MODE_G0)
        assert qexp_viewmodel.hodge_from_e(E, 2, MODE_G0) == FERMAT44_G0


class TestMirror:
    def test_duality(self):
        Q = qexp_viewmodel.e_to_hodge(X3_GF, MODE_G0)
        assert qexp_viewmodel.check_duality(x3_trivial_e(), Q, 1)
        assert not qexp_viewmodel.check_duality(x3_trivial_e(), Q, 2)

    def test_hodge_symmetry(self):
        assert qexp_viewmodel.hodge_symmetric(X3_TRIVIAL, X3_GF)
        assert not qexp_viewmodel.hodge_symmetric(X3_TRIVIAL, FERMAT44_G0)


class TestVariance:
    def test_exponents(self):
        assert qexp_viewmodel.exponents(FERMAT44_G0, {MODE_G0}) == [F(1, 2), 1, 1, 1, 1, F(3, 2)]

    def test_needs_g0(self):
        for call in (qexp_viewmodel.exponents, qexp_viewmodel.variance, qexp_viewmodel.mean_exponent_defect):
            with pytest.raises(ModeError) as err:
                call(FERMAT44_G0, {MODE_SL})
            assert err.value.code == "NEEDS_G0"

    def test_values(self):
        assert qexp_viewmodel.variance(FERMAT44_G0, {MODE_G0}) == F(1, 2)
        assert qexp_viewmodel.mean_exponent_defect(FERMAT44_G0, {MODE_G0}) == 0
        assert qexp_viewmodel.variance(X3_GF, {MODE_G0, MODE_SL}) == F(1, 18)

    def test_corollary(self):
        fermat = poly_viewmodel.polynomial("x^4 + y^4")
        assert qexp_viewmodel.c_hat(fermat) == 1
        assert qexp_viewmodel.variance_corollary_holds(fermat, FERMAT44_G0, {MODE_G0})
        assert qexp_viewmodel.variance_corollary_holds(poly_viewmodel.polynomial("x^3"), X3_GF, {MODE_G0})

    def test_corollary_detects_a_wrong_table(self):
        fermat = poly_viewmodel.polynomial("x^4 + y^4")
        shifted = HodgeTable(n=2, entries={(1, 1): (5, 0), (F(3, 2), F(3, 2)): (1, 0)})
        assert not qexp_viewmodel.variance_corollary_holds(fermat, shifted, {MODE_G0})


class TestText:
    def test_canonical(self):
        assert qexp_viewmodel.to_text(x3_trivial_e()) == "-1 * t^(-1/6) * tb^(1/6) - 1 * t^(1/6) * tb^(-1/6)"

    def test_pretty(self):
        assert qexp_viewmodel.to_pretty(x3_trivial_e()) == "-(tb/t)^(-1/6) - (tb/t)^(1/6)"
        E = qexp_viewmodel.e_to_hodge(FERMAT44_G0, MODE_G0)
        assert qexp_viewmodel.to_pretty(E) == "(t*tb)^(-1/2) + 4 + (t*tb)^(1/2)"

    def test_pretty_mixed(self):
        P = BiExpPolynomial(terms={(F(1, 2), 0): 3, (F(1, 3), F(1, 2)): -1})
        assert qexp_viewmodel.to_pretty(P) == "3*t^(1/2) - t^(1/3)*tb^(1/2)"

    def test_parse_bare_factors(self):
        assert qexp_viewmodel.parse_qexp("t*tb - 2").as_dict() == {(F(1), F(1)): 1, (F(0), F(0)): -2}

    def test_parse_json(self):
        P = qexp_viewmodel.from_json('[{"t": "1/2", "tbar": "-1/2", "coeff": 3}]')
        assert P.as_dict() == {(F(1, 2), F(-1, 2)): 3}

    @pytest.mark.parametrize("text", ["", "   ", "t^(1/2) tb", "2*", "t^(1/2", "+", "x"])
    def test_bad_text(self, text):
        with pytest.raises(QExpParseError):
            qexp_viewmodel.parse_qexp(text)

    @pytest.mark.parametrize("payload", [
        "not json",
        '{"t": "0"}',
        '[{"t": "1/2", "tbar": "0", "coeff": 1.5}]',
        '[{"t": "1/2", "coeff": 1}]',
        '[{"t": "1/0", "tbar": "0", "coeff": 1}]',
    ])
    def test_bad_json(self, payload):
        with pytest.raises(QExpParseError) as err:
            qexp_viewmodel.from_json(payload)
        assert err.value.code == "BAD_JSON"


@settings(max_examples=80, deadline=None)
@given(polynomials)
def test_text_forms_read_back(P):
    vm = qexp_viewmodel
    assert vm.equals(vm.parse_qexp(vm.to_text(P)), P)
    assert vm.equals(vm.parse_qexp(vm.to_pretty(P)), P)
    assert vm.equals(vm.from_json(vm.to_json(P)), P)
