from fractions import Fraction as F

import pytest

from app.modules.efunction.basis.viewmodel import EFunctionError, basis_viewmodel
from app.modules.efunction.series.viewmodel import series_viewmodel
from app.modules.group.viewmodel import group_viewmodel
from app.modules.poly.viewmodel import poly_viewmodel
from app.modules.qexp.viewmodel import qexp_viewmodel
from tests.conftest import element


class TestCoordinateSeries:
    def test_cubic(self):
        terms = series_viewmodel.coordinate_series(F(1, 3), F(1, 6))
        assert [(t.y_exp, t.char, t.coeff) for t in terms] == [(F(-1, 6), (1,), 1), (F(1, 6), (2,), 1)]

    def test_negative_terms_appear(self):
        terms = series_viewmodel.coordinate_series(F(1, 2), F(1, 2))
        assert [(t.y_exp, t.char, t.coeff) for t in terms] == [
            (F(0), (1,), 1), (F(1, 2), (0,), -1), (F(1, 2), (2,), 1),
        ]

    def test_ascending(self):
        terms = series_viewmodel.coordinate_series(F(1, 5), F(2))
        assert [t.y_exp for t in terms] == sorted(t.y_exp for t in terms)


class TestInvariantSeries:
    def test_no_group(self):
        assert series_viewmodel.invariant_series((F(1, 3),), (0,), []) == {F(-1, 6): 1, F(1, 6): 1}

    def test_characters_are_filtered(self):
        assert series_viewmodel.invariant_series((F(1, 3),), (0,), [element("1/3")]) == {}

    def test_empty_locus(self):
        assert series_viewmodel.invariant_series((F(1, 3),), (), [element("1/3")]) == {F(0): 1}

    def test_fermat_g0(self):
        q = (F(1, 4), F(1, 4))
        assert series_viewmodel.invariant_series(q, (0, 1), [element("1/4", "1/4")]) == {F(0): 3}


class TestEFunctionSeries:
    def test_x3(self, x3):
        E = series_viewmodel.efunction_series(x3, group_viewmodel.trivial_group(x3))
        assert qexp_viewmodel.to_pretty(E) == "-(tb/t)^(-1/6) - (tb/t)^(1/6)"

    def test_loop(self, loop22):
        E = series_viewmodel.efunction_series(loop22, group_viewmodel.trivial_group(loop22))
        assert qexp_viewmodel.to_pretty(E) == "(tb/t)^(-1/3) + 2 + (tb/t)^(1/3)"

    def test_fermat_g0(self, fermat44):
        E = series_viewmodel.efunction_series(fermat44, group_viewmodel.g0_subgroup(fermat44))
        assert qexp_viewmodel.to_pretty(E) == "(t*tb)^(-1/2) + 4 + (t*tb)^(1/2)"

    def test_wrong_ambient(self, x3, fermat44):
        with pytest.raises(EFunctionError) as err:
            series_viewmodel.efunction_series(x3, group_viewmodel.trivial_group(fermat44))
        assert err.value.code == "WRONG_AMBIENT"

    @pytest.mark.parametrize("text", [
        "x^4",
        "x^3*y + y^2",
        "x^3 + x*y^2",
        "x^2*y + y^2*x",
        "x^3*y + y^3*x",
        "x^4 + y^4",
        "x^3 + y^3",
        "x^2*y + y^2*z + z^2",
        "x^2*y + y^2*z + z^2*x",
        "x^2*y + y^2*x + z^3",
    ])
    def test_engines_agree_on_every_subgroup(self, text):
        f = poly_viewmodel.polynomial(text)
        for G in group_viewmodel.all_subgroups(f):
            assert series_viewmodel.efunction_series(f, G) == basis_viewmodel.efunction_basis(f, G), G.describe()

    @pytest.mark.parametrize("token", ["trivial", "Gf", "G0", "SL"])
    def test_engines_agree_on_the_quintic(self, token):
        f = poly_viewmodel.polynomial("w^5 + x^5 + y^5 + z^5 + x1^5")
        G = group_viewmodel.parse_group(f, token)
        assert series_viewmodel.efunction_series(f, G) == basis_viewmodel.efunction_basis(f, G)
