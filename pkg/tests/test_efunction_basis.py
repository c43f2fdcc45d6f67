from fractions import Fraction as F

import pytest

from app.modules.efunction.basis.models import BasisMonomial
from app.modules.efunction.basis.viewmodel import EFunctionError, basis_viewmodel, kreuzer_exponents
from app.modules.group.models import GroupElement
from app.modules.group.viewmodel import group_viewmodel
from app.modules.poly.viewmodel import poly_viewmodel
from app.modules.qexp.models import HodgeTable
from app.modules.qexp.viewmodel import qexp_viewmodel
from tests.conftest import element

SMALL = [
    "x^3",
    "x^5",
    "x^3*y + y^2",
    "x^3 + x*y^2",
    "x^2*y + y^2*x",
    "x^3*y + y^3*x",
    "x^4 + y^4",
    "x^2*y + y^2*z + z^2",
    "x^2*y + y^2*z + z^2*x",
    "x^2*y + y^2*x + z^3",
]


def monomial(f, *ks):
    k = tuple(enumerate(ks))
    q = poly_viewmodel.weights(f).q
    return BasisMonomial(k=k, ell=sum((q[i] * (e + 1) for i, e in k), F(0)))


class TestKreuzer:
    def test_fermat(self, x3):
        (atom,) = poly_viewmodel.decompose(x3)
        assert kreuzer_exponents(atom) == ((0,), (1,))

    def test_chain_drops_the_prefix_pattern(self, chain32):
        (atom,) = poly_viewmodel.decompose(chain32)
        exps = {m.exponents() for m in basis_viewmodel.kreuzer_basis(chain32, atom)}
        assert exps == {(0, 0), (0, 1), (1, 0), (1, 1), (2, 0)}

    def test_loop_keeps_the_box(self, loop22):
        (atom,) = poly_viewmodel.decompose(loop22)
        assert len(basis_viewmodel.kreuzer_basis(loop22, atom)) == 4

    @pytest.mark.parametrize("text", SMALL + ["x^2*y + y^3*z + z^2*w + w^2", "w^2*x + x^2*y + y^2*z + z^2*w"])
    def test_size_is_milnor_number(self, text):
        f = poly_viewmodel.polynomial(text)
        assert len(basis_viewmodel.polynomial_basis(f)) == poly_viewmodel.milnor_number(f)
        assert basis_viewmodel.milnor_counts_ok(f)

    @pytest.mark.parametrize("text", SMALL)
    def test_degrees_are_palindromic(self, text):
        assert basis_viewmodel.palindromic(poly_viewmodel.polynomial(text))

    def test_empty_polynomial(self):
        (k,) = basis_viewmodel.polynomial_basis(poly_viewmodel.restrict(poly_viewmodel.polynomial("x^3"), ()))
        assert k.k == () and k.ell == 0


class TestPsi:
    def test_chain(self, chain32):
        assert basis_viewmodel.psi(chain32, monomial(chain32, 2, 0)) == GroupElement.identity(2)
        assert basis_viewmodel.psi(chain32, monomial(chain32, 0, 0)) == element("1/3", "1/3")

    def test_loop(self, loop22):
        assert basis_viewmodel.psi(loop22, monomial(loop22, 1, 0)) == GroupElement.identity(2)
        assert basis_viewmodel.psi(loop22, monomial(loop22, 1, 1)) == element("2/3", "2/3")

    def test_partial_support(self, chain32):
        with pytest.raises(EFunctionError) as err:
            basis_viewmodel.psi(chain32, BasisMonomial(k=((0, 1),), ell=F(1, 3)))
        assert err.value.code == "PARTIAL_SUPPORT"

    @pytest.mark.parametrize("text", [
        "x^3*y + y^2",
        "x^2*y + y^3*z + z^2",
        "x^2*y + y^2*x",
        "x^3*y + y^2*z + z^2*w + w^3*x",
        "x^2*y + y^2*z + z^2*x",
        "x^4",
    ])
    def test_structure(self, text):
        f = poly_viewmodel.polynomial(text)
        for atom in poly_viewmodel.decompose(f):
            report = basis_viewmodel.psi_structure(f, atom)
            assert report.passed, report

    def test_even_loop_doubles_identity(self, loop22):
        (atom,) = poly_viewmodel.decompose(loop22)
        report = basis_viewmodel.psi_structure(loop22, atom)
        assert not report.injective
        assert report.image_size == report.dual_order == 3
        assert report.basis_size == 4


class TestSectors:
    def test_invariance(self, fermat44):
        G = group_viewmodel.g0_subgroup(fermat44)
        assert basis_viewmodel.invariant_test(G, (0, 1), monomial(fermat44, 1, 1))
        assert not basis_viewmodel.invariant_test(G, (0, 1), monomial(fermat44, 0, 1))

    def test_support_outside_fixed_locus(self, fermat44):
        G = group_viewmodel.g0_subgroup(fermat44)
        with pytest.raises(EFunctionError) as err:
            basis_viewmodel.invariant_test(G, (0,), monomial(fermat44, 1, 1))
        assert err.value.code == "BAD_SUPPORT"

    def test_narrow_sector_has_the_empty_monomial(self, x3):
        sec = basis_viewmodel.sector(x3, group_viewmodel.gf_group(x3), element("1/3"))
        assert sec.n_g == 0
        assert sec.age_g == F(1, 3)
        assert [m.k for m in sec.invariant_monomials] == [()]

    def test_broad_sector(self, fermat44):
        G = group_viewmodel.g0_subgroup(fermat44)
        sec = basis_viewmodel.sector(fermat44, G, GroupElement.identity(2))
        assert {m.exponents() for m in sec.invariant_monomials} == {(0, 2), (1, 1), (2, 0)}
        assert all(m.ell == 1 for m in sec.invariant_monomials)

    def test_element_outside_group(self, x3):
        with pytest.raises(EFunctionError) as err:
            basis_viewmodel.sector(x3, group_viewmodel.trivial_group(x3), element("1/3"))
        assert err.value.code == "NOT_IN_GROUP"


class TestHodgeTable:
    def test_x3(self, x3):
        trivial = basis_viewmodel.hodge_table(x3, group_viewmodel.trivial_group(x3))
        assert trivial == HodgeTable(n=1, entries={(F(2, 3), F(1, 3)): (0, 1), (F(1, 3), F(2, 3)): (0, 1)})
        full = basis_viewmodel.hodge_table(x3, group_viewmodel.gf_group(x3))
        assert full == HodgeTable(n=1, entries={(F(1, 3), F(1, 3)): (1, 0), (F(2, 3), F(2, 3)): (1, 0)})

    def test_fermat_g0(self, fermat44):
        table = basis_viewmodel.hodge_table(fermat44, group_viewmodel.g0_subgroup(fermat44))
        assert qexp_viewmodel.hodge_numbers(table) == {
            (F(1, 2), F(1, 2)): 1, (F(1), F(1)): 4, (F(3, 2), F(3, 2)): 1,
        }

    def test_x3_efunction(self, x3):
        E = basis_viewmodel.efunction_basis(x3, group_viewmodel.trivial_group(x3))
        assert qexp_viewmodel.to_text(E) == "-1 * t^(-1/6) * tb^(1/6) - 1 * t^(1/6) * tb^(-1/6)"

    def test_loop_efunction(self, loop22):
        E = basis_viewmodel.efunction_basis(loop22, group_viewmodel.trivial_group(loop22))
        assert qexp_viewmodel.to_pretty(E) == "(tb/t)^(-1/3) + 2 + (tb/t)^(1/3)"

    def test_chain_gf(self, chain32):
        E = basis_viewmodel.efunction_basis(chain32, group_viewmodel.gf_group(chain32))
        assert qexp_viewmodel.to_pretty(E) == "(t*tb)^(-1/3) + 2 + (t*tb)^(1/3)"

    def test_fermat_euler_characteristics(self, fermat44):
        chi = lambda G: qexp_viewmodel.chi(basis_viewmodel.efunction_basis(fermat44, G))
        assert chi(group_viewmodel.g0_subgroup(fermat44)) == 6
        assert chi(group_viewmodel.gf_group(fermat44)) == 9
        assert chi(group_viewmodel.trivial_group(fermat44)) == 9


class TestPairs:
    def test_loop_table(self, loop22):
        table = basis_viewmodel.pair_table(loop22, group_viewmodel.trivial_group(loop22))
        identity = GroupElement.identity(2)
        assert table.as_dict() == {
            (identity, identity): 2,
            (identity, element("1/3", "1/3")): 1,
            (identity, element("2/3", "2/3")): 1,
        }
        assert basis_viewmodel.pair_multiplicities_ok(loop22, table)
        assert basis_viewmodel.pair_sign_law(table)

    def test_narrow_sectors_pair_with_identity(self, x3):
        table = basis_viewmodel.pair_table(x3, group_viewmodel.gf_group(x3))
        identity = GroupElement.identity(1)
        assert table.as_dict() == {(element("1/3"), identity): 1, (element("2/3"), identity): 1}

    def test_expected_multiplicity(self, loop22, chain32):
        identity = GroupElement.identity(2)
        assert basis_viewmodel.expected_m_hat(loop22, identity, identity) == 2
        assert basis_viewmodel.expected_m_hat(loop22, identity, element("1/3", "1/3")) == 1
        assert basis_viewmodel.expected_m_hat(chain32, identity, identity) == 1

    @pytest.mark.parametrize("text", SMALL)
    def test_pairs_reproduce_the_basis_engine(self, text):
        f = poly_viewmodel.polynomial(text)
        ft = poly_viewmodel.transpose(f)
        for G in group_viewmodel.all_subgroups(f):
            table = basis_viewmodel.pair_table(f, G)
            assert basis_viewmodel.pair_multiplicities_ok(f, table)
            assert basis_viewmodel.pair_sign_law(table)
            assert basis_viewmodel.efunction_pairs(f, G) == basis_viewmodel.efunction_basis(f, G)
            mirror = basis_viewmodel.pair_table(ft, group_viewmodel.dual_group(f, G))
            assert mirror.as_dict() == table.transposed()


class TestClosedForm:
    @pytest.mark.parametrize("text", SMALL)
    def test_matches_trivial_group(self, text):
        f = poly_viewmodel.polynomial(text)
        E = basis_viewmodel.efunction_basis(f, group_viewmodel.trivial_group(f))
        assert basis_viewmodel.steenbrink_closed_form(f) == E
        assert basis_viewmodel.steenbrink_identity_holds(f, E)

    def test_identity_rejects_other_functions(self, x3):
        E = basis_viewmodel.efunction_basis(x3, group_viewmodel.gf_group(x3))
        assert not basis_viewmodel.steenbrink_identity_holds(x3, E)
        wrong = basis_viewmodel.steenbrink_closed_form(x3).scale(2)
        assert not basis_viewmodel.steenbrink_identity_holds(x3, wrong)
