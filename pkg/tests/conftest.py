from fractions import Fraction as F

import pytest

from app.modules.group.models import GroupElement
from app.modules.group.viewmodel import group_viewmodel
from app.modules.poly.viewmodel import poly_viewmodel


def element(*comps) -> GroupElement:
    return GroupElement(comps=tuple(F(c) for c in comps))


@pytest.fixture
def poly():
    return poly_viewmodel.polynomial


@pytest.fixture
def group():
    def build(text: str, spec: str = "trivial"):
        f = poly_viewmodel.polynomial(text)
        return f, group_viewmodel.parse_group(f, spec)
    return build


@pytest.fixture
def x3():
    return poly_viewmodel.polynomial("x^3")


@pytest.fixture
def chain32():
    return poly_viewmodel.polynomial("x^3*y + y^2")


@pytest.fixture
def loop22():
    return poly_viewmodel.polynomial("x^2*y + y^2*x")


@pytest.fixture
def fermat44():
    return poly_viewmodel.polynomial("x^4 + y^4")
