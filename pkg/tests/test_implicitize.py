from fractions import Fraction

import pytest

from toricpatch.implicitize import (ImplicitForm, degree_search, implicitize, monomials,
                                    residual_max, sample_parameters, sample_points)
from toricpatch.lattice import ExponentSet
from toricpatch.models import load_fixture
from toricpatch.patch import ControlScheme
from toricpatch.verify import CUBIC_TERMS, PILLOW_TERMS


def test_monomial_order():
    assert monomials(2, 2) == [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]
    assert len(monomials(3, 6)) == 84


def test_form_normalization():
    f = ImplicitForm.from_vector(1, 1, [Fraction(-2, 3), Fraction(4, 3)])
    assert f.coeffs == (1, -2)
    assert ImplicitForm.from_vector(1, 1, [0, -3]).coeffs == (0, 1)
    assert f.ratio_to(ImplicitForm(1, 1, (-1, 2))) == -1
    assert f.ratio_to(ImplicitForm(1, 1, (1, 2))) is None
    with pytest.raises(ValueError):
        ImplicitForm(1, 1, (0, 0))


def test_sample_parameters_deterministic_and_distinct():
    a = sample_parameters(2, 30)
    assert a == sample_parameters(2, 30)
    assert len(set(a)) == 30
    assert sample_parameters(1, 3) == [(Fraction(3, 2),), (Fraction(5, 3),), (Fraction(7, 4),)]


def test_conic():
    A = ExponentSet.of([0, 1, 2])
    forms = implicitize(A, ControlScheme.identity(3), 2)
    assert len(forms) == 1 and forms[0].terms() == {(1, 0, 1): 1, (0, 2, 0): -1}
    assert implicitize(A, ControlScheme.identity(3), 1) == []


def test_cubic_and_pillow():
    for name, d, terms in (("rnc3", 3, CUBIC_TERMS), ("pillow", 4, PILLOW_TERMS)):
        m = load_fixture(name)
        forms = implicitize(m.A, m.scheme, d)
        assert len(forms) == 1
        assert forms[0].ratio_to(ImplicitForm.from_terms(m.scheme.k, d, terms)) is not None
        assert residual_max(forms[0], sample_points(m.A, m.scheme, 50, offset=900)) == 0


def test_degree_search_finds_lowest():
    m = load_fixture("rnc3")
    d, forms = degree_search(m.A, m.scheme)
    assert d == 3 and len(forms) == 1
    assert implicitize(m.A, m.scheme, 2) == []


def test_degree_four_has_multiples():
    m = load_fixture("rnc3")
    # cubic times each of w, x, y
    assert len(implicitize(m.A, m.scheme, 4)) == 3


def test_threads_give_same_answer(monkeypatch):
    m = load_fixture("pillow")
    serial = implicitize(m.A, m.scheme, 4)
    monkeypatch.setenv("TORIC_THREADS", "4")
    assert implicitize(m.A, m.scheme, 4) == serial


def test_format():
    m = load_fixture("pillow")
    text = implicitize(m.A, m.scheme, 4)[0].format(m.variables)
    assert "16*w^2*z^2" in text and text.startswith("w^4")


def test_residual_max_checks_arity():
    with pytest.raises(ValueError):
        residual_max(ImplicitForm(1, 1, (1, 1)), [(1, 2, 3)])
