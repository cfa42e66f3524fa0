from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hgsheaf.charsum import (
    CycloElem,
    FiniteField,
    character_sign_at_minus_one,
    cyclotomic_polynomial,
    frobenius_gauss_identity,
    gauss_sum,
    gauss_valuation,
    hasse_davenport_ratio,
)
from hgsheaf.padic import padic_order
from hgsheaf.residues import Residue

SMALL_Q = (3, 4, 5, 7, 8, 9, 11, 13)


def admissible(field):
    return [Residue.of(Fraction(a, field.q - 1)) for a in range(field.q - 1)]


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


@given(st.integers(1, 30), st.integers(-40, 40), st.integers(-40, 40))
def test_zeta_powers(n, a, b):
    z = CycloElem.zeta(n)
    assert z**n == CycloElem.integer(1, n)
    assert CycloElem.zeta(n, a) * CycloElem.zeta(n, b) == CycloElem.zeta(n, a + b)


def test_cyclo_serialization():
    x = CycloElem.zeta(12, 5) + 3
    assert CycloElem.from_dict(x.to_dict()) == x
    assert x.to_dict()["n"] == 12


@pytest.mark.parametrize("q", [3, 4, 8, 9, 16, 25, 27])
def test_field_axioms(q):
    f = FiniteField.of_order(q)
    assert f.q == q and f.p**f.e == q
    assert f.modulus[-1] == 1
    g = f.generator
    assert len({f.power(g, k) for k in range(q - 1)}) == q - 1
    for a in list(f.elements())[1:6]:
        assert f.mul(a, f.power(a, q - 2)) == f.power(a, q - 1) == 1


@pytest.mark.parametrize("q", SMALL_Q)
def test_gauss_zero_character(q):
    assert gauss_sum(FiniteField.of_order(q), 0) == CycloElem.integer(-1)


def test_quadratic_examples():
    g = gauss_sum(FiniteField.of_order(5), Fraction(1, 2))
    for z in g.embeddings():
        assert abs(abs(z) ** 2 - 5) < 1e-9
    assert abs(abs(g.embed()) - 5 ** 0.5) < 1e-9
    g9 = gauss_sum(FiniteField.of_order(9), Fraction(1, 2))
    assert all(abs(abs(z) ** 2 - 9) < 1e-9 for z in g9.embeddings())


def test_valuation_examples():
    assert gauss_valuation(FiniteField.of_order(3), Fraction(1, 2)) == Fraction(1, 2)
    assert gauss_valuation(FiniteField.of_order(7), 0) == 0
    assert gauss_valuation(FiniteField.of_order(9), Fraction(1, 4)) == 1


def test_inadmissible_characters_raise():
    with pytest.raises(ValueError):
        gauss_sum(FiniteField.of_order(7), Fraction(1, 4))
    with pytest.raises(ValueError):
        hasse_davenport_ratio(FiniteField.of_order(7), Fraction(1, 3), 4)


@pytest.mark.parametrize("q", SMALL_Q)
def test_conjugate_pair(q):
    f = FiniteField.of_order(q)
    for k in admissible(f):
        if k.is_zero():
            continue
        prod = gauss_sum(f, k) * gauss_sum(f, -k)
        assert prod == CycloElem.integer(character_sign_at_minus_one(f, k) * q)
        assert gauss_valuation(f, k) + gauss_valuation(f, -k) == f.e


@pytest.mark.parametrize("q", [4, 5, 7, 8, 9, 11, 13, 16, 25, 27])
def test_stickelberger_against_padic_order(q):
    f = FiniteField.of_order(q)
    for k in admissible(f):
        assert padic_order(gauss_sum(f, k), f) == gauss_valuation(f, k)


def test_psi_shift_independence_of_modulus_and_valuation():
    f = FiniteField.of_order(13)
    for k in admissible(f)[1:]:
        for s in (2, 5):
            g = gauss_sum(f, k, psi_shift=s)
            assert abs(abs(g.embed()) ** 2 - 13) < 1e-9
            assert padic_order(g, f) == gauss_valuation(f, k)


def test_frobenius_examples():
    f9 = FiniteField.of_order(9)
    assert frobenius_gauss_identity(f9, Fraction(1, 8))
    assert gauss_sum(f9, Fraction(3, 8)) == gauss_sum(f9, Fraction(1, 8))
    assert frobenius_gauss_identity(FiniteField.of_order(5), Fraction(1, 4))
    assert frobenius_gauss_identity(FiniteField.of_order(7), Fraction(1, 3))


def test_hasse_davenport_examples():
    f7 = FiniteField.of_order(7)
    assert hasse_davenport_ratio(f7, Fraction(1, 3), 1) == CycloElem.integer(1)
    ratio = hasse_davenport_ratio(f7, Fraction(1, 3), 2)
    assert all(abs(abs(z) - 1) < 1e-10 for z in ratio.embeddings())
    f13 = FiniteField.of_order(13)
    lam = Fraction(1, 12)
    lhs = sum(gauss_valuation(f13, lam + Fraction(j, 3)) for j in range(3))
    rhs = gauss_valuation(f13, 3 * lam) + sum(gauss_valuation(f13, Fraction(j, 3)) for j in (1, 2))
    assert lhs == rhs


@pytest.mark.parametrize("q, d", [(7, 2), (7, 3), (13, 2), (13, 3), (9, 2), (25, 3)])
def test_hasse_davenport_ratio_is_root_of_unity(q, d):
    f = FiniteField.of_order(q)
    for lam in admissible(f):
        ratio = hasse_davenport_ratio(f, lam, d)
        assert ratio.root_of_unity_exponent() is not None
        assert padic_order(ratio, f) == 0
