from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hgsheaf.residues import (
    PResidue,
    Residue,
    balanced_bracket,
    div_p,
    euler_phi,
    frac_bracket,
    frobenius_orbit,
    multiplicative_order,
    preimages,
    units,
)

fractions = st.fractions(max_denominator=60)
primes = st.sampled_from([2, 3, 5, 7, 11, 13])


def test_canonical_form():
    assert Residue.of(Fraction(7, 4)) == Residue(3, 4)
    assert Residue.of(-1) == Residue.zero()
    assert Residue.parse(" 6/8 ") == Residue(3, 4)
    assert Residue.parse("-1/3") == Residue(2, 3)
    with pytest.raises(ValueError):
        Residue(2, 4)
    with pytest.raises(ValueError):
        Residue.parse("1/0")


@pytest.mark.parametrize("x, expected", [(0, 0), (Fraction(7, 4), Fraction(3, 4)),
                                         (Fraction(-1, 3), Fraction(2, 3))])
def test_frac_bracket_examples(x, expected):
    assert frac_bracket(x) == expected
    assert frac_bracket(Residue.of(x)) == expected


def test_frobenius_orbit_examples():
    orbit, e = frobenius_orbit(Fraction(1, 4), 3)
    assert [o.value for o in orbit] == [Residue(1, 4), Residue(3, 4)] and e == 2
    assert frobenius_orbit(0, 5)[1] == 1
    orbit, e = frobenius_orbit(Fraction(1, 2), 3)
    assert e == 1 and orbit[0].value == Residue(1, 2)


def test_balanced_bracket_examples():
    assert balanced_bracket(0, 7) == Fraction(-1, 2)
    assert balanced_bracket(Fraction(1, 4), 3) == 0
    assert balanced_bracket(Fraction(1, 8), 3) == Fraction(-1, 4)


def test_p_residue_rejects_p_in_denominator():
    with pytest.raises(ValueError):
        PResidue.of(Fraction(1, 3), 3)
    with pytest.raises(ValueError):
        balanced_bracket(Fraction(1, 6), 3)


@given(fractions, fractions)
def test_group_laws(a, b):
    x, y = Residue.of(a), Residue.of(b)
    assert x + y == Residue.of(a + b)
    assert x - y == x + (-y)
    assert (x + y) - y == x
    assert 3 * x == x + x + x


@given(fractions)
def test_bracket_reflection(a):
    x = Residue.of(a)
    if x.is_zero():
        assert frac_bracket(x) + frac_bracket(-x) == 0
    else:
        assert frac_bracket(x) + frac_bracket(-x) == 1


@given(fractions, primes)
def test_balanced_bracket_properties(a, p):
    x = Residue.of(a)
    if x.den % p == 0:
        return
    b = balanced_bracket(x, p)
    assert Fraction(-1, 2) <= b < Fraction(1, 2)
    assert balanced_bracket(x * p, p) == b
    if not x.is_zero():
        assert b + balanced_bracket(-x, p) == 0


@given(fractions, primes)
def test_div_p_inverts_times_p(a, p):
    x = Residue.of(a)
    if x.den % p == 0:
        return
    y = div_p(x, p)
    assert y * p == x and y.den == x.den
    assert PResidue.of(x, p).div_p().times_p().value == x


@given(fractions, st.integers(1, 7))
def test_preimages(a, d):
    x = Residue.of(a)
    ys = preimages(x, d)
    assert len(set(ys)) == d
    assert all(y * d == x for y in ys)


def test_unit_helpers():
    assert units(12) == [1, 5, 7, 11]
    assert euler_phi(1) == 1 and euler_phi(24) == 8
    assert multiplicative_order(3, 8) == 2
    with pytest.raises(ValueError):
        multiplicative_order(2, 8)
