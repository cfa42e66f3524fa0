import json
import random
from fractions import Fraction
from math import lcm

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from instances import data_with_row_gcd

from hgsheaf.classify import (
    ClassifyError,
    decide_isomorphism,
    find_witness,
    half_grid,
    profile_equal,
    rank1_terms,
    recover_rank1,
    recover_rank1_data,
    synthesize_rank1,
)
from hgsheaf.hgdata import HGData, complex_data, finite_data
from hgsheaf.mellin import generic_shift, point_of, profile_value
from hgsheaf.moves import move_frobenius, move_multiplicative, normalize
from hgsheaf.residues import Residue
from hgsheaf.sampling import perturb, permute, random_data

R = Residue.of


def _pair_sample(rng, p):
    return random_data(rng, p=p, max_rank=2, max_r=5, primitive=True, reduced=True,
                       nondivisorial=True)


def test_profile_equal_examples(rng):
    d = random_data(rng, rank=2, r=4, max_den=6)
    assert profile_equal(d, permute(d, rng)) == (True, 0)
    bumped = perturb(d, rng)
    assert profile_equal(d, bumped)[0] is False
    with pytest.raises(ClassifyError):
        profile_equal(d, random_data(rng, rank=1))


def test_constant_offset_from_zero_form():
    d = complex_data([[1], [1], [-2]], ["1/3", "1/5", "1/7"])
    padded = HGData(1, d.l + ((0,),), d.kappa + (R("1/3"),))
    # the zero form adds <1/3> - 1/2 everywhere
    assert profile_equal(d, padded) == (True, Fraction(1, 6))
    half = HGData(1, d.l + ((0,),), d.kappa + (R("1/2"),))
    assert profile_equal(d, half) == (True, 0)


def test_decide_examples(rng):
    d = complex_data([[2], [-1], [-1]], ["1/3", "1/5", "1/7"])
    moved = move_multiplicative(d, 0, 2)
    v = decide_isomorphism(d, moved)
    assert v.equivalent and v.normal_forms[0] == v.normal_forms[1]
    assert v.checked_points > 0 and v.check_exhaustive
    f, i, _ = data_with_row_gcd(rng, p=3, want="frobenius")
    assert decide_isomorphism(f, move_frobenius(f, i)).equivalent
    bumped = perturb(d, rng)
    v = decide_isomorphism(d, bumped)
    assert not v.equivalent and v.witness is not None


def test_decide_mismatch_errors(rng):
    a = random_data(rng, p=5, rank=1)
    with pytest.raises(ClassifyError, match="flavor"):
        decide_isomorphism(a, random_data(rng, rank=1))
    with pytest.raises(ClassifyError, match="rank"):
        decide_isomorphism(a, random_data(rng, p=5, rank=2))


def _check_witness(verdict):
    """Recompute both witness points with the reference evaluator."""
    na, nb = verdict.normal_forms
    w = verdict.witness
    diffs = []
    for (chi, t), (va, vb) in ((w.reference, w.reference_values), (w.point, w.values)):
        assert profile_value(na, chi, t) == va
        assert profile_value(nb, chi, t) == vb
        diffs.append(va - vb)
    assert diffs[0] != diffs[1]


@settings(max_examples=25)
@given(st.integers(0, 10**6), st.sampled_from([None, 3, 5, 7]))
def test_round_trip(seed, p):
    rng = random.Random(seed)
    d = _pair_sample(rng, p)
    assert decide_isomorphism(d, permute(d, rng)).equivalent
    v = decide_isomorphism(d, perturb(d, rng))
    assert not v.equivalent
    assert v.witness is not None
    _check_witness(v)


def test_verdict_json(rng):
    d = _pair_sample(rng, 5)
    v = decide_isomorphism(d, perturb(d, rng))
    obj = json.loads(v.to_json())
    assert obj["verdict"] == "inequivalent"
    assert obj["witness"]["difference_change"] != "0"
    obj = json.loads(decide_isomorphism(d, d).to_json())
    assert obj["verdict"] == "equivalent" and obj["witness"] is None


def test_find_witness_none_for_equal_profiles(rng):
    d = _pair_sample(rng, None)
    assert find_witness(d, permute(d, rng)) is None


def test_recover_examples():
    f = synthesize_rank1([(1, R("1/3"), 1)], 0, 3)
    assert recover_rank1(f, 3) == ([(1, R("1/3"), 1)], 0)
    zero = {x: Fraction(0) for x in half_grid(4)}
    assert recover_rank1(zero, 4) == ([], 0)
    f = synthesize_rank1([(1, R("1/4"), 2), (-1, R("1/4"), 1)], Fraction(3, 8), 4)
    assert recover_rank1(f, 4) == ([(-1, R("1/4"), 1), (1, R("1/4"), 2)], Fraction(3, 8))


def test_single_term_jump_location():
    f = synthesize_rank1([(1, R("1/3"), 1)], 0, 3)
    before, at = f[R("1/2")], f[R("2/3")]
    assert (before, at) == (Fraction(1, 3), Fraction(-1, 2))  # rise 1/6 then drop 1


def test_recover_rejects_non_profiles():
    f = {x: Fraction(0) for x in half_grid(3)}
    f[R("1/3")] = Fraction(1, 2)
    with pytest.raises(ClassifyError, match="not a bracket profile"):
        recover_rank1(f, 3)
    g = {x: x.value ** 2 for x in half_grid(3)}
    with pytest.raises(ClassifyError, match="not a bracket profile"):
        recover_rank1(g, 3)
    with pytest.raises(ClassifyError, match="missing"):
        recover_rank1({R(0): Fraction(0)}, 3)


@given(st.integers(0, 10**6))
def test_recover_inverts_synthesis(seed):
    rng = random.Random(seed)
    N = rng.randint(1, 16)
    terms = {}
    for _ in range(rng.randint(0, 4)):
        k = R(Fraction(rng.randrange(N), N))
        s = rng.choice([1, -1])
        # a (+, k) and (-, -k) term jump at the same point, so only one of them is kept
        jump = -k if s == 1 else k
        if any((-kk if ss == 1 else kk) == jump for ss, kk in terms):
            continue
        terms[(s, k)] = rng.randint(1, 5)
    listed = sorted((s, k, m) for (s, k), m in terms.items())
    c = Fraction(rng.randint(-20, 20), rng.randint(1, 8))
    assert recover_rank1(synthesize_rank1(listed, c, N), N) == (listed, c)


@given(st.integers(0, 10**6))
def test_rank1_terms_agree_with_profile(seed):
    rng = random.Random(seed)
    data = random_data(rng, rank=1, coeff=1, max_r=6, max_den=8, nonresonant=False, reduced=True)
    assume(all(abs(row[0]) == 1 for row in data.l))
    N = 1
    for k in data.kappa:
        N = lcm(N, k.den)
    f = synthesize_rank1(rank1_terms(data), 0, N)
    shift = generic_shift(data)
    for a in range(N):
        chi, _ = point_of((a,), 1, N, shift)
        assert f[R(Fraction(2 * a + 1, 2 * N))] == profile_value(data, chi)


def test_recover_data_round_trip(rng):
    d = random_data(rng, rank=1, coeff=1, max_r=5, max_den=6, nondivisorial=True)
    N = 60
    back, c = recover_rank1_data(synthesize_rank1(rank1_terms(d), 0, N), N)
    assert c == 0
    assert sorted(back.pairs()) == sorted(d.pairs())
