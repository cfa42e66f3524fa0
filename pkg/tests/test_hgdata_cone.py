import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hgsheaf.cone import ConeError, ConeSpec, cone_of, facet_value, facets, is_nonresonant
from hgsheaf.hgdata import (
    DataError,
    HGData,
    alpha,
    complex_data,
    divisorial_pairs,
    equal_data,
    finite_data,
    is_primitive_data,
    presentation,
    validate,
)
from hgsheaf.lattice import rank
from hgsheaf.residues import Residue
from hgsheaf.sampling import random_data


def test_structural_errors():
    with pytest.raises(DataError):
        complex_data([[1]], [0])
    with pytest.raises(DataError):
        HGData(1, ((1,), (-1,)), (Residue.zero(),))
    with pytest.raises(DataError):
        HGData.from_dict({"flavor": "other", "rank": 1, "l": [[1], [-1]], "kappa": ["0", "0"]})


def test_validate_examples():
    rep = validate(complex_data([[1], [-1]], ["1/2", "1/3"]))
    assert rep.separated is False and not rep.valid
    rep = validate(complex_data([[1], [1], [-2]], ["1/3"] * 3))
    assert rep.valid and rep.injective_primitive and rep.separated and rep.sum_zero
    rep = validate(finite_data([[1], [1], [-2]], ["1/3", "1/2", "0"], 3))
    assert rep.p_denominators_ok is False and "p_denominators_ok" in rep.failures


def test_alpha_examples():
    d = complex_data([[1], [-1]], ["1/2", "1/3"])
    sign = presentation(d).omega[0][0]
    assert alpha(d) == (Residue.of(Fraction(5, 6) * sign),)
    assert alpha(complex_data([[1], [1], [-2]], [0, 0, 0])) == (Residue.zero(),) * 2
    assert alpha(complex_data([[1], [1], [-2]], ["1/2", "1/2", "0"])) == (Residue.zero(),) * 2


def test_primitive_and_divisorial_examples():
    assert is_primitive_data(complex_data([[1, 0], [0, 1], [-1, -1]], [0, 0, 0]))
    assert not is_primitive_data(complex_data([[2, -2], [0, 1], [-2, 1]], [0, 0, 0]))
    assert not is_primitive_data(complex_data([[0], [1], [-1]], [0, 0, 0]))
    d = complex_data([[1], [-1], [2], [-2]], ["1/4", "3/4", "0", "0"])
    assert (0, 1) in divisorial_pairs(d)
    d = complex_data([[1], [-1], [2], [-2]], ["1/4", "1/4", "0", "0"])
    assert (0, 1) not in divisorial_pairs(d)


def test_json_round_trip(rng):
    for p in (None, 5):
        d = random_data(rng, p=p)
        assert HGData.from_json(d.to_json()) == d


def test_equal_data_up_to_permutation(rng):
    d = random_data(rng, rank=2, r=4)
    assert equal_data(d, d.permuted([3, 1, 0, 2]))


def test_facet_examples():
    assert [f.h for f in facets(ConeSpec.of([(1, 0), (0, 1)]))] == [(0, 1), (1, 0)]
    assert facets(ConeSpec.of([(1, 0), (-1, 0), (0, 1), (0, -1)])) == []
    assert [f.h for f in facets(ConeSpec.of([(1, 0), (1, 1), (1, 2)]))] == [(0, 1), (2, -1)]
    with pytest.raises(ConeError):
        facets(ConeSpec.of([(1, 0), (2, 0)]))


def _resonant_by_definition(gens, point):
    return any(facet_value(f, point).is_zero() for f in facets(ConeSpec.of(gens)))


def test_resonance_examples():
    gens = [(1, 0), (0, 1)]
    assert _resonant_by_definition(gens, (Residue.of(Fraction(1, 2)), Residue.zero()))
    assert not _resonant_by_definition(gens, (Residue.of(Fraction(1, 2)), Residue.of(Fraction(1, 3))))
    d = complex_data([[1], [1], [-2]], [0, 0, 0])
    assert facets(cone_of(d)) and not is_nonresonant(d)
    assert is_nonresonant(complex_data([[1], [1], [-2]], ["1/3", "1/5", "1/7"]))


@given(st.integers(0, 10**6))
def test_facet_forms_support_the_cone(seed):
    rng = random.Random(seed)
    d = random_data(rng, rank=rng.randint(1, 2), max_r=5, nonresonant=False)
    cone = cone_of(d)
    for f in facets(cone):
        vals = [f(g) for g in cone.generators]
        assert all(v >= 0 for v in vals)
        zero = [g for g, v in zip(cone.generators, vals) if v == 0]
        assert rank(zero) == cone.dim - 1
