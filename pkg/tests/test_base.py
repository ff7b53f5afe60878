from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from frtbialg.base import (BaseMap, DegreeMap, FrobeniusSystem, base_algebra, center_basis, cyclic_group_algebra,
                           lift_frobenius, matrix_algebra, parse_rational, rationals, shift, shift_inverse,
                           standard_frobenius, verify_frobenius)

Q = rationals()
DEG = DegreeMap.from_labels(["0", "1"], ["0", "1"], {"0": ["0", "1"], "1": ["1", "0"]})


def test_parse_rational_forms():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-4") == -4
    for bad in ("1/0", "x", "1/2/3", ""):
        with pytest.raises(ValueError):
            parse_rational(bad)


@pytest.mark.parametrize("alg,expected", [
    (rationals(), [(1,)]),
    (matrix_algebra(2), [(1, 0, 0, 1)]),
])
def test_center_small_cases(alg, expected):
    assert center_basis(alg) == [tuple(Fraction(c) for c in v) for v in expected]


def test_center_of_commutative_group_algebra_is_everything():
    assert len(center_basis(cyclic_group_algebra(2))) == 2


@pytest.mark.parametrize("alg", [rationals(), matrix_algebra(2), cyclic_group_algebra(3)])
def test_center_elements_commute(alg):
    for z in center_basis(alg):
        for i in range(alg.dimension):
            e = alg.basis(i)
            assert alg.mul(z, e) == alg.mul(e, z)


def test_shift_moves_delta_along_degree():
    d0 = BaseMap.delta(2, 0, Q)
    assert shift(DEG, "1", d0) == BaseMap.delta(2, 1, Q)
    assert shift(DEG, "0", d0) == d0


vals = st.lists(st.fractions(max_denominator=5).filter(lambda q: abs(q) < 20), min_size=2, max_size=2)


@given(vals, vals)
def test_shift_is_multiplicative_and_invertible(a, b):
    f, g = BaseMap(tuple((x,) for x in a)), BaseMap(tuple((x,) for x in b))
    for x in ("0", "1"):
        assert shift(DEG, x, f.mul(g, Q)) == shift(DEG, x, f).mul(shift(DEG, x, g), Q)
        assert shift_inverse(DEG, x, shift(DEG, x, f)) == f
    assert shift(DEG, "1", BaseMap.constant(2, Q.unit)) == BaseMap.constant(2, Q.unit)


def test_frobenius_examples():
    assert verify_frobenius(Q, FrobeniusSystem((1,), (((1,), (1,)),))) == []
    bad = verify_frobenius(Q, FrobeniusSystem((1,), (((2,), (1,)),)))
    assert any("unit" in b for b in bad)
    with pytest.raises(ValueError):
        verify_frobenius(Q, FrobeniusSystem((1, 0), ()))


def test_diagonal_algebra_coordinate_sum():
    D = base_algebra(Q, 3)
    psi = (1, 1, 1)
    cas = tuple((D.basis(k), D.basis(k)) for k in range(3))
    assert verify_frobenius(D, FrobeniusSystem(psi, cas)) == []


@pytest.mark.parametrize("alg", [rationals(), matrix_algebra(2), cyclic_group_algebra(2)])
@pytest.mark.parametrize("nlam", [1, 2, 3])
def test_lifted_frobenius_is_valid(alg, nlam):
    sys = standard_frobenius(alg)
    assert verify_frobenius(alg, sys) == []
    lifted = lift_frobenius(sys, alg, nlam)
    assert verify_frobenius(base_algebra(alg, nlam), lifted) == []


def test_lift_over_rationals_two_points():
    lifted = lift_frobenius(standard_frobenius(Q), Q, 2)
    assert lifted.psi == (1, 1)
    assert lifted.casimir == (((1, 0), (1, 0)), ((0, 1), (0, 1)))
    assert lifted.derived
