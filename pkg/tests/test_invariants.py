import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moves import random_moves
from ribbonknots import fixtures
from ribbonknots.codes import SignedGaussCode, braid_closure_code, gauss_to_pd
from ribbonknots.errors import TooManyCrossings
from ribbonknots.invariants import (Comparison, LaurentPoly, determinant, goeritz_determinant, jones,
                                    kauffman_bracket, profile, same_knot_type)

# Jones polynomials in q = t^(1/4), from standard knot tables
TREFOIL_RIGHT = LaurentPoly({4: 1, 12: 1, 16: -1})
FIGURE_EIGHT = LaurentPoly({-8: 1, -4: -1, 0: 1, 4: -1, 8: 1})


def _pd(code):
    return gauss_to_pd(code)


def test_laurent_arithmetic():
    a = LaurentPoly({1: 2, -1: 1})
    b = LaurentPoly({1: -2, 3: 1})
    assert a + b == LaurentPoly({-1: 1, 3: 1})
    assert a - a == LaurentPoly()
    assert a * b == LaurentPoly({0: -2, 2: -3, 4: 2})
    assert (a * 3).coeffs == {-1: 3, 1: 6}
    assert a ** 2 == a * a
    assert a.shift(2) == LaurentPoly({3: 2, 1: 1})
    assert LaurentPoly.one() == 1
    assert LaurentPoly.from_json(a.to_json()) == a


def test_laurent_palindrome():
    assert FIGURE_EIGHT.is_palindromic()
    assert not TREFOIL_RIGHT.is_palindromic()


def test_unknot():
    empty = SignedGaussCode()
    assert jones(_pd(empty)) == 1
    assert determinant(_pd(empty)) == 1
    curl = SignedGaussCode.parse("O1+ U1+")
    assert jones(_pd(curl)) == 1


def test_trefoil_jones():
    assert jones(_pd(fixtures.trefoil_code())) == TREFOIL_RIGHT
    assert jones(_pd(fixtures.trefoil_code().mirror())) == TREFOIL_RIGHT.negate_exponents()


def test_figure_eight_jones():
    assert jones(_pd(fixtures.figure_eight_code())) == FIGURE_EIGHT
    assert jones(_pd(braid_closure_code([1, -2, 1, -2]))) == FIGURE_EIGHT


@pytest.mark.parametrize("code,det", [(fixtures.trefoil_code(), 3), (fixtures.figure_eight_code(), 5),
                                      (fixtures.granny_code(), 9), (braid_closure_code([1] * 5), 5)])
def test_determinants(code, det):
    pd = _pd(code)
    assert determinant(pd) == det
    assert goeritz_determinant(pd) == det


def test_granny_jones_is_square():
    assert jones(_pd(fixtures.granny_code())) == TREFOIL_RIGHT * TREFOIL_RIGHT


def test_bracket_of_curl():
    # a positive curl multiplies the bracket by -A^3
    assert kauffman_bracket(_pd(SignedGaussCode.parse("O1+ U1+"))) in (LaurentPoly({3: -1}), LaurentPoly({-3: -1}))


def test_braid_relation_r3():
    a = braid_closure_code([1, 2, 1, 3, -2])
    b = braid_closure_code([2, 1, 2, 3, -2])
    assert jones(_pd(a)) == jones(_pd(b))
    assert determinant(_pd(a)) == determinant(_pd(b))


def test_too_many_crossings():
    with pytest.raises(TooManyCrossings):
        jones(_pd(braid_closure_code([1] * 17)))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_invariants_under_random_moves(seed):
    code = fixtures.trefoil_code()
    moved = random_moves(code, np.random.default_rng(seed), 3, max_crossings=9)
    assert jones(_pd(moved)) == TREFOIL_RIGHT
    assert determinant(_pd(moved)) == goeritz_determinant(_pd(moved)) == 3


def test_profile_and_comparison():
    p = profile(fixtures.trefoil_code())
    assert p.determinant == 3 and p.writhe == 3 and p.crossing_count_reduced == 3
    assert same_knot_type(p, profile(fixtures.trefoil_code().rotated(2))) is Comparison.INDISTINGUISHABLE
    assert same_knot_type(p, profile(fixtures.trefoil_code().mirror())) is Comparison.DISTINCT
    assert same_knot_type(p, profile(fixtures.figure_eight_code())) is Comparison.DISTINCT
