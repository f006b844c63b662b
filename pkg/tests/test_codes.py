import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moves import random_moves
from ribbonknots import fixtures
from ribbonknots.codes import (PDCode, SignedGaussCode, braid_closure_code, gauss_to_pd, is_realizable,
                               parse_pd, reidemeister_reduce, same_diagram)
from ribbonknots.errors import CodeParseError, NonRealizableCode

CODES = [fixtures.TREFOIL_CODE, fixtures.FIGURE_EIGHT_CODE, fixtures.GRANNY_CODE]


@pytest.mark.parametrize("text", CODES)
def test_parse_roundtrip(text):
    code = SignedGaussCode.parse(text)
    assert str(code) == text
    assert SignedGaussCode.parse(str(code)) == code


def test_empty_code_is_unknot_diagram():
    code = SignedGaussCode.parse("  ")
    assert len(code) == 0 and code.crossing_count == 0
    assert code.canonical_text() == ""


@pytest.mark.parametrize("bad", ["O1+ U1", "X1+ U1+", "O1+ O1+", "O1+ U1-", "O1+ U2+", "O0+ U0+"])
def test_parse_rejects(bad):
    with pytest.raises(CodeParseError):
        SignedGaussCode.parse(bad)


def test_counts_and_writhe():
    t = fixtures.trefoil_code()
    assert t.crossing_count == 3 and t.writhe == 3
    f = fixtures.figure_eight_code()
    assert f.crossing_count == 4 and f.writhe == 0


@given(shift=st.integers(0, 11), idx=st.integers(0, 2))
def test_canonical_invariant_under_rotation(shift, idx):
    code = SignedGaussCode.parse(CODES[idx])
    assert code.rotated(shift).canonical() == code.canonical()
    assert same_diagram(code, code.rotated(shift))


@pytest.mark.parametrize("text", CODES)
def test_mirror_is_involution(text):
    code = SignedGaussCode.parse(text)
    assert code.mirror().mirror() == code
    assert code.mirror().writhe == -code.writhe


def test_nonrealizable():
    code = SignedGaussCode.parse("O1+ O2+ U1+ U2+")
    assert not is_realizable(code)
    with pytest.raises(NonRealizableCode):
        gauss_to_pd(code)


def test_pd_of_trefoil():
    pd = gauss_to_pd(fixtures.trefoil_code())
    assert len(pd) == 3 and pd.writhe == 3
    assert parse_pd(str(pd)).crossings == pd.crossings


def test_pd_rejects_bad_labels():
    with pytest.raises(NonRealizableCode):
        PDCode(((1, 2, 3, 4),), (1,))


def test_pd_mirror_flips_signs():
    pd = gauss_to_pd(fixtures.figure_eight_code())
    assert pd.mirror().signs == tuple(-s for s in pd.signs)


def test_reidemeister_reduce_removes_added_moves():
    rng = np.random.default_rng(3)
    for _ in range(20):
        moved = random_moves(SignedGaussCode(), rng, 3)
        assert reidemeister_reduce(moved).crossing_count == 0


def test_reidemeister_reduce_keeps_reduced_codes():
    for text in CODES:
        code = SignedGaussCode.parse(text)
        assert reidemeister_reduce(code) == code


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), idx=st.integers(0, 2))
def test_random_moves_stay_realizable(seed, idx):
    code = random_moves(SignedGaussCode.parse(CODES[idx]), np.random.default_rng(seed), 3)
    assert is_realizable(code)


def test_braid_closure():
    code = braid_closure_code([1, 1, 1])
    assert same_diagram(code, fixtures.trefoil_code())
    assert braid_closure_code([1, -2, 1, -2]).crossing_count == 4


def test_braid_closure_rejects_links():
    with pytest.raises(CodeParseError):
        braid_closure_code([1, 1])
    with pytest.raises(CodeParseError):
        braid_closure_code([0, 1])
