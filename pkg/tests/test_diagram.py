import numpy as np
import pytest

from ribbonknots import fixtures
from ribbonknots.curves import rescaled_edge
from ribbonknots.diagram import (RADIAL, all_resolutions, gauss_from_spatial, limiting_choice,
                                 limiting_resolution, planar_code, radial_margins, resolve)
from ribbonknots.errors import GoalPostObstruction, NonGenericProjection
from ribbonknots.intersect import sphere_double_points
from ribbonknots.invariants import LaurentPoly, jones, profile
from ribbonknots.codes import gauss_to_pd, reidemeister_reduce

LEFT_TREFOIL = LaurentPoly({-16: -1, -12: 1, -4: 1})


def test_radial_circle_limit_is_empty():
    assert len(limiting_resolution(fixtures.radial_circle_frame(1024))) == 0


def test_figure_eight_field_limit_is_a_curl():
    code = limiting_resolution(fixtures.figure_eight_field_frame())
    assert code.crossing_count == 1
    assert profile(code).determinant == 1


def test_trefoil_flip_resolutions():
    frame = fixtures.trefoil_flip_frame()
    codes = all_resolutions(frame)
    assert len(codes) == 8
    texts = {c.canonical_text() for c in codes}
    assert limiting_resolution(frame).canonical_text() in texts
    # alternating choices give the two trefoils, the rest unknots
    dets = sorted(profile(c).determinant for c in codes)
    assert dets.count(3) == 2 and dets.count(1) == 6


def test_limit_matches_small_t():
    frame = fixtures.trefoil_flip_frame()
    expect = limiting_resolution(frame).canonical_text()
    for t in (1e-2, 1e-3):
        assert gauss_from_spatial(rescaled_edge(frame, t), RADIAL, frame.grid_n).canonical_text() == expect


def test_radial_margins_sign_gives_choice():
    frame = fixtures.trefoil_flip_frame()
    dps = sphere_double_points(frame.field, frame.tol, frame.grid_n)
    margins = radial_margins(frame, dps)
    assert limiting_choice(frame, dps) == tuple(m > 0 for m in margins)


def test_goalpost_blocks_limit():
    with pytest.raises(GoalPostObstruction):
        limiting_resolution(fixtures.goalpost_frame())


def test_resolve_checks_length():
    frame = fixtures.trefoil_flip_frame(1024)
    dps = sphere_double_points(frame.field, frame.tol, frame.grid_n)
    with pytest.raises(ValueError):
        resolve(dps, (True,), frame)
    assert resolve(dps, (True,) * 3, frame) == resolve(dps, (True,) * 3, frame.field)


def test_trefoil_curve_planar_code():
    code = planar_code(fixtures.trefoil_curve())
    assert code.crossing_count == 3
    assert jones(gauss_to_pd(code)) == LEFT_TREFOIL


def test_trefoil_code_independent_of_direction():
    rng = np.random.default_rng(5)
    curve = fixtures.trefoil_curve()
    for _ in range(3):
        d = rng.normal(size=3)
        code = gauss_from_spatial(curve, d)
        assert profile(code).jones == LEFT_TREFOIL


def test_nongeneric_projection():
    curve = fixtures.nongeneric_projection_curve()
    with pytest.raises(NonGenericProjection):
        gauss_from_spatial(curve, fixtures.NONGENERIC_DIRECTION)
    assert profile(planar_code(curve)).determinant == 1


def test_unknown_projection():
    with pytest.raises(ValueError):
        gauss_from_spatial(fixtures.trefoil_curve(), "cylindrical")


def test_single_crossing_field_resolves_to_unknot():
    frame = fixtures.figure_eight_field_frame(1024)
    dps = sphere_double_points(frame.field, frame.tol, frame.grid_n)
    for choice in ((True,), (False,)):
        code = resolve(dps, choice, frame)
        assert reidemeister_reduce(code).crossing_count == 0
