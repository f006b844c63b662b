"""Small worked examples, one per operation contract not covered elsewhere."""

import numpy as np
import pytest

from ribbonknots import fixtures
from ribbonknots.codes import SignedGaussCode, gauss_to_pd, reidemeister_reduce
from ribbonknots.constructor import UNKNOT, build_base, construct, hamiltonian_arc_check
from ribbonknots.curves import (ClosedCurve3, RibbonFrame, SphericalCurve, arclength_normalize, d1_d2,
                                frame_distance, hausdorff, outer_edge, reparameterize, rescaled_edge,
                                spherical_projection, validate_frame)
from ribbonknots.diagram import RADIAL, all_resolutions, gauss_from_spatial, limiting_resolution
from ribbonknots.errors import CoincidentPoints
from ribbonknots.intersect import (chord_direction, crossing_widths, detect_goalposts, edge_embedded,
                                   match_double_points, sphere_double_points, stabilization_width)
from ribbonknots.invariants import Comparison, LaurentPoly, jones, kauffman_bracket, profile, same_knot_type


@pytest.fixture(scope="module")
def trefoil_frame():
    return construct(UNKNOT, fixtures.trefoil_code())[0]


# curves

def test_circle_values():
    c = ClosedCurve3.circle()
    assert np.allclose(c.eval(0.0), [1, 0, 0]) and np.allclose(c.eval(0.25), [0, 1, 0])
    r = ClosedCurve3.fit(fixtures.trefoil_curve().sample(256))
    assert np.allclose(r.eval(0.3), r.eval(1.3))


def test_edge_examples():
    frame = fixtures.constant_field_frame()
    assert np.allclose(outer_edge(frame, 2.0).sample(256), frame.base.sample(256) + [0, 0, 2])
    circ = fixtures.radial_circle_frame(1024)
    assert np.allclose(np.linalg.norm(outer_edge(circ, 1.0).sample(256), axis=1), 2.0)


def test_rescaled_edge_converges():
    frame = fixtures.figure_eight_field_frame()
    u = frame.field.sample(4096)
    xmax = frame.base.max_norm(4096)
    for t in (1e-1, 1e-3):
        dev = np.linalg.norm(rescaled_edge(frame, t).sample(4096) - u, axis=1).max()
        assert dev <= t * xmax + 1e-9
    assert np.linalg.norm(rescaled_edge(frame, 1e-3).sample(4096) - u, axis=1).max() < 1e-2


def test_projection_of_unit_curve_is_identity():
    c = ClosedCurve3.circle()
    assert np.allclose(spherical_projection(c).sample(512), c.sample(512))


def test_normalized_edge_converges_in_c1():
    frame = fixtures.trefoil_flip_frame()
    d2 = []
    for k in (1, 2, 3, 4):
        z = spherical_projection(rescaled_edge(frame, 10.0 ** -k), frame.tol, frame.grid_n)
        d2.append(sum(d1_d2(z, frame.field, frame.grid_n)))
    assert all(b < a for a, b in zip(d2, d2[1:]))


def test_frame_distance_examples():
    frame = fixtures.trefoil_flip_frame()
    v = np.array([0.3, -0.4, 0.0])
    moved = RibbonFrame(frame.base.translated(v), frame.field, frame.grid_n)
    assert np.isclose(frame_distance(frame, moved), 0.5)
    th = 0.01
    rot = np.array([[np.cos(th), -np.sin(th), 0], [np.sin(th), np.cos(th), 0], [0, 0, 1]])
    d = frame_distance(frame, frame.with_field(frame.field.rotated(rot)))
    max_du = float(np.linalg.norm(frame.samples.du, axis=1).max())
    assert 0 < d <= 0.02 * (1 + max_du)


def test_validation_examples():
    assert not validate_frame(fixtures.constant_field_frame()).regular_u
    # equatorial circle base, field a tilted great circle: no double points
    field = SphericalCurve(ClosedCurve3([0, 0, 0], [[1, 0, 0]], [[0, 0.6, 0.8]]))
    rep = validate_frame(RibbonFrame(ClosedCurve3.circle(), field, 1024))
    assert rep.ok and rep.double_points == 0


def test_warp_examples():
    c = ClosedCurve3.circle()
    same = reparameterize(c, lambda s: s, n=256)
    assert np.allclose(same.sample(256), c.sample(256))
    shifted = reparameterize(c, lambda s: s + 0.25, n=256)
    assert np.allclose(shifted.eval(0.0), c.eval(0.25))
    ease = reparameterize(c, lambda s: s + 0.1 * np.sin(2 * np.pi * s) ** 3 / (2 * np.pi), n=4096)
    pts = ease.sample(8192)
    # every warped point lies on the circle, and the warped samples cover it
    assert np.abs(np.linalg.norm(pts, axis=1) - 1.0).max() < 1e-6 and np.abs(pts[:, 2]).max() < 1e-6
    assert hausdorff(pts, c.sample(8192)) < 2 * np.pi / 8192


def test_arclength_examples():
    c = ClosedCurve3.circle()
    assert np.allclose(arclength_normalize(c, 1024).sample(1024), c.sample(1024), atol=1e-9)
    ellipse = ClosedCurve3([0, 0, 0], [[2, 0, 0]], [[0, 1, 0]])
    lo, hi = arclength_normalize(ellipse, 2048).speed_range(2048)
    assert hi / lo <= 1.01


# intersect

def test_great_circle_has_no_double_points():
    assert sphere_double_points(SphericalCurve(ClosedCurve3.circle())) == []


def test_constant_field_has_no_widths():
    assert crossing_widths(fixtures.constant_field_frame(grid_n=1024)) == []


def test_widths_unique():
    from ribbonknots.intersect import width_residual

    frame = fixtures.two_point_frame()
    for r in crossing_widths(frame):
        for dR in (-0.1, 0.1):
            assert width_residual(frame, r.s, r.s_bar, r.width + dR) > frame.tol.residual_tol


def test_trefoil_flip_stable_at_one_and_a_half_rstar():
    frame = fixtures.trefoil_flip_frame()
    r = stabilization_width(frame)
    assert 0 < r < np.inf
    assert edge_embedded(frame, 1.5 * r).embedded
    assert edge_embedded(frame, 0.0).embedded


def test_constructed_frames_have_no_goalposts(trefoil_frame):
    assert detect_goalposts(trefoil_frame) == []


def test_chord_direction():
    c = ClosedCurve3.circle()
    assert np.allclose(chord_direction(c, 0.0, 0.5), [-1, 0, 0])
    with pytest.raises(CoincidentPoints):
        chord_direction(c, 0.1, 0.1)


def test_identity_matching():
    frame = fixtures.trefoil_flip_frame()
    dps = sphere_double_points(frame.field, frame.tol, frame.grid_n)
    rep = match_double_points(dps, frame.field, frame.tol, frame.grid_n)
    assert rep.bijective and rep.max_parameter_drift == 0.0


# diagram

def test_no_double_points_gives_empty_code():
    assert len(limiting_resolution(fixtures.radial_circle_frame(1024))) == 0
    assert len(gauss_from_spatial(ClosedCurve3.circle(), [0.3, 0.2, 0.9])) == 0


def test_constructed_trefoil_limit(trefoil_frame):
    code = limiting_resolution(trefoil_frame)
    assert code.crossing_count == 3
    assert len(set(code.signs().values())) == 1
    assert [t.over for t in code.tokens] in ([True, False] * 3, [False, True] * 3)


def test_trefoil_curve_from_above_is_alternating():
    code = gauss_from_spatial(fixtures.trefoil_curve(), [0.0, 0.0, 1.0])
    assert code.crossing_count == 3
    assert all(a.over != b.over for a, b in zip(code.tokens, code.tokens[1:] + code.tokens[:1]))


def test_all_resolutions_distinct():
    codes = all_resolutions(fixtures.trefoil_flip_frame())
    assert len({tuple(c.tokens) for c in codes}) == 8


# codes and invariants

def test_code_examples():
    assert len(gauss_to_pd(SignedGaussCode())) == 0
    pd = gauss_to_pd(fixtures.trefoil_code())
    assert sorted(v for x in pd.crossings for v in x) == sorted(list(range(1, 7)) * 2)
    kink = SignedGaussCode.parse("O1+ U1+ " + fixtures.TREFOIL_CODE.replace("1", "4"))
    assert reidemeister_reduce(kink).crossing_count == 3
    doubled = SignedGaussCode.parse("O1+ O2- O3+ O4- U4- U3+ U2- U1+")
    assert reidemeister_reduce(doubled).crossing_count == 0


def test_bracket_examples():
    assert kauffman_bracket(gauss_to_pd(SignedGaussCode())) == 1
    bracket = kauffman_bracket(gauss_to_pd(fixtures.trefoil_code()))
    assert bracket == LaurentPoly({-7: 1, -3: -1, 5: -1})
    # without the <O> = 1 normalization the state sum has four terms
    assert len((bracket * LaurentPoly({2: -1, -2: -1})).coeffs) == 4
    assert len(jones(gauss_to_pd(fixtures.trefoil_code())).coeffs) == 3


def test_profile_examples():
    p = profile(SignedGaussCode())
    assert (p.crossing_count_reduced, p.determinant, p.jones, p.writhe) == (0, 1, LaurentPoly.one(), 0)
    curl = profile(SignedGaussCode.parse("O1- U1-"))
    assert same_knot_type(p, curl) is Comparison.INDISTINGUISHABLE


# constructor

def test_empty_diagram_base_is_great_circle():
    d = hamiltonian_arc_check(SignedGaussCode())
    x = build_base(UNKNOT, d, SphericalCurve(ClosedCurve3.circle()), 1024)
    pts = x.sample(1024)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-6)
    assert np.allclose(pts[:, 1], 0.0, atol=1e-9)


def test_empty_construction_unknotted_at_every_width():
    frame, _ = construct(UNKNOT, SignedGaussCode(), grid_n=1024)
    for R in (0.5, 2.0, 20.0):
        code = gauss_from_spatial(outer_edge(frame, R), [0.1, 0.2, 0.97], frame.grid_n)
        assert profile(code).determinant == 1 and profile(code).jones == 1
