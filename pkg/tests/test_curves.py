import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ribbonknots import fixtures
from ribbonknots.curves import (ClosedCurve3, RibbonFrame, SphericalCurve, ToleranceSet, arclength_normalize,
                                d1_d2, frame_distance, hausdorff, outer_edge, reparameterize, rescaled_edge,
                                spherical_projection, validate_frame)
from ribbonknots.errors import (GridMismatch, IrregularCurve, NonMonotoneWarp, ValidationError,
                                VanishingGenerator)


def _random_curve(seed, degree=5):
    rng = np.random.default_rng(seed)
    return ClosedCurve3(rng.normal(size=3), rng.normal(size=(degree, 3)), rng.normal(size=(degree, 3)))


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_fit_roundtrip(seed):
    c = _random_curve(seed)
    fitted = ClosedCurve3.fit(c.sample(256), tol=1e-12)
    assert fitted.degree == c.degree
    assert np.allclose(fitted.cos, c.cos) and np.allclose(fitted.sin, c.sin)


def test_sample_matches_eval():
    c = _random_curve(1)
    s = np.arange(64) / 64
    for d in (0, 1, 2):
        assert np.allclose(c.sample(64, d), c.eval(s, d))


def test_derivative_finite_difference():
    c = _random_curve(2)
    s, h = 0.37, 1e-6
    fd = (c.eval(s + h) - c.eval(s - h)) / (2 * h)
    assert np.allclose(fd, c.eval(s, 1), atol=1e-5)


def test_circle_geometry():
    c = ClosedCurve3.circle(2.0)
    assert math.isclose(c.length(), 4 * math.pi, rel_tol=1e-12)
    assert math.isclose(c.max_norm(), 2.0)
    assert np.allclose(c.shifted(0.25).eval(0.0), c.eval(0.25))


def test_json_roundtrip():
    frame = fixtures.trefoil_flip_frame(1024)
    back = RibbonFrame.loads(frame.dumps())
    assert frame_distance(frame, back) == 0.0
    assert back.grid_n == 1024 and back.tol == frame.tol


def test_frame_grid_validation():
    frame = fixtures.radial_circle_frame(1024)
    with pytest.raises(ValidationError):
        frame.with_grid(1000)
    with pytest.raises(GridMismatch):
        frame_distance(frame, frame.with_grid(2048))


def test_tolerance_validation():
    with pytest.raises(ValidationError):
        ToleranceSet(eq_tol=0.0)
    with pytest.raises(ValidationError):
        ToleranceSet(sep_lambda=0.3)
    assert ToleranceSet.from_json(ToleranceSet().to_json()) == ToleranceSet()


def test_vanishing_generator():
    with pytest.raises(VanishingGenerator):
        # a segment through the origin
        SphericalCurve(ClosedCurve3([0.0, 0.0, 0.0], [[1.0, 0.0, 0.0]], [[1.0, 0.0, 0.0]]))
    with pytest.raises(VanishingGenerator):
        spherical_projection(ClosedCurve3([1.0, 0.0, 0.0], [[1.0, 0.0, 0.0]], [[0.0, 1.0, 0.0]]))


def test_spherical_curve_unit_and_tangent():
    u = SphericalCurve(fixtures.gerono_generator())
    vals = u.sample(512)
    assert np.allclose(np.linalg.norm(vals, axis=1), 1.0)
    assert np.allclose(np.sum(vals * u.sample(512, 1), axis=1), 0.0, atol=1e-12)
    s, h = 0.21, 1e-6
    assert np.allclose((u.eval(s + h) - u.eval(s - h)) / (2 * h), u.eval(s, 1), atol=1e-6)


def test_outer_and_rescaled_edges():
    frame = fixtures.trefoil_flip_frame(1024)
    R = 3.0
    y = outer_edge(frame, R).sample(1024)
    z = rescaled_edge(frame, 1 / R).sample(1024)
    assert np.allclose(y / R, z, atol=1e-9)
    assert outer_edge(frame, 0.0) is frame.base
    with pytest.raises(ValueError):
        outer_edge(frame, -1.0)
    with pytest.raises(ValueError):
        rescaled_edge(frame, 0.0)


def test_reparameterize_rejects_nonmonotone():
    c = ClosedCurve3.circle()
    with pytest.raises(NonMonotoneWarp):
        reparameterize(c, lambda s: s - 0.5 * np.sin(2 * np.pi * s), n=256)
    warped = reparameterize(c, lambda s: s + 0.05 * np.sin(2 * np.pi * s), n=1024)
    assert hausdorff(warped.sample(1024), c.sample(1024)) < 1e-2


def test_arclength_normalize():
    c = reparameterize(ClosedCurve3.circle(), lambda s: s + 0.1 * np.sin(2 * np.pi * s), n=1024)
    out = arclength_normalize(c, n=1024)
    lo, hi = out.speed_range(1024)
    assert hi / lo <= 1.01
    assert math.isclose(out.length(), 2 * math.pi, rel_tol=1e-6)
    with pytest.raises(IrregularCurve):
        # a doubly covered segment stops at its ends
        arclength_normalize(ClosedCurve3([0, 0, 0], [[1, 0, 0]], [[0, 0, 0]]))


def test_hausdorff_and_d1d2():
    a = ClosedCurve3.circle()
    b = a.translated([0.1, 0.0, 0.0])
    assert math.isclose(hausdorff(a.sample(4096), b.sample(4096)), 0.1, rel_tol=1e-3)
    d1, d2 = d1_d2(a, b, 256)
    assert math.isclose(d1, 0.1) and d2 < 1e-12


@pytest.mark.parametrize("name", sorted(fixtures.bundled_frames(1024)))
def test_bundled_frames_validate(name):
    rep = validate_frame(fixtures.bundled_frames(4096)[name])
    assert rep.ok, rep.to_json()


def test_goalpost_fixture_fails_validation():
    rep = validate_frame(fixtures.goalpost_frame())
    assert not rep.ok and not rep.no_goalposts
    assert rep.double_points == 1
    assert rep.to_json()["ok"] is False


def test_frame_distance_is_a_metric():
    rng = np.random.default_rng(9)
    frames = [fixtures.random_frame(rng, grid_n=512) for _ in range(3)]
    a, b, c = frames
    assert frame_distance(a, a) == 0.0
    assert frame_distance(a, b) == frame_distance(b, a)
    assert frame_distance(a, c) <= frame_distance(a, b) + frame_distance(b, c) + 1e-12
