import math

import numpy as np
import pytest

from ribbonknots import fixtures
from ribbonknots.codes import SignedGaussCode, braid_closure_code
from ribbonknots.constructor import (BALL_CENTER, BALL_RADIUS, CAP_ANGLE, UNKNOT, ArcDiagram, build_base,
                                     build_field, construct, hamiltonian_arc_check)
from ribbonknots.curves import outer_edge
from ribbonknots.diagram import RADIAL, gauss_from_spatial, limiting_choice, planar_code
from ribbonknots.errors import NoArc, NonRealizableCode
from ribbonknots.intersect import edge_embedded, sphere_double_points, stabilization_width
from ribbonknots.invariants import Comparison, profile, same_knot_type


@pytest.fixture(scope="module")
def trefoil_build():
    return construct(UNKNOT, fixtures.trefoil_code())


def test_arc_of_trefoil():
    d = hamiltonian_arc_check(fixtures.trefoil_code())
    assert d.k == 3 and d.arc_end == 3
    assert d.omega == (1, -1, 1) and d.tau == (1, 2, 3)
    assert all(d.sign(j) == 1 for j in (1, 2, 3))


def test_arc_of_figure_eight():
    d = hamiltonian_arc_check(fixtures.figure_eight_code())
    assert str(d.code) == "U1- O2- U3+ O4+ U2- O1- U4+ O3+"
    assert d.omega == (-1, 1, -1, 1) and d.tau == (2, 1, 4, 3)
    assert d.to_json()["arc_end"] == 4


def test_arc_of_empty_code():
    d = hamiltonian_arc_check(SignedGaussCode())
    assert d.k == 0 and d.omega == ()


def test_no_arc():
    with pytest.raises(NoArc):
        hamiltonian_arc_check(braid_closure_code([1, -2] * 4))


def test_arc_diagram_validation():
    code = fixtures.trefoil_code()
    with pytest.raises(ValueError):
        ArcDiagram(code, 2, (1, 1), (1, 2))


@pytest.mark.parametrize("code,north", [(fixtures.trefoil_code(), 2), (fixtures.figure_eight_code(), 2)])
def test_build_field_caps(code, north):
    d = hamiltonian_arc_check(code)
    u = build_field(d, 4096)
    dps = sphere_double_points(u, grid_n=4096)
    assert len(dps) == d.k
    assert sum(p.point[2] > 0 for p in dps) == north
    for p in dps:
        assert math.acos(abs(p.point[2])) < CAP_ANGLE
    assert max(p.s for p in dps) < min(p.s_bar for p in dps)


def test_empty_diagram_field():
    u = build_field(hamiltonian_arc_check(SignedGaussCode()), 1024)
    assert sphere_double_points(u, grid_n=1024) == []


def test_build_base_margins():
    d = hamiltonian_arc_check(fixtures.trefoil_code())
    u = build_field(d, 4096)
    x = build_base(UNKNOT, d, u, 4096)
    dps = sphere_double_points(u, grid_n=4096)
    ux = np.array([u.eval(p.s) @ x.eval(p.s) for p in dps])
    ux_bar = np.array([u.eval(p.s_bar) @ x.eval(p.s_bar) for p in dps])
    north = np.array([p.point[2] > 0 for p in dps])
    # the arc visit sits at the pole its crossing was pushed to: u.x ~ +1 over, -1 under
    assert np.all(np.abs(ux) > 0.9) and np.all(np.abs(ux_bar) > 0.9)
    assert np.array_equal(ux > 0, north) and np.array_equal(ux_bar < 0, north)
    assert profile(planar_code(x)).determinant == 1


def test_construct_trefoil(trefoil_build):
    frame, rep = trefoil_build
    assert rep.validation["ok"]
    assert min(abs(m) for m in rep.margins) > 1.5
    assert rep.limiting_profile == rep.target_profile
    assert limiting_choice(frame) == tuple(o > 0 for o in rep.diagram.omega)
    assert rep.to_json()["diagram"]["omega"] == [1, -1, 1]


def test_construct_unknot_diagram():
    frame, rep = construct(UNKNOT, SignedGaussCode(), grid_n=1024)
    assert rep.margins == ()
    assert stabilization_width(frame) == 0.0
    assert edge_embedded(frame, 5.0).embedded


def test_construct_rejects_nonplanar():
    with pytest.raises(NonRealizableCode):
        construct(UNKNOT, SignedGaussCode.parse("O1+ O2+ U1+ U2+"))


def test_knotted_base_stays_in_ball():
    frame, rep = construct(fixtures.trefoil_curve(), fixtures.figure_eight_code())
    assert rep.base_profile == rep.k1_profile
    X = frame.base.sample(frame.grid_n)
    far = np.linalg.norm(X - BALL_CENTER, axis=1) > BALL_RADIUS
    # outside the ball the base is the unit great circle, up to the smoothing of the fit
    assert np.allclose(np.linalg.norm(X[far], axis=1), 1.0, atol=5e-3)
    assert np.allclose(X[far, 1], 0.0, atol=5e-3)


@pytest.mark.slow
def test_stabilization(trefoil_build):
    frame, rep = trefoil_build
    r_star = float(stabilization_width(frame))
    assert r_star > 0
    for f in (2.0, 4.0, 8.0):
        R = f * r_star
        assert edge_embedded(frame, R).embedded
        code = gauss_from_spatial(outer_edge(frame, R), RADIAL, frame.grid_n)
        assert same_knot_type(profile(code), profile(fixtures.trefoil_code())) is Comparison.INDISTINGUISHABLE
    far = gauss_from_spatial(outer_edge(frame, 8.0 * r_star), RADIAL, frame.grid_n)
    assert far.canonical_text() == rep.limiting_code
