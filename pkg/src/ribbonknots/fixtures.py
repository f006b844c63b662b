"""Hand-built frames and codes used by the tests, the CLI and the docs."""

from __future__ import annotations

import math

import numpy as np

from .codes import SignedGaussCode
from .curves import ClosedCurve3, RibbonFrame, SphericalCurve, ToleranceSet

TREFOIL_CODE = "O1+ U2+ O3+ U1+ O2+ U3+"
FIGURE_EIGHT_CODE = "O1+ U2- O3- U1+ O4+ U3- O2- U4+"
GRANNY_CODE = "O1+ U2+ O3+ U1+ O2+ U3+ O4+ U5+ O6+ U4+ O5+ U6+"


def trefoil_code() -> SignedGaussCode:
    return SignedGaussCode.parse(TREFOIL_CODE)


def figure_eight_code() -> SignedGaussCode:
    return SignedGaussCode.parse(FIGURE_EIGHT_CODE)


def granny_code() -> SignedGaussCode:
    return SignedGaussCode.parse(GRANNY_CODE)


def gerono_generator(a: float = 0.8, b: float = 0.5, height: float = 1.0) -> ClosedCurve3:
    """Figure-eight ``(a sin 2 pi s, b sin 4 pi s, height)``, self-crossing at s = 0 and 1/2."""
    return ClosedCurve3([0.0, 0.0, height], np.zeros((2, 3)), [[a, 0.0, 0.0], [0.0, b, 0.0]])


def goalpost_frame(grid_n: int = 4096) -> RibbonFrame:
    """x(0) = 0, x(1/2) = (1, 0, 0) and u(0) = u(1/2) = (0, 0, 1): a goal post."""
    base = ClosedCurve3([0.5, 0.0, 0.0], [[-0.5, 0.0, 0.0]], [[0.0, 0.5, 0.0]])
    return RibbonFrame(base, SphericalCurve(gerono_generator()), grid_n)


def figure_eight_field_frame(grid_n: int = 4096) -> RibbonFrame:
    """Same field as the goal-post fixture, base tilted so the chord is not orthogonal."""
    base = ClosedCurve3([0.5, 0.0, 0.0], [[-0.5, 0.0, 0.3]], [[0.0, 0.5, 0.0]])
    return RibbonFrame(base, SphericalCurve(gerono_generator()), grid_n)


def trefoil_curve(scale: float = 1.0 / 3.0) -> ClosedCurve3:
    """``(sin t + 2 sin 2t, cos t - 2 cos 2t, -sin 3t)`` scaled; a trefoil knot."""
    return ClosedCurve3([0.0, 0.0, 0.0],
                        [[0.0, scale, 0.0], [0.0, -2 * scale, 0.0], [0.0, 0.0, 0.0]],
                        [[scale, 0.0, 0.0], [2 * scale, 0.0, 0.0], [0.0, 0.0, -scale]])


def trefoil_flip_frame(grid_n: int = 4096, height: float = 0.5) -> RibbonFrame:
    """Trefoil base; the field is the reflected planar trefoil shadow lifted
    to the upper hemisphere, so ``u`` has three double points."""
    base = trefoil_curve()
    flip = np.array([1.0, -1.0, 0.0])
    gen = ClosedCurve3([0.0, 0.0, height], base.cos * flip, base.sin * flip)
    return RibbonFrame(base, SphericalCurve(gen), grid_n)


def radial_circle_frame(grid_n: int = 4096) -> RibbonFrame:
    """Unit circle with the outward radial field: embedded at every width."""
    base = ClosedCurve3.circle()
    return RibbonFrame(base, SphericalCurve(ClosedCurve3.circle()), grid_n)


def two_point_frame(grid_n: int = 4096) -> RibbonFrame:
    """x(0) = 0, x(1/2) = (1, 0, 0), u(0) = (cos 60, sin 60, 0), u(1/2) = (-cos 60, sin 60, 0).

    The rays from the two base points meet at width 1 / (2 cos 60) = 1.  The
    ``sin 4 pi s`` terms vanish at both parameters and keep that crossing
    isolated; without them every pair (s, 1/2 - s) meets at width 1.
    """
    c, s = math.cos(math.pi / 3), math.sin(math.pi / 3)
    base = ClosedCurve3([0.5, 0.0, 0.0], [[-0.5, 0.0, 0.0]], [[0.0, 0.0, 0.5], [0.0, 0.0, 0.1]])
    gen = ClosedCurve3([0.0, s, 0.0], [[c, 0.0, 0.0]], [[0.0, 0.0, c], [0.0, 0.2, 0.0]])
    return RibbonFrame(base, SphericalCurve(gen), grid_n)


def constant_field_frame(u0=(0.0, 0.0, 1.0), grid_n: int = 4096) -> RibbonFrame:
    return RibbonFrame(trefoil_curve(), SphericalCurve(ClosedCurve3.constant_curve(u0)), grid_n)


def tangency_field(angle: float = 1e-4, b: float = 0.5) -> SphericalCurve:
    """Figure-eight field whose single crossing has an angle of about ``angle``."""
    return SphericalCurve(gerono_generator(a=angle * b, b=b))


def nongeneric_projection_curve() -> ClosedCurve3:
    """``(cos t, sin t, 0.4 sin 3t + 0.2 cos t)``.

    The tangents at t = 0 and t = pi are parallel, so projecting along the
    chord between those two points, :data:`NONGENERIC_DIRECTION`, produces a
    tangential self-contact in the shadow.
    """
    return ClosedCurve3([0.0, 0.0, 0.0], [[1.0, 0.0, 0.2], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
                        [[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.4]])


NONGENERIC_DIRECTION = tuple(np.array([1.0, 0.0, 0.2]) / math.hypot(1.0, 0.2))


def random_frame(rng: np.random.Generator, degree: int = 6, grid_n: int = 1024,
                 tol: ToleranceSet | None = None) -> RibbonFrame:
    """Random smooth frame with coefficients decaying like ``1/k^2``."""
    k = np.arange(1, degree + 1)[:, None]

    def coeffs():
        return rng.normal(size=(degree, 3)) / k ** 2

    base = ClosedCurve3(rng.normal(size=3) * 0.1, coeffs(), coeffs())
    base = base.scaled(1.0 / base.max_norm(grid_n))
    gen = ClosedCurve3(rng.normal(size=3), coeffs(), coeffs())
    return RibbonFrame(base, SphericalCurve(gen), grid_n, tol or ToleranceSet())


def bundled_frames(grid_n: int = 4096) -> dict[str, RibbonFrame]:
    """Goal-post-free fixture frames, keyed by name."""
    return {
        "radial-circle": radial_circle_frame(grid_n),
        "figure-eight-field": figure_eight_field_frame(grid_n),
        "trefoil-flip": trefoil_flip_frame(grid_n),
        "two-point": two_point_frame(grid_n),
    }
