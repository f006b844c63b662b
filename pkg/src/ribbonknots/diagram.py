"""Knot diagrams read off curves: the limiting resolution of a ribbon frame and
signed Gauss codes of spatial curves under planar or radial projection.

Handedness convention: a crossing is positive when
``det[over tangent, under tangent, n] > 0`` where ``n`` points toward the
viewer (the outward normal for radial projection, the projection direction
for planar projection).

The combinatorial half of the module lives in :mod:`ribbonknots.codes` and is
re-exported here.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .codes import (  # noqa: F401  (re-exported)
    PDCode,
    SignedGaussCode,
    Token,
    gauss_to_pd,
    is_realizable,
    parse_pd,
    reidemeister_reduce,
    same_diagram,
)
from .curves import DEFAULT_GRID_N, ClosedCurve3, RibbonFrame, SphericalCurve, ToleranceSet
from .errors import GoalPostObstruction, NonGenericProjection
from .intersect import DoublePoint, coincidences, sphere_double_points

RADIAL = "radial"

ResolutionChoice = tuple[bool, ...]


def _sign(v: float) -> int:
    return 1 if v > 0 else -1


def _code_from_crossings(crossings: Sequence[tuple[float, float, bool, int]]) -> SignedGaussCode:
    """Tokens from ``(s, s_bar, s_is_over, sign)`` tuples, in traversal order from s = 0."""
    visits = []
    for label, (s, sb, s_over, sign) in enumerate(crossings, start=1):
        visits.append((s % 1.0, Token(label, s_over, sign)))
        visits.append((sb % 1.0, Token(label, not s_over, sign)))
    visits.sort(key=lambda v: v[0])
    return SignedGaussCode(tuple(t for _, t in visits)).relabeled()


def radial_margins(frame: RibbonFrame, dps: Sequence[DoublePoint]) -> list[float]:
    """``u(s).x(s) - u(s_bar).x(s_bar)`` per double point.

    This is the first-order term of ``|z_t(s)| - |z_t(s_bar)|`` in ``t``; its
    sign decides which strand of ``z_t`` is farther from the origin for every
    ``t`` below roughly ``margin / (2 max|x|^2)``.
    """
    x, u = frame.base, frame.field
    return [float(u.eval(d.s) @ x.eval(d.s) - u.eval(d.s_bar) @ x.eval(d.s_bar)) for d in dps]


def limiting_choice(frame: RibbonFrame, dps: Sequence[DoublePoint] | None = None) -> ResolutionChoice:
    if dps is None:
        dps = sphere_double_points(frame.field, frame.tol, frame.grid_n)
    bits = []
    for d, m in zip(dps, radial_margins(frame, dps)):
        if abs(m) < frame.tol.eq_tol:
            raise GoalPostObstruction(f"radial margin {m:.2e} at ({d.s:.6f}, {d.s_bar:.6f}) is below eq_tol")
        bits.append(m > 0)
    return tuple(bits)


def resolve(dps: Sequence[DoublePoint], choice: Sequence[bool],
            frame: RibbonFrame | SphericalCurve) -> SignedGaussCode:
    """Code of the spherical curve with the prescribed over/under choices.

    ``choice[i]`` is True when the strand through ``dps[i].s`` is over.
    ``frame`` may also be the spherical curve itself.
    """
    if len(choice) != len(dps):
        raise ValueError("one choice per double point is required")
    u = frame.field if isinstance(frame, RibbonFrame) else frame
    rows = []
    for d, s_over in zip(dps, choice):
        t_s, t_sb = u.eval(d.s, 1), u.eval(d.s_bar, 1)
        t_o, t_u = (t_s, t_sb) if s_over else (t_sb, t_s)
        sign = _sign(float(np.linalg.det(np.stack([t_o, t_u, u.eval(d.s)]))))
        rows.append((d.s, d.s_bar, bool(s_over), sign))
    return _code_from_crossings(rows)


def limiting_resolution(frame: RibbonFrame) -> SignedGaussCode:
    """Resolution of ``u`` that the rescaled edges ``z_t`` converge to as ``t -> 0``.

    Strand ``s`` is over at a double point when ``u(s).x(s) > u(s_bar).x(s_bar)``.
    """
    dps = sphere_double_points(frame.field, frame.tol, frame.grid_n)
    return resolve(dps, limiting_choice(frame, dps), frame)


def all_resolutions(frame: RibbonFrame) -> list[SignedGaussCode]:
    dps = sphere_double_points(frame.field, frame.tol, frame.grid_n)
    k = len(dps)
    return [resolve(dps, tuple(bool((m >> i) & 1) for i in range(k)), frame) for m in range(1 << k)]


def gauss_from_spatial(curve: ClosedCurve3, direction=RADIAL, grid_n: int = DEFAULT_GRID_N,
                       tol: ToleranceSet | None = None) -> SignedGaussCode:
    """Signed Gauss code of a projection of a space curve.

    Parameters
    ----------
    curve : ClosedCurve3
        Embedded space curve.
    direction : 3-vector or ``RADIAL``
        Planar projection along ``direction`` (viewer at ``+direction``), or
        radial projection to the unit sphere (viewer outside).

    Raises
    ------
    NonGenericProjection
        A crossing is tangential, two crossings share an image, a candidate
        fails to refine, or the two strands of a crossing touch in space.
    """
    tol = tol or ToleranceSet()
    if isinstance(direction, str):
        if direction != RADIAL:
            raise ValueError(f"unknown projection {direction!r}")
        g = curve.sample(grid_n)
        r = np.linalg.norm(g, axis=1)
        if r.min() < tol.eq_tol:
            raise NonGenericProjection("curve passes through the projection centre")
        P = g / r[:, None]

        def f(s):
            v = curve.eval(s)
            return v / np.linalg.norm(v)

        def df(s):
            v, dv = curve.eval(s), curve.eval(s, 1)
            nv = np.linalg.norm(v)
            vh = v / nv
            return (dv - (vh @ dv) * vh) / nv

        depth = lambda s: float(np.linalg.norm(curve.eval(s)))  # noqa: E731
        normal = lambda s: f(s)  # noqa: E731
    else:
        d = np.asarray(direction, dtype=float)
        d = d / np.linalg.norm(d)
        helper = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        e1 = np.cross(d, helper)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(d, e1)
        E = np.stack([e1, e2])
        g = curve.sample(grid_n) @ E.T
        center = 0.5 * (g.max(axis=0) + g.min(axis=0))
        scale = float(np.abs(g - center).max()) or 1.0
        lifted = np.column_stack([(g - center) / scale, np.ones(len(g))])
        P = lifted / np.linalg.norm(lifted, axis=1, keepdims=True)
        f = lambda s: E @ curve.eval(s)  # noqa: E731
        df = lambda s: E @ curve.eval(s, 1)  # noqa: E731
        depth = lambda s: float(d @ curve.eval(s))  # noqa: E731
        normal = lambda s: d  # noqa: E731

    # adjacent samples are excluded; refinement rejects s ~ s_bar
    sep = 4.0 / grid_n
    out = coincidences(f, df, P, 2, sep, tol.eq_tol, tol.angle_tol,
                       error=NonGenericProjection, triple_error=NonGenericProjection)
    rows = []
    for s, sb, _, _ in out:
        gap = depth(s) - depth(sb)
        if abs(gap) < tol.eq_tol:
            raise NonGenericProjection(f"strands at ({s:.6f}, {sb:.6f}) meet in space")
        s_over = gap > 0
        t_s, t_sb = curve.eval(s, 1), curve.eval(sb, 1)
        t_o, t_u = (t_s, t_sb) if s_over else (t_sb, t_s)
        sign = _sign(float(np.linalg.det(np.stack([t_o, t_u, normal(s)]))))
        rows.append((s, sb, s_over, sign))
    return _code_from_crossings(rows)


def random_direction(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def planar_code(curve: ClosedCurve3, grid_n: int = DEFAULT_GRID_N, tol: ToleranceSet | None = None,
                seed: int = 0, attempts: int = 8) -> SignedGaussCode:
    """Planar-projection code, retrying with random directions if the first
    choice is not generic."""
    rng = np.random.default_rng(seed)
    direction = np.array([0.0, 0.0, 1.0])
    last: Exception | None = None
    for _ in range(attempts):
        try:
            return gauss_from_spatial(curve, direction, grid_n, tol)
        except NonGenericProjection as exc:
            last = exc
            direction = random_direction(rng)
    raise NonGenericProjection(f"no generic direction found in {attempts} attempts: {last}")


__all__ = [
    "RADIAL", "ResolutionChoice", "PDCode", "SignedGaussCode", "Token", "all_resolutions",
    "gauss_from_spatial", "gauss_to_pd", "is_realizable", "limiting_choice", "limiting_resolution",
    "parse_pd", "planar_code", "radial_margins", "reidemeister_reduce", "resolve", "same_diagram",
]
