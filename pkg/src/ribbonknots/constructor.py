"""Ribbon frames with a prescribed base knot and a prescribed limiting knot.

Pipeline for a target diagram with a Hamiltonian arc ``A``:

1. The arc is straightened onto the slit ``[-1, 1]`` of the complex plane.
   The complementary arc ``B`` crosses the slit once per crossing and is
   otherwise a chain of disjoint arcs in the slit plane.  Under the inverse
   Joukowski map the slit plane becomes the unit disk, and those arcs are
   drawn as hyperbolic geodesics, which are disjoint exactly when their
   endpoints do not interleave.
2. The plane is wrapped onto the sphere by stereographic projection from
   ``(0, -1, 0)``, which sends the slit to the equator.  A latitude shear
   lifts crossings whose arc strand is over to the north and the others to
   the south; a monotone latitude push then moves them into the polar caps.
3. The spherical polyline is reparameterized and Fourier fitted; the
   double points are re-detected and compared with the plan.
4. The base curve follows the great circle through the poles, warped so the
   arc's parameters sit in the north cap and the complementary visits in the
   south cap.  A general base knot is spliced in near ``(1, 0, 0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from .codes import SignedGaussCode, is_realizable
from .curves import DEFAULT_GRID_N, ClosedCurve3, RibbonFrame, SphericalCurve, ToleranceSet, validate_frame
from .errors import BallTooSmall, LayoutFailed, NoArc, NonRealizableCode, RibbonError
from .intersect import DoublePoint, sphere_double_points

CAP_ANGLE = math.pi / 12
UNKNOT = "unknot"

# polar angle of the planned crossings, and half-width of the base windows
_U_POLAR = math.radians(9.0)
_X_POLAR = math.radians(6.0)
# knotted ball for a general base knot
BALL_CENTER = np.array([1.0, 0.0, 0.0])
BALL_RADIUS = 0.1


# ---------------------------------------------------------------------------
# Hamiltonian arc


@dataclass(frozen=True)
class ArcDiagram:
    """Code rotated so that its first ``arc_end`` tokens form the arc ``A``.

    Labels are renumbered so ``A`` meets them in the order ``1..k``;
    ``omega[j-1]`` is +1 when ``A`` is the over strand at label ``j`` and
    ``tau`` lists the labels in the order of their second visits.
    """

    code: SignedGaussCode
    arc_end: int
    omega: tuple[int, ...]
    tau: tuple[int, ...]

    def __post_init__(self):
        k = self.code.crossing_count
        if self.arc_end != k or sorted(t.label for t in self.code.tokens[:k]) != list(range(1, k + 1)):
            raise ValueError("the first arc_end tokens must visit every label once")
        if sorted(self.tau) != list(range(1, k + 1)) or len(self.omega) != k:
            raise ValueError("tau must be a permutation and omega must have one sign per label")

    @property
    def k(self) -> int:
        return self.arc_end

    def sign(self, label: int) -> int:
        return self.code.signs()[label]

    def to_json(self) -> dict:
        return {"code": str(self.code), "arc_end": self.arc_end, "omega": list(self.omega),
                "tau": list(self.tau)}


def hamiltonian_arc_check(code: SignedGaussCode) -> ArcDiagram:
    """First rotation of ``code`` whose opening half visits every crossing once.

    Raises
    ------
    NoArc
        No rotation has that property; a different diagram of the knot is needed.
    """
    n = len(code.tokens)
    k = n // 2
    if k == 0:
        return ArcDiagram(code, 0, (), ())
    for r in range(n):
        rot = code.rotated(r)
        if len({t.label for t in rot.tokens[:k]}) == k:
            rot = rot.relabeled()
            omega = tuple(1 if t.over else -1 for t in rot.tokens[:k])
            tau = tuple(t.label for t in rot.tokens[k:])
            return ArcDiagram(rot, k, omega, tau)
    raise NoArc(f"no rotation of {code} traverses every crossing before revisiting one")


# ---------------------------------------------------------------------------
# Spherical layout


@dataclass(frozen=True)
class LayoutPlan:
    """Planned field: a closed spherical polyline starting at the arc.

    ``path`` is traversed in order; ``arc_index[j-1]`` and ``return_index[j-1]``
    are the path indices of the two visits to label ``j``.
    """

    path: np.ndarray
    arc_index: tuple[int, ...]
    return_index: tuple[int, ...]
    north_points: np.ndarray
    south_points: np.ndarray
    connector_paths: tuple[np.ndarray, ...] = field(default=())

    @property
    def points(self) -> np.ndarray:
        return self.path[list(self.arc_index)]


def _wrap(a):
    return (np.asarray(a) + np.pi) % (2 * np.pi) - np.pi


def _geodesic(alpha: float, beta: float, m: int) -> np.ndarray:
    """Hyperbolic geodesic of the unit disk from ``e^{i alpha}`` to ``e^{i beta}``."""
    half = float(_wrap(beta - alpha)) / 2
    p, q = np.exp(1j * alpha), np.exp(1j * beta)
    if abs(math.cos(half)) < 1e-9:
        return p + (q - p) * np.linspace(0.0, 1.0, m)
    c = np.exp(1j * (alpha + half)) / math.cos(half)
    r = abs(math.tan(half))
    pa = np.angle(p - c)
    d = float(_wrap(np.angle(q - c) - pa))
    return c + r * np.exp(1j * (pa + d * np.linspace(0.0, 1.0, m)))


def _interleaved(c1: tuple[float, float], c2: tuple[float, float]) -> bool:
    def inside(x, a, b):
        return 0 < (x - a) % (2 * np.pi) < (b - a) % (2 * np.pi)

    a, b = c1
    return inside(c2[0], a, b) != inside(c2[1], a, b)


def _disk_to_sphere(zeta: np.ndarray) -> np.ndarray:
    """Inverse Joukowski ``z = (zeta + 1/zeta) / 2`` followed by inverse
    stereographic projection from ``(0, -1, 0)`` onto the sphere."""
    N = zeta * zeta + 1.0
    D = 2.0 * zeta
    nd = N * np.conj(D)
    den = np.abs(N) ** 2 + np.abs(D) ** 2
    return np.column_stack([2 * nd.real / den, (np.abs(D) ** 2 - np.abs(N) ** 2) / den, 2 * nd.imag / den])


def _bump(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    m = np.abs(t) < 1
    out[m] = np.exp(1.0 - 1.0 / (1.0 - t[m] ** 2))
    return out


def _smootherstep(t):
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (t * (6 * t - 15) + 10)


def _cap_push(P: np.ndarray, lons: np.ndarray, omega: Sequence[int], lift: float,
              polar: float) -> np.ndarray:
    """Shear latitudes near the marked longitudes, then push the lifted band
    into the caps.  Both steps are diffeomorphisms of the sphere."""
    lon = np.arctan2(P[:, 1], P[:, 0])
    lat = np.arcsin(np.clip(P[:, 2], -1.0, 1.0))
    width = 0.45 * np.pi / (len(lons) + 1)
    f = np.zeros_like(lon)
    for lj, w in zip(lons, omega):
        f += w * lift * _bump(_wrap(lon - lj) / width)
    lo, hi = 0.05, 1.25
    c = 1.0 - _smootherstep((np.abs(lat) - lo) / (hi - lo))
    lat1 = lat + f * c
    top = 0.5 * np.pi - polar
    knots = np.array([-0.5 * np.pi, -lift, 0.0, lift, 0.5 * np.pi])
    push = PchipInterpolator(knots, np.array([-0.5 * np.pi, -top, 0.0, top, 0.5 * np.pi]))
    lat2 = push(lat1)
    cl = np.cos(lat2)
    return np.column_stack([cl * np.cos(lon), cl * np.sin(lon), np.sin(lat2)])


def plan_layout(diagram: ArcDiagram, samples: int = 400, lift: float = 0.4,
                polar: float = _U_POLAR) -> LayoutPlan:
    """Spherical polyline realizing ``diagram`` with crossings in the caps.

    Raises
    ------
    LayoutFailed
        The connectors of the straightened diagram interleave, which happens
        only for codes that are not planar.
    """
    k = diagram.k
    if k == 0:
        t = np.linspace(0.0, 2 * np.pi, 4 * samples, endpoint=False)
        path = np.column_stack([np.sin(t), np.zeros_like(t), np.cos(t)])
        return LayoutPlan(path, (), (), np.zeros((0, 3)), np.zeros((0, 3)))
    j = np.arange(1, k + 1)
    a = np.tan(0.25 * np.pi * (-1.0 + 2.0 * j / (k + 1)))
    psi = np.arccos(a)
    lons = np.pi - np.pi * j / (k + 1)
    # the complementary arc crosses the slit upward when sign * omega = +1;
    # the top side of the slit at a is e^{-i psi}, the bottom side e^{+i psi}
    ends: list[tuple[float, float]] = []
    prev = 0.0
    for lab in diagram.tau:
        up = diagram.sign(lab) * diagram.omega[lab - 1] > 0
        arrive, leave = (psi[lab - 1], -psi[lab - 1]) if up else (-psi[lab - 1], psi[lab - 1])
        ends.append((prev, arrive))
        prev = leave
    ends.append((prev, np.pi))
    for i in range(len(ends)):
        for jj in range(i + 1, len(ends)):
            if _interleaved(ends[i], ends[jj]):
                raise LayoutFailed("connectors of the straightened diagram interleave")

    # arc A: slit from -1 to 1, then connectors in the disk
    pieces = []
    t = np.linspace(-1.0, 1.0, samples * (k + 1) + 1)
    t = t[np.min(np.abs(t[:, None] - a[None, :]), axis=1) > 1e-6]
    arc_z = np.concatenate([t, a])
    order = np.argsort(arc_z, kind="stable")
    arc_z = arc_z[order]
    arc_pts = _disk_to_sphere(np.exp(1j * np.arccos(np.clip(arc_z, -1, 1))))
    pos_in_arc = np.argsort(order)[len(t):]
    pieces.append(arc_pts[:-1])
    arc_index = tuple(int(i) for i in pos_in_arc)
    offset = len(arc_pts) - 1
    ret_index: dict[int, int] = {}
    connectors = []
    for i, (u0, u1) in enumerate(ends):
        g = _disk_to_sphere(_geodesic(u0, u1, samples))
        connectors.append(g)
        pieces.append(g[:-1])
        offset += len(g) - 1
        if i < k:
            ret_index[diagram.tau[i]] = offset
    path = np.vstack(pieces)
    path = _cap_push(path, lons, diagram.omega, lift, polar)
    return_index = tuple(ret_index[lab] for lab in range(1, k + 1))
    pts = path[list(arc_index)]
    om = np.array(diagram.omega)
    return LayoutPlan(path, arc_index, return_index, pts[om > 0], pts[om < 0],
                      tuple(_cap_push(c, lons, diagram.omega, lift, polar) for c in connectors))


# ---------------------------------------------------------------------------
# Fitting


def _smooth_fit(samples: np.ndarray, max_degree: int, damping: float | None) -> ClosedCurve3:
    """Fourier fit truncated at ``max_degree`` with Gaussian damping ``exp(-((k-1)/damping)^2)``.

    The fundamental mode is left alone so great circles keep their radius.
    """
    c = ClosedCurve3.fit(samples, tol=0.0, max_degree=max_degree)
    if damping is None:
        return c
    w = np.exp(-(np.arange(c.degree) / damping) ** 2)[:, None]
    return ClosedCurve3(c.constant, c.cos * w, c.sin * w)


def _periodic_resample(path: np.ndarray, knots: np.ndarray, n: int) -> np.ndarray:
    """Periodic cubic spline through ``path`` at parameters ``knots`` in [0, 1), sampled at j/n."""
    s = np.concatenate([knots, [1.0]])
    y = np.vstack([path, path[:1]])
    spline = CubicSpline(s, y, bc_type="periodic")
    return spline(np.arange(n) / n)


def _balanced_parameter(plan_path: np.ndarray, flat_path: np.ndarray | None = None) -> np.ndarray:
    def cum(p):
        d = np.linalg.norm(np.diff(np.vstack([p, p[:1]]), axis=0), axis=1)
        c = np.concatenate([[0.0], np.cumsum(d)])
        return c / c[-1]

    s = cum(plan_path)
    if flat_path is not None:
        s = 0.5 * (s + cum(flat_path))
    return s[:-1]


def _cap_choice(dps: Sequence[DoublePoint]) -> tuple[bool, ...]:
    """Over/under bits implied by the caps: the arc visit is over in the north."""
    return tuple(bool(d.point[2] > 0) for d in dps)


_MIRROR_Y = np.diag([1.0, -1.0, 1.0])


def build_field(diagram: ArcDiagram, grid_n: int = DEFAULT_GRID_N, tol: ToleranceSet | None = None,
                attempts: Sequence[tuple[int, float]] = ((400, 150.0), (800, 300.0), (1500, 600.0))
                ) -> SphericalCurve:
    """Smooth spherical curve realizing ``diagram`` in the polar-cap layout.

    ``u(0)`` is the start of the arc, so the arc visits come first in
    parameter order.  Fits of increasing degree are tried until the
    re-detected double points reproduce the diagram.

    Raises
    ------
    LayoutFailed
        No fit reproduces the diagram, or a crossing leaves its cap.
    """
    from .diagram import resolve

    tol = tol or ToleranceSet()
    plan = plan_layout(diagram)
    s = _balanced_parameter(plan.path)
    smp = _periodic_resample(plan.path, s, grid_n)
    target = diagram.code
    last = "no attempt"
    for degree, damping in attempts:
        degree = min(degree, (grid_n - 1) // 2)
        u = SphericalCurve(_smooth_fit(smp, degree, damping))
        try:
            dps = sphere_double_points(u, tol, grid_n)
        except RibbonError as exc:
            last = str(exc)
            continue
        if len(dps) != diagram.k:
            last = f"{len(dps)} double points re-detected, {diagram.k} planned"
            continue
        polar = [math.acos(min(1.0, abs(float(d.point[2])))) for d in dps]
        if polar and max(polar) >= CAP_ANGLE:
            last = f"a crossing sits {math.degrees(max(polar)):.1f} degrees from its pole"
            continue
        if not all(d.s < d.s_bar for d in dps) or (dps and max(d.s for d in dps) > min(d.s_bar for d in dps)):
            last = "arc visits are not all ahead of the return visits"
            continue
        code = resolve(dps, _cap_choice(dps), u)
        if code.canonical() == target.canonical():
            return u
        mirrored = SphericalCurve(u.generator.transformed(_MIRROR_Y))
        dps_m = sphere_double_points(mirrored, tol, grid_n)
        if resolve(dps_m, _cap_choice(dps_m), mirrored).canonical() == target.canonical():
            return mirrored
        last = f"re-detected code {code} differs from {target}"
    raise LayoutFailed(f"field layout for {diagram.code} failed: {last}")


# ---------------------------------------------------------------------------
# Base curve


def _great_circle(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return np.column_stack([np.sin(theta), np.zeros_like(theta), np.cos(theta)])


def _rotation_taking(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Rotation matrix taking unit vector ``a`` to unit vector ``b``."""
    from scipy.spatial.transform import Rotation

    v = np.cross(a, b)
    c = float(a @ b)
    if np.linalg.norm(v) < 1e-12:
        if c > 0:
            return np.eye(3)
        helper = np.array([1.0, 0.0, 0.0]) if abs(a[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        axis = np.cross(a, helper)
        return Rotation.from_rotvec(np.pi * axis / np.linalg.norm(axis)).as_matrix()
    ang = math.atan2(float(np.linalg.norm(v)), c)
    return Rotation.from_rotvec(ang * v / np.linalg.norm(v)).as_matrix()


def _hermite(p0, t0, p1, t1, m: int) -> np.ndarray:
    tau = np.linspace(0.0, 1.0, m)[:, None]
    h00 = 2 * tau ** 3 - 3 * tau ** 2 + 1
    h10 = tau ** 3 - 2 * tau ** 2 + tau
    h01 = -2 * tau ** 3 + 3 * tau ** 2
    h11 = tau ** 3 - tau ** 2
    return h00 * p0 + h10 * t0 + h01 * p1 + h11 * t1


def _window(mask: np.ndarray, i0: int) -> tuple[int, int]:
    """Contiguous (cyclic) run of ``mask`` around index ``i0``, as unwrapped bounds."""
    n = len(mask)
    lo = hi = i0
    while mask[(lo - 1) % n] and i0 - lo < n // 2:
        lo -= 1
    while mask[(hi + 1) % n] and hi - i0 < n // 2:
        hi += 1
    return lo, hi


def _knot_splice(k1: ClosedCurve3, delta: float, radius: float = 0.04, gap: float = 0.006,
                 cut: float = 0.008, lift: float = 0.008, n: int = 8192) -> np.ndarray:
    """Polyline replacing the great-circle arc ``pi/2 - delta .. pi/2 + delta``.

    ``k1`` is scaled to radius ``radius`` and placed outside the sphere with
    its lowest point (along a well-separated direction) just beyond
    ``(1, 0, 0)``.  The plane ``x = 1 + gap / 2`` then meets the spliced
    curve twice, so the result is ``k1`` summed with an unknot.  The two
    short connectors cross in side view and are kept apart in ``y``.
    """
    s = np.arange(n) / n
    P = k1.sample(n)
    T = k1.sample(n, 1)
    P = P - P.mean(axis=0)
    P *= radius / np.linalg.norm(P, axis=1).max()
    # direction whose minimum is isolated from the rest of the curve
    from .intersect import _fibonacci_axes

    best = None
    for d in _fibonacci_axes(200):
        h = P @ d
        i0 = int(np.argmin(h))
        lo, hi = _window(np.linalg.norm(P - P[i0], axis=1) < 0.5 * radius, i0)
        rest = P[np.arange(hi + 1, lo + n) % n] @ d
        clearance = float(rest.min() - h[i0]) if len(rest) else 0.0
        if best is None or clearance > best[0]:
            best = (clearance, d, i0)
    clearance, d, i0 = best
    if clearance < 1.5 * gap:
        raise BallTooSmall("no direction isolates a lowest point of the base knot")
    R1 = _rotation_taking(d, np.array([-1.0, 0.0, 0.0]))
    P = P @ R1.T
    t0 = R1 @ T[i0]
    t0 = t0 - t0[0] * np.array([1.0, 0.0, 0.0])
    t0 /= np.linalg.norm(t0)
    R2 = _rotation_taking(t0, np.array([0.0, 0.0, -1.0]))
    P = P @ R2.T
    P = P - P[i0] + np.array([1.0 + gap, 0.0, 0.0])
    lo, hi = _window(np.linalg.norm(P - P[i0], axis=1) < cut, i0)
    arc = P[np.arange(hi + 1, lo + n) % n]
    if np.linalg.norm(arc - BALL_CENTER, axis=1).max() > BALL_RADIUS:
        raise BallTooSmall("scaled base knot does not fit the knotted ball")
    g_in, g_out = _great_circle([0.5 * np.pi - delta, 0.5 * np.pi + delta])
    tg = np.array([math.sin(delta), 0.0, -math.cos(delta)])
    tg_out = np.array([-math.sin(delta), 0.0, -math.cos(delta)])
    ta = (arc[1] - arc[0]) / np.linalg.norm(arc[1] - arc[0])
    tb = (arc[-1] - arc[-2]) / np.linalg.norm(arc[-1] - arc[-2])
    m = 200
    bump = 16 * (np.linspace(0, 1, m) ** 2) * (1 - np.linspace(0, 1, m)) ** 2
    L1 = np.linalg.norm(arc[0] - g_in)
    c1 = _hermite(g_in, tg * L1, arc[0], ta * L1, m)
    c1[:, 1] += lift * bump
    L2 = np.linalg.norm(g_out - arc[-1])
    c2 = _hermite(arc[-1], tb * L2, g_out, tg_out * L2, m)
    c2[:, 1] -= lift * bump
    return np.vstack([c1[:-1], arc, c2[1:-1]])


def _base_polyline(k1, delta: float = 0.03, m: int = 8000) -> tuple[np.ndarray, float, float]:
    """Closed polyline of the base geometry starting at the north pole.

    Also returns the arclength where the spliced knot begins and its length
    (both zero for the unknot preset).
    """
    if isinstance(k1, str):
        if k1 != UNKNOT:
            raise ValueError(f"unknown base preset {k1!r}")
        th = np.linspace(0.0, 2 * np.pi, m, endpoint=False)
        return _great_circle(th), 0.0, 0.0
    insert = _knot_splice(k1, delta)
    a = np.linspace(0.0, 0.5 * np.pi - delta, m // 4, endpoint=False)
    b = np.linspace(0.5 * np.pi + delta, 2 * np.pi, 3 * m // 4, endpoint=False)
    pts = np.vstack([_great_circle(a), insert, _great_circle(b)])
    ins_len = float(np.linalg.norm(np.diff(np.vstack([_great_circle(a[-1:]), insert, _great_circle(b[:1])]),
                                           axis=0), axis=1).sum())
    return pts, 0.5 * np.pi - delta, ins_len


def _arclength(pts: np.ndarray) -> tuple[np.ndarray, float]:
    d = np.linalg.norm(np.diff(np.vstack([pts, pts[:1]]), axis=0), axis=1)
    c = np.concatenate([[0.0], np.cumsum(d)])
    return c[:-1], float(c[-1])


def window_parameters(dps: Sequence[DoublePoint]) -> tuple[float, float, float, float]:
    """Parameter windows ``[a1, a2]`` (arc visits) and ``[b1, b2]`` (return visits)."""
    s = sorted(d.s for d in dps)
    sb = sorted(d.s_bar for d in dps)
    gap = min(sb[0] - s[-1], 1.0 + s[0] - sb[-1])
    m = min(0.02, 0.2 * gap)
    return s[0] - m, s[-1] + m, sb[0] - m, sb[-1] + m


def build_base(k1, diagram: ArcDiagram, u: SphericalCurve, grid_n: int = DEFAULT_GRID_N,
               tol: ToleranceSet | None = None, max_degree: int = 800) -> ClosedCurve3:
    """Base curve for a built field ``u``.

    The geometry is the great circle through the poles and ``(1, 0, 0)``,
    or, for a space curve ``k1``, that circle with ``k1`` spliced in inside
    the ball about ``(1, 0, 0)``.  The parameterization is warped so the arc
    visits of ``u`` fall in the north cap and the return visits in the
    south cap; the warp is monotone cubic (PCHIP) in arclength.

    Raises
    ------
    BallTooSmall
        ``k1`` cannot be isolated in the knotted ball.
    """
    tol = tol or ToleranceSet()
    delta = 0.03
    pts, ins_start, ins_len = _base_polyline(k1, delta)
    lam, L = _arclength(pts)
    extra = L - 2 * np.pi
    c = _X_POLAR
    if diagram.k == 0:
        s_knots = [0.0, 0.25, 0.5, 0.75]
        lam_knots = [0.0, 0.25 * L, 0.5 * L, 0.75 * L]
    else:
        dps = sphere_double_points(u, tol, grid_n)
        a1, a2, b1, b2 = window_parameters(dps)
        s_knots = [a1, a2]
        lam_knots = [-c, c]
        if ins_len > 0:
            s_knots += [a2 + 0.25 * (b1 - a2), a2 + 0.75 * (b1 - a2)]
            lam_knots += [ins_start, ins_start + ins_len]
        s_knots += [b1, b2]
        lam_knots += [np.pi - c + extra, np.pi + c + extra]
    s_knots = np.asarray(s_knots)
    lam_knots = np.asarray(lam_knots)
    ext_s = np.concatenate([s_knots - 1.0, s_knots, s_knots + 1.0])
    ext_l = np.concatenate([lam_knots - L, lam_knots, lam_knots + L])
    warp = PchipInterpolator(ext_s, ext_l)
    spline = CubicSpline(np.concatenate([lam, [L]]), np.vstack([pts, pts[:1]]), bc_type="periodic")
    s = np.arange(grid_n) / grid_n
    samples = spline(np.mod(warp(s), L))
    degree = min(max_degree, (grid_n - 1) // 2)
    return _smooth_fit(samples, degree, degree / 2.5)


# ---------------------------------------------------------------------------
# Frames


@dataclass(frozen=True)
class ConstructionReport:
    diagram: ArcDiagram
    validation: dict
    limiting_code: str
    limiting_profile: dict
    target_profile: dict
    base_profile: dict
    k1_profile: dict
    margins: tuple[float, ...]

    def to_json(self) -> dict:
        return {
            "diagram": self.diagram.to_json(),
            "validation": self.validation,
            "limiting_code": self.limiting_code,
            "limiting_profile": self.limiting_profile,
            "target_profile": self.target_profile,
            "base_profile": self.base_profile,
            "k1_profile": self.k1_profile,
            "margins": [round(m, 12) for m in self.margins],
        }


def _space_profile(curve, grid_n: int, tol: ToleranceSet):
    from .diagram import planar_code
    from .invariants import profile

    if isinstance(curve, str):
        return profile(SignedGaussCode(()))
    return profile(planar_code(curve, grid_n, tol))


def construct(k1, k2_code: SignedGaussCode, grid_n: int = DEFAULT_GRID_N,
              tol: ToleranceSet | None = None) -> tuple[RibbonFrame, ConstructionReport]:
    """:func:`build_frame` plus the verification record."""
    from .diagram import limiting_resolution, radial_margins
    from .invariants import Comparison, profile, same_knot_type

    tol = tol or ToleranceSet()
    if not is_realizable(k2_code):
        raise NonRealizableCode(f"{k2_code} is not a planar diagram")
    diagram = hamiltonian_arc_check(k2_code)
    u = build_field(diagram, grid_n, tol)
    x = build_base(k1, diagram, u, grid_n, tol)
    frame = RibbonFrame(x, u, grid_n, tol)
    report = validate_frame(frame)
    if not report.ok:
        raise LayoutFailed(f"constructed frame fails validation: {report.to_json()}")
    dps = sphere_double_points(u, tol, grid_n)
    limit = limiting_resolution(frame)
    lim_p, tgt_p = profile(limit), profile(k2_code)
    if same_knot_type(lim_p, tgt_p) is not Comparison.INDISTINGUISHABLE:
        raise LayoutFailed(f"limiting resolution {limit} does not match {k2_code}")
    base_p, k1_p = _space_profile(x, grid_n, tol), _space_profile(k1, grid_n, tol)
    if same_knot_type(base_p, k1_p) is not Comparison.INDISTINGUISHABLE:
        raise BallTooSmall("spliced base curve lost the knot type of k1")
    rep = ConstructionReport(diagram, report.to_json(), limit.canonical_text(), lim_p.to_json(),
                             tgt_p.to_json(), base_p.to_json(), k1_p.to_json(),
                             tuple(radial_margins(frame, dps)))
    return frame, rep


def build_frame(k1, k2_code: SignedGaussCode, grid_n: int = DEFAULT_GRID_N,
                tol: ToleranceSet | None = None) -> RibbonFrame:
    """Ribbon frame whose base has the knot type of ``k1`` and whose outer
    edge converges to the knot of ``k2_code``.

    Parameters
    ----------
    k1 : ClosedCurve3 or ``UNKNOT``
        Base knot, either the preset or an embedded space curve.
    k2_code : SignedGaussCode
        Target diagram; some rotation must start with a Hamiltonian arc.

    Raises
    ------
    NoArc, LayoutFailed, BallTooSmall
    """
    return construct(k1, k2_code, grid_n, tol)[0]
