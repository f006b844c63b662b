"""Double points, crossing widths, goal posts and edge embeddedness.

Every search follows the same pattern: a quadratic scan over the sampled
curve (see :mod:`ribbonknots.kernels`) produces candidate parameter cells,
and each candidate is refined by Newton or Gauss-Newton iterations on the
continuous Fourier curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.spatial.transform import Rotation

from . import kernels
from .curves import ClosedCurve3, RibbonFrame, SphericalCurve, ToleranceSet, DEFAULT_GRID_N
from .errors import AmbiguousMatch, CoincidentPoints, RepairFailed, TangencyDetected, TriplePointDetected

MAX_ITER = 50
_SCAN_OFFSET = 0.3711


def circ_dist(a: float, b: float) -> float:
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


def _min_sep_index(sep_lambda: float, n: int) -> int:
    # grid cells are scanned one index short of the exclusion window so that a
    # refined pair sitting right at the window edge is still found
    return max(2, int(math.floor(sep_lambda * n)) - 1)


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class DoublePoint:
    s: float
    s_bar: float
    point: np.ndarray = field(compare=False)
    crossing_angle: float
    residual: float = 0.0

    def to_json(self) -> dict:
        return {"s": self.s, "s_bar": self.s_bar, "point": [float(v) for v in self.point],
                "crossing_angle": self.crossing_angle}


@dataclass(frozen=True)
class CrossingRecord:
    s: float
    s_bar: float
    width: float
    residual: float

    def to_json(self) -> dict:
        return {"s": self.s, "s_bar": self.s_bar, "width": self.width, "residual": self.residual}


@dataclass(frozen=True)
class GoalPost:
    s: float
    s_bar: float
    orthogonality_residual: float
    separation: float

    def to_json(self) -> dict:
        return {"s": self.s, "s_bar": self.s_bar, "residual": self.orthogonality_residual,
                "separation": self.separation}


@dataclass(frozen=True)
class MatchReport:
    pairs: list[tuple[DoublePoint, DoublePoint]]
    max_parameter_drift: float
    unmatched_u: list[DoublePoint]
    unmatched_z: list[DoublePoint]

    @property
    def bijective(self) -> bool:
        return not self.unmatched_u and not self.unmatched_z


class _Unbounded:
    """Marker returned instead of a width when goal posts make the sup untrustworthy."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Unbounded"

    def to_json(self) -> str:
        return "unbounded"


UNBOUNDED = _Unbounded()


# ---------------------------------------------------------------------------
# Coincidence refinement shared by spherical and planar curves


def refine_coincidence(f: Callable, df: Callable, s: float, sb: float, step_cap: float,
                       max_iter: int = MAX_ITER) -> tuple[float, float, float]:
    """Damped Gauss-Newton for ``f(s) = f(sb)``.

    Returns the refined pair and the final residual norm.
    """
    r = f(s) - f(sb)
    res = float(np.linalg.norm(r))
    for _ in range(max_iter):
        J = np.stack([df(s), -df(sb)], axis=1)
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        norm = float(np.abs(step).max())
        if norm > step_cap:
            step *= step_cap / norm
        lam = 1.0
        while True:
            s_new, sb_new = s + lam * step[0], sb + lam * step[1]
            r_new = f(s_new) - f(sb_new)
            res_new = float(np.linalg.norm(r_new))
            if res_new < res or lam < 1e-3:
                break
            lam *= 0.5
        if res_new >= res:
            break
        s, sb, r, res = s_new, sb_new, r_new, res_new
        if res < 1e-15 or norm * lam < 1e-15:
            break
    return s % 1.0, sb % 1.0, res


def _line_angle(t1: np.ndarray, t2: np.ndarray) -> float:
    c = abs(float(np.dot(t1, t2))) / (np.linalg.norm(t1) * np.linalg.norm(t2))
    return math.acos(min(1.0, c))


def _dedupe_pairs(pairs: list[tuple[float, float]], tol: float) -> list[int]:
    keep: list[int] = []
    for idx, (s, sb) in enumerate(pairs):
        if all(circ_dist(s, pairs[k][0]) > tol or circ_dist(sb, pairs[k][1]) > tol for k in keep):
            keep.append(idx)
    return keep


def _order(s: float, sb: float) -> tuple[float, float]:
    return (s, sb) if s < sb else (sb, s)


def coincidences(f: Callable, df: Callable, P: np.ndarray, min_sep: int, sep_lambda: float,
                 eq_tol: float, angle_tol: float, error=TangencyDetected,
                 triple_error=TriplePointDetected) -> list[tuple[float, float, float, float]]:
    """Refined self-intersections ``(s, sb, angle, residual)`` of a curve whose
    grid samples, lifted to unit 3-vectors, are ``P``."""
    n = len(P)
    cand = kernels.arc_crossings(P, min_sep)
    found: list[tuple[float, float]] = []
    info: list[tuple[float, float]] = []
    for i, j in cand:
        s0, sb0 = (i + 0.5) / n, (j + 0.5) / n
        s, sb, res = refine_coincidence(f, df, s0, sb0, step_cap=2.0 / n)
        if res >= eq_tol:
            raise error(f"crossing candidate near ({s0:.6f}, {sb0:.6f}) does not refine "
                        f"(residual {res:.2e}); likely a tangency", 0.0)
        s, sb = _order(s, sb)
        if circ_dist(s, sb) < sep_lambda:
            continue
        found.append((s, sb))
        info.append((_line_angle(df(s), df(sb)), res))
    keep = _dedupe_pairs(found, 1e-7)
    out = [(found[k][0], found[k][1], info[k][0], info[k][1]) for k in keep]
    for s, sb, ang, _ in out:
        if ang < angle_tol:
            raise error(f"crossing at ({s:.6f}, {sb:.6f}) has angle {ang:.2e} below {angle_tol:.1e}", ang)
    pts = [f(s) for s, *_ in out]
    for a in range(len(out)):
        for b in range(a + 1, len(out)):
            if np.linalg.norm(pts[a] - pts[b]) < 2 * eq_tol:
                raise triple_error(f"double points at s={out[a][0]:.6f} and s={out[b][0]:.6f} share an image")
    out.sort()
    return out


def sphere_double_points(u: SphericalCurve, tol: ToleranceSet | None = None,
                         grid_n: int = DEFAULT_GRID_N) -> list[DoublePoint]:
    """Transversal self-intersections of a spherical curve, sorted by ``(s, s_bar)``.

    Raises
    ------
    TangencyDetected
        A crossing angle falls below ``tol.angle_tol`` or a candidate fails to refine.
    TriplePointDetected
        Two distinct double points share an image within ``2 * tol.eq_tol``.
    """
    tol = tol or ToleranceSet()
    P = u.sample(grid_n)
    f = lambda s: u.eval(s)  # noqa: E731
    df = lambda s: u.eval(s, 1)  # noqa: E731
    out = coincidences(f, df, P, _min_sep_index(tol.sep_lambda, grid_n), tol.sep_lambda,
                       tol.eq_tol, tol.angle_tol)
    return [DoublePoint(s, sb, u.eval(s), ang, res) for s, sb, ang, res in out]


# ---------------------------------------------------------------------------
# Crossing widths


def width_residual(frame: RibbonFrame, s: float, sb: float, R: float) -> float:
    x, u = frame.base, frame.field
    return float(np.linalg.norm(x.eval(s) - x.eval(sb) - R * (u.eval(sb) - u.eval(s))))


def _solve_width(x: ClosedCurve3, u: SphericalCurve, s: float, sb: float, step_cap: float):
    a = x.eval(s) - x.eval(sb)
    b = u.eval(sb) - u.eval(s)
    bb = float(b @ b)
    if bb == 0.0:
        return None
    R = float(a @ b) / bb
    v = np.array([s, sb, R])
    F = a - R * b
    res = float(np.linalg.norm(F))
    for _ in range(MAX_ITER):
        s, sb, R = v
        J = np.stack([x.eval(s, 1) + R * u.eval(s, 1), -x.eval(sb, 1) - R * u.eval(sb, 1),
                      -(u.eval(sb) - u.eval(s))], axis=1)
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return None
        scale = max(abs(step[0]), abs(step[1])) / step_cap
        if scale > 1:
            step /= scale
        lam = 1.0
        while True:
            w = v + lam * step
            Fw = x.eval(w[0]) - x.eval(w[1]) - w[2] * (u.eval(w[1]) - u.eval(w[0]))
            rw = float(np.linalg.norm(Fw))
            if rw < res or lam < 1e-3:
                break
            lam *= 0.5
        if rw >= res:
            break
        v, F, res = w, Fw, rw
        if res < 1e-15:
            break
    return v[0] % 1.0, v[1] % 1.0, float(v[2]), res


def crossing_widths(frame: RibbonFrame) -> list[CrossingRecord]:
    """All pairs where the rays ``x(s) + R u(s)`` and ``x(sb) + R u(sb)`` meet
    at a common width ``R > 0``, sorted by ``(s, s_bar)``."""
    tol, n = frame.tol, frame.grid_n
    # the scan grid is offset from j/n so that symmetric fixtures do not put
    # solutions exactly on cell corners, where the winding test is blind
    s_grid = (np.arange(n) + _SCAN_OFFSET) / n
    X, U = frame.base.eval(s_grid), frame.field.eval(s_grid)
    cells = kernels.parallel_chord_cells(X, U, _min_sep_index(tol.sep_lambda, n))
    found: list[tuple[float, float]] = []
    widths: list[tuple[float, float]] = []
    for i, j in cells:
        sol = _solve_width(frame.base, frame.field, s_grid[i] + 0.5 / n, s_grid[j] + 0.5 / n, 2.0 / n)
        if sol is None:
            continue
        s, sb, R, res = sol
        if not (res < tol.residual_tol and R > 0 and circ_dist(s, sb) >= tol.sep_lambda):
            continue
        found.append(_order(s, sb))
        widths.append((R, res))
    keep = _dedupe_pairs(found, 1e-7)
    recs = [CrossingRecord(found[k][0], found[k][1], widths[k][0], widths[k][1]) for k in keep]
    return sorted(recs, key=lambda r: (r.s, r.s_bar))


# ---------------------------------------------------------------------------
# Goal posts


def chord_direction(x: ClosedCurve3, s: float, s_bar: float, eq_tol: float = 1e-6) -> np.ndarray:
    """Unit vector from ``x(s)`` to ``x(s_bar)``."""
    d = x.eval(s_bar) - x.eval(s)
    nd = float(np.linalg.norm(d))
    if nd < eq_tol:
        raise CoincidentPoints(f"x({s:.6f}) and x({s_bar:.6f}) coincide")
    return d / nd


def max_chord_angle(points: np.ndarray, u0: np.ndarray) -> float:
    """Largest angle between ``u0`` and a forward chord ``points[d] - points[c]``, ``c < d``.

    Used to check that chords of an arc whose tangents stay in a cone about
    ``u0`` stay in the same cone.
    """
    P = np.asarray(points, dtype=float)
    u0 = np.asarray(u0, dtype=float) / np.linalg.norm(u0)
    worst = 0.0
    for c in range(len(P) - 1):
        ch = P[c + 1:] - P[c]
        n = np.linalg.norm(ch, axis=1)
        ok = n > 0
        if ok.any():
            cosv = np.clip((ch[ok] @ u0) / n[ok], -1.0, 1.0)
            worst = max(worst, float(np.arccos(cosv.min())))
    return worst


def orthogonality_residual(x: ClosedCurve3, u: SphericalCurve, s: float, s_bar: float) -> float:
    """``|u(s) . F(s, s_bar)|`` with ``F`` the unit chord; infinite for coincident points."""
    try:
        F = chord_direction(x, s, s_bar, eq_tol=1e-14)
    except CoincidentPoints:
        return 0.0
    return abs(float(u.eval(s) @ F))


def detect_goalposts(frame: RibbonFrame, dps: Sequence[DoublePoint] | None = None) -> list[GoalPost]:
    if dps is None:
        dps = sphere_double_points(frame.field, frame.tol, frame.grid_n)
    out = []
    for d in dps:
        res = orthogonality_residual(frame.base, frame.field, d.s, d.s_bar)
        if res < frame.tol.eq_tol:
            sep = float(np.linalg.norm(frame.base.eval(d.s) - frame.base.eval(d.s_bar)))
            out.append(GoalPost(d.s, d.s_bar, res, sep))
    return out


def stabilization_width(frame: RibbonFrame) -> float | _Unbounded:
    """Largest crossing width, 0 when there is none, :data:`UNBOUNDED` with goal posts."""
    if detect_goalposts(frame):
        return UNBOUNDED
    recs = crossing_widths(frame)
    return max((r.width for r in recs), default=0.0)


def _fibonacci_axes(m: int) -> np.ndarray:
    k = np.arange(m) + 0.5
    z = 1.0 - 2.0 * k / m
    phi = math.pi * (3.0 - math.sqrt(5.0)) * k
    r = np.sqrt(1.0 - z * z)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def remove_goalposts(frame: RibbonFrame, max_angle: float, n_axes: int = 1000,
                     ladder: int = 11) -> RibbonFrame:
    """Rotate the field by a small rotation so no goal post survives.

    A rotation of the sphere keeps the double-point parameters of ``u``
    exactly, so only the orthogonality residuals need to be re-evaluated for
    each trial rotation.  Trials run over ``n_axes`` quasi-uniform axes and a
    geometric ladder of angles ending at ``max_angle``; the first rotation
    whose smallest residual exceeds ``10 * eq_tol`` wins.
    """
    tol = frame.tol
    dps = sphere_double_points(frame.field, tol, frame.grid_n)
    if not detect_goalposts(frame, dps):
        return frame
    if not max_angle > 0:
        raise RepairFailed("max_angle must be positive to repair goal posts")
    U = np.array([frame.field.eval(d.s) for d in dps])
    F = np.array([chord_direction(frame.base, d.s, d.s_bar, tol.eq_tol) for d in dps])
    axes = _fibonacci_axes(n_axes)
    for angle in max_angle * 2.0 ** -np.arange(ladder - 1, -1, -1):
        rots = Rotation.from_rotvec(axes * angle).as_matrix()
        res = np.abs(np.einsum("aij,dj,di->ad", rots, U, F)).min(axis=1)
        good = np.nonzero(res > 10 * tol.eq_tol)[0]
        for a in good:
            repaired = frame.with_field(frame.field.rotated(rots[a]))
            if not detect_goalposts(repaired, _rotated_dps(dps, rots[a])):
                return repaired
    raise RepairFailed(f"no rotation of angle <= {max_angle} removes the goal posts")


def _rotated_dps(dps: Sequence[DoublePoint], rot: np.ndarray) -> list[DoublePoint]:
    return [DoublePoint(d.s, d.s_bar, rot @ d.point, d.crossing_angle, d.residual) for d in dps]


# ---------------------------------------------------------------------------
# Matching double points of z_t with those of u


def pair_distance(a: DoublePoint, b: DoublePoint) -> float:
    direct = max(circ_dist(a.s, b.s), circ_dist(a.s_bar, b.s_bar))
    swapped = max(circ_dist(a.s, b.s_bar), circ_dist(a.s_bar, b.s))
    return min(direct, swapped)


def match_double_points(u_dps: Sequence[DoublePoint], z: SphericalCurve, tol: ToleranceSet | None = None,
                        grid_n: int = DEFAULT_GRID_N) -> MatchReport:
    """Pair each double point of ``z`` with the double point of ``u`` whose
    parameters lie within ``sep_lambda`` of its own."""
    tol = tol or ToleranceSet()
    z_dps = sphere_double_points(z, tol, grid_n)
    delta = tol.sep_lambda
    owner: dict[int, int] = {}
    unmatched_z = []
    for zi, zd in enumerate(z_dps):
        near = [k for k, ud in enumerate(u_dps) if pair_distance(ud, zd) < delta]
        if not near:
            unmatched_z.append(zd)
            continue
        k = min(near, key=lambda k: pair_distance(u_dps[k], zd))
        if k in owner:
            raise AmbiguousMatch(f"two double points of z fall in the window of u's pair "
                                 f"({u_dps[k].s:.4f}, {u_dps[k].s_bar:.4f})")
        owner[k] = zi
    pairs = [(u_dps[k], z_dps[zi]) for k, zi in sorted(owner.items())]
    drift = max((pair_distance(a, b) for a, b in pairs), default=0.0)
    unmatched_u = [d for k, d in enumerate(u_dps) if k not in owner]
    return MatchReport(pairs, drift, unmatched_u, unmatched_z)


# ---------------------------------------------------------------------------
# Embeddedness of the outer edge


class EmbeddingCheck(NamedTuple):
    embedded: bool
    min_gap: float
    where: tuple[float, float]


def _refine_gap(y: Callable, dy: Callable, s: float, sb: float, step_cap: float, sep: float):
    r = y(s) - y(sb)
    res = float(np.linalg.norm(r))
    for _ in range(MAX_ITER):
        J = np.stack([dy(s), -dy(sb)], axis=1)
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        m = float(np.abs(step).max())
        if m > step_cap:
            step *= step_cap / m
        lam, improved = 1.0, False
        while lam >= 1e-3:
            s2, sb2 = s + lam * step[0], sb + lam * step[1]
            if circ_dist(s2, sb2) >= sep:
                r2 = y(s2) - y(sb2)
                res2 = float(np.linalg.norm(r2))
                if res2 < res:
                    improved = True
                    break
            lam *= 0.5
        if not improved:
            break
        s, sb, r, res = s2, sb2, r2, res2
        if res < 1e-15:
            break
    return s % 1.0, sb % 1.0, res


def edge_embedded(frame: RibbonFrame, R: float) -> EmbeddingCheck:
    """Minimum distance between points of ``y_R`` at parameter separation at
    least ``sep_lambda``; embedded when it exceeds ``eq_tol``."""
    tol, n = frame.tol, frame.grid_n
    smp = frame.samples
    Y = smp.x + R * smp.u
    step = float(np.linalg.norm(np.roll(Y, -1, axis=0) - Y, axis=1).max())
    min_sep = int(math.ceil(tol.sep_lambda * n))
    gap, (bi, bj), pairs = kernels.close_pairs(Y, min_sep, 2.0 * step)
    x, u = frame.base, frame.field
    y = lambda s: x.eval(s) + R * u.eval(s)  # noqa: E731
    dy = lambda s: x.eval(s, 1) + R * u.eval(s, 1)  # noqa: E731
    seeds = {(int(bi), int(bj))} | {(int(i), int(j)) for i, j in pairs}
    # keep the refinement affordable: only local minima of the grid distance
    if len(seeds) > 64:
        d = np.linalg.norm(Y[pairs[:, 0]] - Y[pairs[:, 1]], axis=1)
        order = np.argsort(d)[:64]
        seeds = {(int(bi), int(bj))} | {(int(pairs[k, 0]), int(pairs[k, 1])) for k in order}
    best, where = gap, (bi / n, bj / n)
    for i, j in sorted(seeds):
        s, sb, res = _refine_gap(y, dy, i / n, j / n, 2.0 / n, tol.sep_lambda)
        if res < best:
            best, where = res, (s, sb)
    return EmbeddingCheck(bool(best > tol.eq_tol), float(best), where)
