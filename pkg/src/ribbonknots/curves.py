"""Smooth closed curves as truncated Fourier series, and ribbon frames built from them.

Curves are parameterized over ``s in [0, 1)``.  A :class:`ClosedCurve3` stores

    x(s) = c + sum_k  a_k cos(2 pi k s) + b_k sin(2 pi k s),   k = 1..K

with 3-vector coefficients, so values and derivatives of every order are exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from .errors import (
    GridMismatch,
    IrregularCurve,
    NonMonotoneWarp,
    ValidationError,
    VanishingGenerator,
)

TWO_PI = 2.0 * math.pi
DEFAULT_GRID_N = 4096
DEFAULT_FIT_TOL = 1e-9


def _as_vec3_rows(a) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.size == 0:
        return np.zeros((0, 3))
    arr = arr.reshape(-1, 3)
    return arr


@dataclass(frozen=True, eq=False)
class ClosedCurve3:
    """Closed curve in R^3 given by Fourier coefficients.

    Parameters
    ----------
    constant : array_like, shape (3,)
        Mean position.
    cos, sin : array_like, shape (K, 3)
        Coefficients of ``cos(2 pi k s)`` and ``sin(2 pi k s)`` for ``k = 1..K``.
    """

    constant: np.ndarray
    cos: np.ndarray
    sin: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.constant, dtype=float).reshape(3)
        a = _as_vec3_rows(self.cos)
        b = _as_vec3_rows(self.sin)
        k = max(len(a), len(b))
        a = np.vstack([a, np.zeros((k - len(a), 3))])
        b = np.vstack([b, np.zeros((k - len(b), 3))])
        for arr in (c, a, b):
            arr.setflags(write=False)
        object.__setattr__(self, "constant", c)
        object.__setattr__(self, "cos", a)
        object.__setattr__(self, "sin", b)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_function(cls, f: Callable[[np.ndarray], np.ndarray], n: int = DEFAULT_GRID_N,
                      tol: float = DEFAULT_FIT_TOL, max_degree: int | None = None) -> "ClosedCurve3":
        s = np.arange(n) / n
        return cls.fit(np.asarray(f(s), dtype=float), tol=tol, max_degree=max_degree)

    @classmethod
    def fit(cls, samples: np.ndarray, tol: float = DEFAULT_FIT_TOL,
            max_degree: int | None = None) -> "ClosedCurve3":
        """Fourier fit of uniform samples ``samples[j] = x(j/n)``.

        The degree is the smallest one whose discarded coefficients sum below
        ``tol`` (a sup-norm bound on the truncation error at the samples).
        The Nyquist mode is always dropped.
        """
        samples = np.asarray(samples, dtype=float)
        n = samples.shape[0]
        spec = np.fft.rfft(samples, axis=0) / n
        kmax = (n - 1) // 2
        a = 2.0 * spec[1:kmax + 1].real
        b = -2.0 * spec[1:kmax + 1].imag
        mag = np.abs(a).sum(axis=1) + np.abs(b).sum(axis=1)
        tail = np.concatenate([np.cumsum(mag[::-1])[::-1], [0.0]])
        # tail[K] = sum of magnitudes for k > K
        ok = np.nonzero(tail < tol)[0]
        degree = int(ok[0]) if ok.size else kmax
        if max_degree is not None:
            degree = min(degree, max_degree)
        return cls(spec[0].real, a[:degree], b[:degree])

    @classmethod
    def circle(cls, radius: float = 1.0, center=(0.0, 0.0, 0.0), e1=(1.0, 0.0, 0.0),
               e2=(0.0, 1.0, 0.0)) -> "ClosedCurve3":
        return cls(center, [radius * np.asarray(e1, float)], [radius * np.asarray(e2, float)])

    @classmethod
    def constant_curve(cls, point) -> "ClosedCurve3":
        return cls(point, np.zeros((0, 3)), np.zeros((0, 3)))

    # -- evaluation -------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.cos)

    def _complex_coeffs(self, deriv: int) -> np.ndarray:
        k = np.arange(1, self.degree + 1)
        return (self.cos - 1j * self.sin) * ((1j * TWO_PI * k) ** deriv)[:, None]

    def eval(self, s, deriv: int = 0) -> np.ndarray:
        """Value (or ``deriv``-th derivative) at parameter(s) ``s``."""
        s_arr = np.asarray(s, dtype=float)
        flat = s_arr.reshape(-1)
        if self.degree:
            k = np.arange(1, self.degree + 1)
            phase = np.exp(1j * TWO_PI * np.outer(flat, k))
            out = (phase @ self._complex_coeffs(deriv)).real
        else:
            out = np.zeros((flat.size, 3))
        if deriv == 0:
            out = out + self.constant
        return out.reshape(s_arr.shape + (3,))

    __call__ = eval

    def sample(self, n: int, deriv: int = 0) -> np.ndarray:
        """Values on the uniform grid ``j/n`` via an inverse real FFT."""
        if self.degree >= n // 2:
            return self.eval(np.arange(n) / n, deriv)
        spec = np.zeros((n // 2 + 1, 3), dtype=complex)
        if self.degree:
            spec[1:self.degree + 1] = self._complex_coeffs(deriv) * (n / 2.0)
        if deriv == 0:
            spec[0] = self.constant * n
        return np.fft.irfft(spec, n, axis=0)

    # -- algebra ----------------------------------------------------------

    def _padded(self, degree: int) -> tuple[np.ndarray, np.ndarray]:
        pad = degree - self.degree
        return (np.vstack([self.cos, np.zeros((pad, 3))]), np.vstack([self.sin, np.zeros((pad, 3))]))

    def __add__(self, other: "ClosedCurve3") -> "ClosedCurve3":
        d = max(self.degree, other.degree)
        a1, b1 = self._padded(d)
        a2, b2 = other._padded(d)
        return ClosedCurve3(self.constant + other.constant, a1 + a2, b1 + b2)

    def __sub__(self, other: "ClosedCurve3") -> "ClosedCurve3":
        return self + other.scaled(-1.0)

    def scaled(self, factor: float) -> "ClosedCurve3":
        return ClosedCurve3(factor * self.constant, factor * self.cos, factor * self.sin)

    def __mul__(self, factor: float) -> "ClosedCurve3":
        return self.scaled(float(factor))

    __rmul__ = __mul__

    def translated(self, v) -> "ClosedCurve3":
        return ClosedCurve3(self.constant + np.asarray(v, float), self.cos, self.sin)

    def transformed(self, matrix) -> "ClosedCurve3":
        m = np.asarray(matrix, dtype=float)
        return ClosedCurve3(m @ self.constant, self.cos @ m.T, self.sin @ m.T)

    def shifted(self, ds: float) -> "ClosedCurve3":
        """Curve ``s -> x(s + ds)``."""
        k = np.arange(1, self.degree + 1)
        c = (self.cos - 1j * self.sin) * np.exp(1j * TWO_PI * k * ds)[:, None]
        return ClosedCurve3(self.constant, c.real, -c.imag)

    def max_norm(self, n: int = DEFAULT_GRID_N) -> float:
        return float(np.linalg.norm(self.sample(n), axis=1).max())

    def speed_range(self, n: int = DEFAULT_GRID_N) -> tuple[float, float]:
        sp = np.linalg.norm(self.sample(n, 1), axis=1)
        return float(sp.min()), float(sp.max())

    def length(self, n: int = DEFAULT_GRID_N) -> float:
        return float(np.linalg.norm(self.sample(n, 1), axis=1).mean())

    def to_json(self) -> dict:
        return {"constant": self.constant.tolist(), "cos": self.cos.tolist(), "sin": self.sin.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "ClosedCurve3":
        return cls(data["constant"], data.get("cos", []), data.get("sin", []))


@dataclass(frozen=True, eq=False)
class SphericalCurve:
    """Unit curve ``u(s) = g(s) / |g(s)|`` for a nonvanishing generator ``g``."""

    generator: ClosedCurve3

    def __post_init__(self):
        g = self.generator.sample(1024)
        if np.linalg.norm(g, axis=1).min() <= 1e-12:
            raise VanishingGenerator("generator vanishes on the evaluation grid")

    def eval(self, s, deriv: int = 0) -> np.ndarray:
        g = self.generator.eval(s)
        r = np.linalg.norm(g, axis=-1, keepdims=True)
        if deriv == 0:
            return g / r
        if deriv != 1:
            raise ValueError("spherical curves expose derivatives up to order 1")
        dg = self.generator.eval(s, 1)
        ghat = g / r
        return (dg - np.sum(ghat * dg, axis=-1, keepdims=True) * ghat) / r

    __call__ = eval

    def sample(self, n: int, deriv: int = 0) -> np.ndarray:
        g = self.generator.sample(n)
        r = np.linalg.norm(g, axis=1, keepdims=True)
        ghat = g / r
        if deriv == 0:
            return ghat
        dg = self.generator.sample(n, 1)
        return (dg - np.sum(ghat * dg, axis=1, keepdims=True) * ghat) / r

    def fourier(self, n: int = DEFAULT_GRID_N, tol: float = DEFAULT_FIT_TOL) -> ClosedCurve3:
        """Fourier fit of the unit curve itself (not of its generator)."""
        return ClosedCurve3.fit(self.sample(n), tol=tol)

    def rotated(self, matrix) -> "SphericalCurve":
        return SphericalCurve(self.generator.transformed(matrix))


@dataclass(frozen=True)
class ToleranceSet:
    eq_tol: float = 1e-6
    angle_tol: float = 1e-3
    sep_lambda: float = 1e-2
    residual_tol: float = 1e-8

    def __post_init__(self):
        for name in ("eq_tol", "angle_tol", "sep_lambda", "residual_tol"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")
        if not self.sep_lambda < 0.25:
            raise ValidationError("sep_lambda must be below 0.25")

    def to_json(self) -> dict:
        return {"eq": self.eq_tol, "angle": self.angle_tol, "lambda": self.sep_lambda,
                "residual": self.residual_tol}

    @classmethod
    def from_json(cls, data: dict) -> "ToleranceSet":
        default = cls()
        return cls(float(data.get("eq", default.eq_tol)), float(data.get("angle", default.angle_tol)),
                   float(data.get("lambda", default.sep_lambda)),
                   float(data.get("residual", default.residual_tol)))


class FrameSamples(NamedTuple):
    s: np.ndarray
    x: np.ndarray
    dx: np.ndarray
    u: np.ndarray
    du: np.ndarray


@dataclass(frozen=True, eq=False)
class RibbonFrame:
    """A base curve ``x`` and a unit field ``u`` along it."""

    base: ClosedCurve3
    field: SphericalCurve
    grid_n: int = DEFAULT_GRID_N
    tol: ToleranceSet = field(default_factory=ToleranceSet)

    def __post_init__(self):
        n = int(self.grid_n)
        if n < 256 or n & (n - 1):
            raise ValidationError(f"grid_n must be a power of two >= 256, got {n}")
        object.__setattr__(self, "grid_n", n)

    @cached_property
    def samples(self) -> FrameSamples:
        n = self.grid_n
        return FrameSamples(np.arange(n) / n, self.base.sample(n), self.base.sample(n, 1),
                            self.field.sample(n), self.field.sample(n, 1))

    @cached_property
    def field_fourier(self) -> ClosedCurve3:
        return self.field.fourier(self.grid_n)

    def with_grid(self, grid_n: int) -> "RibbonFrame":
        return RibbonFrame(self.base, self.field, grid_n, self.tol)

    def with_field(self, field_: SphericalCurve) -> "RibbonFrame":
        return RibbonFrame(self.base, field_, self.grid_n, self.tol)

    def to_json(self) -> dict:
        return {"x": self.base.to_json(), "u_generator": self.field.generator.to_json(),
                "grid_n": self.grid_n, "tol": self.tol.to_json()}

    @classmethod
    def from_json(cls, data: dict, grid_n: int | None = None) -> "RibbonFrame":
        return cls(ClosedCurve3.from_json(data["x"]), SphericalCurve(ClosedCurve3.from_json(data["u_generator"])),
                   int(grid_n or data.get("grid_n", DEFAULT_GRID_N)), ToleranceSet.from_json(data.get("tol", {})))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    @classmethod
    def loads(cls, text: str, grid_n: int | None = None) -> "RibbonFrame":
        return cls.from_json(json.loads(text), grid_n)


# ---------------------------------------------------------------------------
# Operations


def outer_edge(frame: RibbonFrame, R: float) -> ClosedCurve3:
    """``y_R = x + R u``, with ``u`` re-fit on the frame grid."""
    if R < 0:
        raise ValueError("width must be nonnegative")
    if R == 0:
        return frame.base
    return frame.base + frame.field_fourier.scaled(R)


def rescaled_edge(frame: RibbonFrame, t: float) -> ClosedCurve3:
    """``z_t = t x + u``; a scalar multiple of the outer edge at width ``1/t``."""
    if not t > 0:
        raise ValueError("scale must be positive")
    return frame.base.scaled(t) + frame.field_fourier


def spherical_projection(curve: ClosedCurve3, tol: ToleranceSet | None = None,
                         grid_n: int = DEFAULT_GRID_N) -> SphericalCurve:
    tol = tol or ToleranceSet()
    rmin = float(np.linalg.norm(curve.sample(grid_n), axis=1).min())
    if rmin < tol.eq_tol:
        raise VanishingGenerator(f"curve passes within {rmin:.3g} of the origin")
    return SphericalCurve(curve)


def sup_distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b, axis=1).max())


def d1_d2(a: ClosedCurve3 | SphericalCurve, b: ClosedCurve3 | SphericalCurve,
          n: int = DEFAULT_GRID_N) -> tuple[float, float]:
    """Sup distance of values and of first derivatives on the grid."""
    return sup_distance(a.sample(n), b.sample(n)), sup_distance(a.sample(n, 1), b.sample(n, 1))


def frame_distance(f1: RibbonFrame, f2: RibbonFrame) -> float:
    if f1.grid_n != f2.grid_n:
        raise GridMismatch(f"grid sizes differ: {f1.grid_n} vs {f2.grid_n}")
    a, b = f1.samples, f2.samples
    return (sup_distance(a.x, b.x) + sup_distance(a.dx, b.dx)
            + sup_distance(a.u, b.u) + sup_distance(a.du, b.du))


def hausdorff(p: np.ndarray, q: np.ndarray) -> float:
    """Two-sided Hausdorff distance between point samples."""
    d1 = cKDTree(q).query(p)[0].max()
    d2 = cKDTree(p).query(q)[0].max()
    return float(max(d1, d2))


def reparameterize(curve: ClosedCurve3, warp: Callable[[np.ndarray], np.ndarray],
                   n: int = DEFAULT_GRID_N, tol: float = DEFAULT_FIT_TOL) -> ClosedCurve3:
    """Curve ``s -> curve(warp(s))`` re-fit on an ``n``-point grid.

    ``warp`` must be strictly increasing with ``warp(s + 1) = warp(s) + 1``.
    """
    s = np.arange(n + 1) / n
    w = np.asarray(warp(s), dtype=float)
    if np.any(np.diff(w) <= 0) or abs(w[-1] - w[0] - 1.0) > 1e-9:
        raise NonMonotoneWarp("warp must be strictly increasing with degree one")
    return ClosedCurve3.fit(curve.eval(w[:-1]), tol=tol)


def arclength_normalize(curve: ClosedCurve3, n: int = DEFAULT_GRID_N, ratio: float = 1.01,
                        max_iter: int = 6) -> ClosedCurve3:
    """Reparameterize proportionally to arclength, iterating until the speed
    ratio max/min is at most ``ratio``."""
    smin, _ = curve.speed_range(n)
    if smin < 1e-6:
        raise IrregularCurve(f"minimum speed {smin:.3g} is below 1e-6")
    out = curve
    dense = 4 * n
    for _ in range(max_iter):
        lo, hi = out.speed_range(n)
        if hi / lo <= ratio:
            break
        s = np.arange(dense + 1) / dense
        speed = np.linalg.norm(out.eval(s, 1), axis=1)
        arc = np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) / dense)])
        arc /= arc[-1]
        src = out
        out = reparameterize(src, lambda t, arc=arc, s=s: np.interp(t - np.floor(t), arc, s) + np.floor(t),
                             n=n)
    return out


def max_norm(x: np.ndarray) -> float:
    return float(np.linalg.norm(x, axis=1).max())


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class ValidationReport:
    regular_x: bool
    min_speed_x: float
    regular_u: bool
    min_speed_u: float
    x_embedded: bool
    min_gap_x: float
    u_no_triples: bool
    u_transversal: bool
    min_crossing_angle: float
    no_goalposts: bool
    worst_orthogonality: float
    double_points: int = 0
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return all((self.regular_x, self.regular_u, self.x_embedded, self.u_no_triples,
                    self.u_transversal, self.no_goalposts))

    def to_json(self) -> dict:
        def num(v: float):
            return None if not math.isfinite(v) else float(v)

        return {
            "ok": self.ok,
            "regular_x": self.regular_x,
            "min_speed_x": num(self.min_speed_x),
            "regular_u": self.regular_u,
            "min_speed_u": num(self.min_speed_u),
            "x_embedded": self.x_embedded,
            "min_gap_x": num(self.min_gap_x),
            "u_no_triples": self.u_no_triples,
            "u_transversal": self.u_transversal,
            "min_crossing_angle": num(self.min_crossing_angle),
            "no_goalposts": self.no_goalposts,
            "worst_orthogonality": num(self.worst_orthogonality),
            "double_points": self.double_points,
            "notes": list(self.notes),
        }


def validate_frame(frame: RibbonFrame) -> ValidationReport:
    """Check regularity, embeddedness of ``x``, genericity of ``u`` and the
    absence of goal posts on the frame grid."""
    from . import intersect
    from .errors import TangencyDetected, TriplePointDetected

    tol = frame.tol
    smp = frame.samples
    vx = float(np.linalg.norm(smp.dx, axis=1).min())
    vu = float(np.linalg.norm(smp.du, axis=1).min())
    regular_x, regular_u = vx > tol.eq_tol, vu > tol.eq_tol
    if regular_x:
        check = intersect.edge_embedded(frame, 0.0)
        embedded, gap = check.embedded, check.min_gap
    else:
        embedded, gap = False, 0.0
    notes: list[str] = []
    no_triples = transversal = no_gp = regular_u
    angle, worst, count = math.inf, math.inf, 0
    if regular_u:
        try:
            dps = intersect.sphere_double_points(frame.field, tol, frame.grid_n)
            count = len(dps)
            if dps:
                angle = min(d.crossing_angle for d in dps)
            residuals = [intersect.orthogonality_residual(frame.base, frame.field, d.s, d.s_bar) for d in dps]
            if residuals:
                worst = float(min(residuals))
            no_gp = worst >= tol.eq_tol
        except TriplePointDetected as exc:
            no_triples = no_gp = False
            notes.append(str(exc))
        except TangencyDetected as exc:
            transversal = no_gp = False
            angle = getattr(exc, "angle", 0.0)
            notes.append(str(exc))
    else:
        notes.append("field is not regular; double points were not analysed")
    return ValidationReport(regular_x, vx, regular_u, vu, embedded, gap, no_triples, transversal, angle,
                            no_gp, worst, count, tuple(notes))
