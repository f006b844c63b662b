"""Quadratic pair scans over sampled curves.

Each kernel exists twice: a numba ``@njit`` loop and a pure-numpy version
working on row blocks.  ``RIBBON_KERNELS=numpy`` forces the numpy path;
otherwise numba is used when it imports.  Both paths return identical
candidate sets, sorted lexicographically.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

_BACKEND_ENV = "RIBBON_KERNELS"


def backend() -> str:
    """Active backend name, re-read from the environment on each call."""
    want = os.environ.get(_BACKEND_ENV, "").strip().lower()
    if want == "numpy" or not HAVE_NUMBA:
        return "numpy"
    return "numba"


def _circ(i: np.ndarray, j: np.ndarray, n: int) -> np.ndarray:
    d = np.abs(i - j)
    return np.minimum(d, n - d)


def _sorted_pairs(i, j) -> np.ndarray:
    out = np.stack([np.asarray(i, dtype=np.int64), np.asarray(j, dtype=np.int64)], axis=1).reshape(-1, 2)
    if len(out):
        out = out[np.lexsort((out[:, 1], out[:, 0]))]
    return out


# ---------------------------------------------------------------------------
# 1. crossing segments of a closed polyline on the sphere
#
# Points are unit 3-vectors; for planar curves pass normalized (X, Y, 1), which
# maps straight segments to great-circle arcs in the upper hemisphere.
# Arcs on a common great circle only "cross" through rounding noise in the
# sign tests; both endpoints within _COPLANAR of the other plane means skip.

_COPLANAR = 1e-12


def _arc_cross_numpy(P: np.ndarray, min_sep: int, block: int = 256) -> np.ndarray:
    n = len(P)
    Q = np.roll(P, -1, axis=0)
    N = np.cross(P, Q)
    M = P + Q
    ii, jj = [], []
    for start in range(0, n, block):
        i = np.arange(start, min(start + block, n))
        sc = N[i] @ P.T
        sd = N[i] @ Q.T
        sa = (P[i] @ N.T)
        sb = (Q[i] @ N.T)
        hemi = M[i] @ M.T
        j = np.arange(n)
        flat = _COPLANAR * np.linalg.norm(N[i], axis=1)[:, None]
        # half-open sign rule: a crossing through a vertex is counted exactly once
        mask = ((sc > 0) != (sd > 0)) & ((sa > 0) != (sb > 0)) & (hemi > 0)
        mask &= (np.abs(sc) > flat) | (np.abs(sd) > flat)
        mask &= j[None, :] > i[:, None]
        mask &= _circ(i[:, None], j[None, :], n) >= min_sep
        a, b = np.nonzero(mask)
        ii.append(i[a])
        jj.append(b)
    if not ii:
        return np.zeros((0, 2), dtype=np.int64)
    return _sorted_pairs(np.concatenate(ii), np.concatenate(jj))


if HAVE_NUMBA:

    @njit(cache=True)
    def _arc_cross_nb(P, min_sep):
        n = P.shape[0]
        N = np.empty_like(P)
        flat = np.empty(n)
        for i in range(n):
            k = (i + 1) % n
            N[i, 0] = P[i, 1] * P[k, 2] - P[i, 2] * P[k, 1]
            N[i, 1] = P[i, 2] * P[k, 0] - P[i, 0] * P[k, 2]
            N[i, 2] = P[i, 0] * P[k, 1] - P[i, 1] * P[k, 0]
            flat[i] = _COPLANAR * np.sqrt(N[i, 0] ** 2 + N[i, 1] ** 2 + N[i, 2] ** 2)
        cap = 64
        out = np.empty((cap, 2), dtype=np.int64)
        m = 0
        for i in range(n):
            i1 = (i + 1) % n
            for j in range(i + 1, n):
                d = j - i
                if n - d < d:
                    d = n - d
                if d < min_sep:
                    continue
                j1 = (j + 1) % n
                sc = N[i, 0] * P[j, 0] + N[i, 1] * P[j, 1] + N[i, 2] * P[j, 2]
                sd = N[i, 0] * P[j1, 0] + N[i, 1] * P[j1, 1] + N[i, 2] * P[j1, 2]
                if (sc > 0) == (sd > 0):
                    continue
                if abs(sc) <= flat[i] and abs(sd) <= flat[i]:
                    continue
                sa = N[j, 0] * P[i, 0] + N[j, 1] * P[i, 1] + N[j, 2] * P[i, 2]
                sb = N[j, 0] * P[i1, 0] + N[j, 1] * P[i1, 1] + N[j, 2] * P[i1, 2]
                if (sa > 0) == (sb > 0):
                    continue
                h = 0.0
                for c in range(3):
                    h += (P[i, c] + P[i1, c]) * (P[j, c] + P[j1, c])
                if h <= 0:
                    continue
                if m == cap:
                    cap *= 2
                    grown = np.empty((cap, 2), dtype=np.int64)
                    grown[:m] = out[:m]
                    out = grown
                out[m, 0] = i
                out[m, 1] = j
                m += 1
        return out[:m]


def arc_crossings(P: np.ndarray, min_sep: int) -> np.ndarray:
    """Index pairs ``(i, j)``, ``i < j``, whose arcs ``P[i]P[i+1]`` and
    ``P[j]P[j+1]`` cross transversally, with circular index gap ``>= min_sep``."""
    P = np.ascontiguousarray(P, dtype=np.float64)
    if backend() == "numba":
        return _sorted_pairs(*_arc_cross_nb(P, int(min_sep)).T)
    return _arc_cross_numpy(P, int(min_sep))


# ---------------------------------------------------------------------------
# 2. close point pairs (self-distance of a sampled space curve)


def _close_numpy(P: np.ndarray, min_sep: int, thresh: float, block: int = 256):
    n = len(P)
    best = np.inf
    best_pair = (-1, -1)
    ii, jj = [], []
    sq = np.einsum("ij,ij->i", P, P)
    j = np.arange(n)
    for start in range(0, n, block):
        i = np.arange(start, min(start + block, n))
        d2 = sq[i, None] + sq[None, :] - 2.0 * (P[i] @ P.T)
        valid = (j[None, :] > i[:, None]) & (_circ(i[:, None], j[None, :], n) >= min_sep)
        d2 = np.where(valid, d2, np.inf)
        k = np.argmin(d2)
        if d2.flat[k] < best:
            best = float(d2.flat[k])
            best_pair = (int(i[k // n]), int(k % n))
        a, b = np.nonzero(d2 < thresh * thresh)
        ii.append(i[a])
        jj.append(b)
    pairs = _sorted_pairs(np.concatenate(ii), np.concatenate(jj)) if ii else np.zeros((0, 2), np.int64)
    return np.sqrt(max(best, 0.0)), best_pair, pairs


if HAVE_NUMBA:

    @njit(cache=True)
    def _close_nb(P, min_sep, thresh):
        n = P.shape[0]
        t2 = thresh * thresh
        best = np.inf
        bi, bj = -1, -1
        cap = 64
        out = np.empty((cap, 2), dtype=np.int64)
        m = 0
        for i in range(n):
            for j in range(i + 1, n):
                d = j - i
                if n - d < d:
                    d = n - d
                if d < min_sep:
                    continue
                d2 = 0.0
                for c in range(3):
                    t = P[i, c] - P[j, c]
                    d2 += t * t
                if d2 < best:
                    best = d2
                    bi, bj = i, j
                if d2 < t2:
                    if m == cap:
                        cap *= 2
                        grown = np.empty((cap, 2), dtype=np.int64)
                        grown[:m] = out[:m]
                        out = grown
                    out[m, 0] = i
                    out[m, 1] = j
                    m += 1
        return np.sqrt(best), bi, bj, out[:m]


def close_pairs(P: np.ndarray, min_sep: int, thresh: float):
    """Minimum distance between samples at circular index gap ``>= min_sep``.

    Returns ``(min_dist, (i, j), pairs)`` where ``pairs`` lists every index
    pair closer than ``thresh``.
    """
    P = np.ascontiguousarray(P, dtype=np.float64)
    if backend() == "numba":
        d, i, j, pairs = _close_nb(P, int(min_sep), float(thresh))
        return float(d), (int(i), int(j)), _sorted_pairs(*pairs.T)
    return _close_numpy(P, int(min_sep), float(thresh))


# ---------------------------------------------------------------------------
# 3. parallel-chord cells for the crossing-width equation
#
# For a = X[p] - X[q] and b = U[q] - U[p] the solutions are the zeros of a x b.
# Near a zero that vector is almost orthogonal to a, so we project it on a
# basis of the plane orthogonal to a at the first cell corner and test whether
# the projection winds around the origin along the cell boundary.  Only cells
# with a . b > 0 (positive width) are kept.


def _basis(a):
    # any orthonormal pair spanning the plane orthogonal to a
    an = a / np.linalg.norm(a, axis=-1, keepdims=True)
    helper = np.where(np.abs(an[..., :1]) < 0.9, np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]))
    e1 = np.cross(an, helper)
    e1 /= np.linalg.norm(e1, axis=-1, keepdims=True)
    e2 = np.cross(an, e1)
    return e1, e2


def _wrap(d):
    return (d + np.pi) % (2.0 * np.pi) - np.pi


def _parallel_numpy(X, U, min_sep: int, block: int = 128):
    n = len(X)
    ii, jj = [], []
    jn = np.arange(n)
    jn1 = (jn + 1) % n
    for start in range(0, n, block):
        i = np.arange(start, min(start + block, n))
        i1 = (i + 1) % n
        a0 = X[i][:, None, :] - X[None, :, :]
        good = np.linalg.norm(a0, axis=2) > 0
        a0 = np.where(good[..., None], a0, 1.0)
        e1, e2 = _basis(a0)
        ang = []
        dots = []
        for p, q in ((i, jn), (i1, jn), (i1, jn1), (i, jn1)):
            b = U[q][None, :, :] - U[p][:, None, :]
            a = X[p][:, None, :] - X[q][None, :, :]
            c = np.cross(a, b)
            ang.append(np.arctan2(np.sum(c * e2, axis=2), np.sum(c * e1, axis=2)))
            dots.append(np.sum(a * b, axis=2))
        wind = sum(_wrap(ang[(k + 1) % 4] - ang[k]) for k in range(4))
        mask = (np.abs(wind) > np.pi) & good
        mask &= np.maximum.reduce(dots) > 0
        mask &= jn[None, :] > i[:, None]
        mask &= _circ(i[:, None], jn[None, :], n) >= min_sep
        a, b = np.nonzero(mask)
        ii.append(i[a])
        jj.append(b)
    if not ii:
        return np.zeros((0, 2), dtype=np.int64)
    return _sorted_pairs(np.concatenate(ii), np.concatenate(jj))


if HAVE_NUMBA:

    @njit(cache=True)
    def _wrap_nb(d):
        while d > np.pi:
            d -= 2.0 * np.pi
        while d < -np.pi:
            d += 2.0 * np.pi
        return d

    @njit(cache=True)
    def _parallel_nb(X, U, min_sep):
        n = X.shape[0]
        cap = 64
        out = np.empty((cap, 2), dtype=np.int64)
        m = 0
        ang = np.empty(4)
        ps = np.empty(4, dtype=np.int64)
        qs = np.empty(4, dtype=np.int64)
        for i in range(n):
            i1 = (i + 1) % n
            for j in range(i + 1, n):
                d = j - i
                if n - d < d:
                    d = n - d
                if d < min_sep:
                    continue
                j1 = (j + 1) % n
                a0x = X[i, 0] - X[j, 0]
                a0y = X[i, 1] - X[j, 1]
                a0z = X[i, 2] - X[j, 2]
                na = np.sqrt(a0x * a0x + a0y * a0y + a0z * a0z)
                if na == 0.0:
                    continue
                a0x /= na
                a0y /= na
                a0z /= na
                if abs(a0x) < 0.9:
                    hx, hy, hz = 1.0, 0.0, 0.0
                else:
                    hx, hy, hz = 0.0, 1.0, 0.0
                e1x = a0y * hz - a0z * hy
                e1y = a0z * hx - a0x * hz
                e1z = a0x * hy - a0y * hx
                ne = np.sqrt(e1x * e1x + e1y * e1y + e1z * e1z)
                e1x /= ne
                e1y /= ne
                e1z /= ne
                e2x = a0y * e1z - a0z * e1y
                e2y = a0z * e1x - a0x * e1z
                e2z = a0x * e1y - a0y * e1x
                ps[0], qs[0] = i, j
                ps[1], qs[1] = i1, j
                ps[2], qs[2] = i1, j1
                ps[3], qs[3] = i, j1
                maxdot = -np.inf
                c1 = np.empty(4)
                c2 = np.empty(4)
                for k in range(4):
                    p = ps[k]
                    q = qs[k]
                    bx = U[q, 0] - U[p, 0]
                    by = U[q, 1] - U[p, 1]
                    bz = U[q, 2] - U[p, 2]
                    ax = X[p, 0] - X[q, 0]
                    ay = X[p, 1] - X[q, 1]
                    az = X[p, 2] - X[q, 2]
                    cx = ay * bz - az * by
                    cy = az * bx - ax * bz
                    cz = ax * by - ay * bx
                    c1[k] = cx * e1x + cy * e1y + cz * e1z
                    c2[k] = cx * e2x + cy * e2y + cz * e2z
                    dt = ax * bx + ay * by + az * bz
                    if dt > maxdot:
                        maxdot = dt
                if maxdot <= 0:
                    continue
                # the origin can only be enclosed if both coordinates change sign
                if c1.min() > 0 or c1.max() < 0 or c2.min() > 0 or c2.max() < 0:
                    continue
                for k in range(4):
                    ang[k] = np.arctan2(c2[k], c1[k])
                w = 0.0
                for k in range(4):
                    w += _wrap_nb(ang[(k + 1) % 4] - ang[k])
                if abs(w) <= np.pi:
                    continue
                if m == cap:
                    cap *= 2
                    grown = np.empty((cap, 2), dtype=np.int64)
                    grown[:m] = out[:m]
                    out = grown
                out[m, 0] = i
                out[m, 1] = j
                m += 1
        return out[:m]


def parallel_chord_cells(X: np.ndarray, U: np.ndarray, min_sep: int) -> np.ndarray:
    """Cells ``[i, i+1] x [j, j+1]`` (``i < j``) containing a solution of
    ``X(s) - X(s') = R (U(s') - U(s))`` with ``R > 0``."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    U = np.ascontiguousarray(U, dtype=np.float64)
    if backend() == "numba":
        return _sorted_pairs(*_parallel_nb(X, U, int(min_sep)).T)
    return _parallel_numpy(X, U, int(min_sep))


def warmup() -> None:
    """Compile the numba kernels on tiny inputs."""
    if not HAVE_NUMBA:
        return
    t = np.linspace(0, 1, 16, endpoint=False)
    P = np.stack([np.cos(2 * np.pi * t), np.sin(2 * np.pi * t), np.ones_like(t)], axis=1)
    _arc_cross_nb(P, 2)
    _close_nb(P, 2, 0.1)
    _parallel_nb(P, P, 2)
