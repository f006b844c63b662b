"""Exact knot invariants computed from PD codes.

Everything here is integer arithmetic.  The Jones polynomial is stored in the
variable ``q = t**(1/4)`` so exponents are integers; ``{4: 1, 12: 1, 16: -1}``
means ``t + t^3 - t^4``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import isqrt
from typing import Mapping

from .codes import PDCode, SignedGaussCode, checkerboard, gauss_to_pd, reidemeister_reduce
from .errors import TooManyCrossings

MAX_STATE_SUM_CROSSINGS = 16


@dataclass(frozen=True)
class LaurentPoly:
    """Laurent polynomial with integer coefficients, stored sparsely."""

    coeffs: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(e): int(c) for e, c in dict(self.coeffs).items() if int(c) != 0}
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def monomial(cls, exp: int, coef: int = 1) -> "LaurentPoly":
        return cls({exp: coef})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self.coeffs.items()})
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative powers are only defined for monomials; use shift")
        out = LaurentPoly.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs.items()))

    def __repr__(self) -> str:
        return f"LaurentPoly({self.coeffs})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in self.coeffs.items():
            parts.append(f"{c:+d}" if e == 0 else f"{c:+d}*q^{e}")
        return " ".join(parts)

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: c for e, c in self.coeffs.items()})

    def negate_exponents(self) -> "LaurentPoly":
        return LaurentPoly({-e: c for e, c in self.coeffs.items()})

    def is_palindromic(self) -> bool:
        return self == self.negate_exponents()

    def to_json(self) -> dict[str, int]:
        return {str(e): c for e, c in self.coeffs.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> "LaurentPoly":
        return cls({int(e): int(c) for e, c in data.items()})


# ---------------------------------------------------------------------------
# Kauffman bracket


def _check_size(pd: PDCode) -> None:
    if len(pd.crossings) > MAX_STATE_SUM_CROSSINGS:
        raise TooManyCrossings(f"{len(pd.crossings)} crossings exceeds the state-sum bound {MAX_STATE_SUM_CROSSINGS}")


def _find(parent: list[int], i: int) -> int:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def state_counts(pd: PDCode) -> dict[tuple[int, int], int]:
    """Histogram of states keyed by ``(#A - #B, loops)``.

    The A-smoothing of ``X(a,b,c,d)`` joins ``a`` with ``b`` and ``c`` with ``d``.
    """
    _check_size(pd)
    k = len(pd.crossings)
    arcs = sorted({v for x in pd.crossings for v in x})
    index = {a: i for i, a in enumerate(arcs)}
    xs = [tuple(index[v] for v in x) for x in pd.crossings]
    n = len(arcs)
    hist: dict[tuple[int, int], int] = {}
    for state in range(1 << k):
        parent = list(range(n))
        n_a = 0
        for j, (a, b, c, d) in enumerate(xs):
            if (state >> j) & 1:
                pairs = ((a, d), (b, c))
            else:
                n_a += 1
                pairs = ((a, b), (c, d))
            for p, q in pairs:
                rp, rq = _find(parent, p), _find(parent, q)
                if rp != rq:
                    parent[rp] = rq
        loops = sum(1 for i in range(n) if _find(parent, i) == i)
        key = (2 * n_a - k, loops)
        hist[key] = hist.get(key, 0) + 1
    return hist


def kauffman_bracket(pd: PDCode) -> LaurentPoly:
    """Bracket polynomial in ``A`` with ``<O> = 1``."""
    if not pd.crossings:
        return LaurentPoly.one()
    delta = LaurentPoly({2: -1, -2: -1})
    powers = [LaurentPoly.one()]
    out = LaurentPoly()
    for (diff, loops), count in state_counts(pd).items():
        while len(powers) < loops:
            powers.append(powers[-1] * delta)
        out = out + powers[loops - 1].shift(diff) * count
    return out


def jones(pd: PDCode, writhe: int | None = None) -> LaurentPoly:
    """Jones polynomial in ``q = t^(1/4)``.

    ``V = (-A^3)^(-w) <K>`` with ``A = t^(-1/4) = q^(-1)``.
    """
    if writhe is None:
        writhe = pd.writhe
    bracket = kauffman_bracket(pd)
    normalized = bracket.shift(-3 * writhe) * (-1 if writhe % 2 else 1)
    return normalized.negate_exponents()


def determinant(pd: PDCode) -> int:
    """``|<K>(A)|`` at a primitive 8th root of unity, via Gaussian integers.

    The bracket's exponents are congruent mod 4, so after factoring out the
    lowest power every term is a power of ``i``.
    """
    if not pd.crossings:
        return 1
    bracket = kauffman_bracket(pd)
    exps = list(bracket.coeffs)
    base = exps[0]
    re = im = 0
    for e, c in bracket.coeffs.items():
        if (e - base) % 2:
            raise ValueError("bracket exponents have mixed parity")
        r = ((e - base) // 2) % 4
        if r == 0:
            re += c
        elif r == 1:
            im += c
        elif r == 2:
            re -= c
        else:
            im -= c
    norm2 = re * re + im * im
    root = isqrt(norm2)
    if root * root != norm2:
        raise ValueError("bracket evaluation is not a Gaussian integer of integral norm")
    return root


# ---------------------------------------------------------------------------
# Goeritz matrix (independent determinant oracle)


def _bareiss(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def goeritz_matrix(pd: PDCode) -> list[list[int]]:
    """Goeritz matrix on the faces of colour 0 of the checkerboard colouring."""
    faces, colour = checkerboard(pd)
    corner_face = {c: fi for fi, f in enumerate(faces) for c in f}
    white = [fi for fi in range(len(faces)) if colour[fi] == 0]
    pos = {f: i for i, f in enumerate(white)}
    n = len(white)
    g = [[0] * n for _ in range(n)]
    for ci in range(len(pd.crossings)):
        # corners 0 and 2 sit counterclockwise after an under-arc
        if colour[corner_face[(ci, 0)]] == 0:
            f1, f2, eta = corner_face[(ci, 0)], corner_face[(ci, 2)], -1
        else:
            f1, f2, eta = corner_face[(ci, 1)], corner_face[(ci, 3)], 1
        if f1 == f2:
            continue
        i, j = pos[f1], pos[f2]
        g[i][j] -= eta
        g[j][i] -= eta
    for i in range(n):
        g[i][i] = -sum(g[i][j] for j in range(n) if j != i)
    return g


def goeritz_determinant(pd: PDCode) -> int:
    if not pd.crossings:
        return 1
    g = goeritz_matrix(pd)
    minor = [row[1:] for row in g[1:]]
    return abs(_bareiss(minor))


# ---------------------------------------------------------------------------
# Profiles


@dataclass(frozen=True)
class InvariantProfile:
    crossing_count_reduced: int
    determinant: int
    jones: LaurentPoly
    writhe: int

    def to_json(self) -> dict:
        return {
            "crossings": self.crossing_count_reduced,
            "determinant": self.determinant,
            "jones": self.jones.to_json(),
            "writhe": self.writhe,
        }


class Comparison(str, enum.Enum):
    DISTINCT = "distinct"
    INDISTINGUISHABLE = "indistinguishable"


def profile(code: SignedGaussCode) -> InvariantProfile:
    reduced = reidemeister_reduce(code)
    pd = gauss_to_pd(reduced)
    return InvariantProfile(
        crossing_count_reduced=reduced.crossing_count,
        determinant=determinant(pd),
        jones=jones(pd, reduced.writhe),
        writhe=reduced.writhe,
    )


def same_knot_type(a: InvariantProfile, b: InvariantProfile) -> Comparison:
    """Compare knot-type invariants only.

    Crossing count and writhe depend on the diagram, so they are reported but
    never used to separate knot types.
    """
    if a.determinant != b.determinant or a.jones != b.jones:
        return Comparison.DISTINCT
    return Comparison.INDISTINGUISHABLE
