"""Combinatorial knot diagrams: signed Gauss codes and planar-diagram codes.

A signed Gauss code lists the crossing visits of an oriented knot diagram in
traversal order.  Each visit carries the crossing label, whether the strand
passes over (``O``) or under (``U``), and the crossing sign.  The sign
convention is the usual one: a crossing is positive when
``det[over tangent, under tangent, viewer direction] > 0``.

PD codes follow the ``X(a, b, c, d)`` convention: arcs listed counterclockwise
starting from the incoming under-arc.  Arcs are numbered ``1..2k`` along the
orientation, arc ``i`` ending at visit ``i`` (mod ``2k``).
"""

from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import CodeParseError, NonRealizableCode

_TOKEN_RE = re.compile(r"^([OU])(\d+)([+-])$")
_PD_RE = re.compile(r"X\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)")


class Token(NamedTuple):
    label: int
    over: bool
    sign: int

    def __str__(self) -> str:
        return f"{'O' if self.over else 'U'}{self.label}{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class SignedGaussCode:
    """Cyclic sequence of crossing visits.  Empty code means the unknot diagram."""

    tokens: tuple[Token, ...] = ()

    def __post_init__(self):
        toks = tuple(Token(int(t[0]), bool(t[1]), int(t[2])) for t in self.tokens)
        object.__setattr__(self, "tokens", toks)
        seen: dict[int, list[Token]] = {}
        for t in toks:
            if t.label <= 0:
                raise CodeParseError(f"labels must be positive, got {t.label}")
            if t.sign not in (1, -1):
                raise CodeParseError(f"sign must be +1 or -1, got {t.sign}")
            seen.setdefault(t.label, []).append(t)
        for label, occ in seen.items():
            if len(occ) != 2:
                raise CodeParseError(f"label {label} appears {len(occ)} times")
            if occ[0].over == occ[1].over:
                raise CodeParseError(f"label {label} must be visited once over and once under")
            if occ[0].sign != occ[1].sign:
                raise CodeParseError(f"label {label} has inconsistent handedness")

    @classmethod
    def parse(cls, text: str) -> "SignedGaussCode":
        text = text.strip()
        if not text:
            return cls(())
        tokens = []
        for word in text.replace(",", " ").split():
            m = _TOKEN_RE.match(word)
            if m is None:
                raise CodeParseError(f"bad token {word!r}")
            tokens.append(Token(int(m.group(2)), m.group(1) == "O", 1 if m.group(3) == "+" else -1))
        return cls(tuple(tokens))

    def __str__(self) -> str:
        return " ".join(str(t) for t in self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def crossing_count(self) -> int:
        return len(self.tokens) // 2

    @property
    def labels(self) -> list[int]:
        out: list[int] = []
        for t in self.tokens:
            if t.label not in out:
                out.append(t.label)
        return out

    @property
    def writhe(self) -> int:
        return sum(t.sign for t in self.tokens) // 2

    def signs(self) -> dict[int, int]:
        return {t.label: t.sign for t in self.tokens}

    def rotated(self, shift: int) -> "SignedGaussCode":
        if not self.tokens:
            return self
        shift %= len(self.tokens)
        return SignedGaussCode(self.tokens[shift:] + self.tokens[:shift])

    def relabeled(self) -> "SignedGaussCode":
        """Relabel crossings 1..k in order of first appearance."""
        mapping: dict[int, int] = {}
        for t in self.tokens:
            mapping.setdefault(t.label, len(mapping) + 1)
        return SignedGaussCode(tuple(Token(mapping[t.label], t.over, t.sign) for t in self.tokens))

    def mirror(self) -> "SignedGaussCode":
        return SignedGaussCode(tuple(Token(t.label, not t.over, -t.sign) for t in self.tokens))

    def reversed(self) -> "SignedGaussCode":
        return SignedGaussCode(tuple(reversed(self.tokens)))

    def canonical(self) -> "SignedGaussCode":
        """Lexicographically minimal relabeled rotation (orientation is kept)."""
        if not self.tokens:
            return self
        best = None
        for r in range(len(self.tokens)):
            cand = self.rotated(r).relabeled()
            key = _key(cand)
            if best is None or key < best[0]:
                best = (key, cand)
        return best[1]

    def canonical_text(self) -> str:
        return str(self.canonical())


def _key(code: SignedGaussCode) -> tuple:
    return tuple((t.label, 0 if t.over else 1, -t.sign) for t in code.tokens)


def same_diagram(a: SignedGaussCode, b: SignedGaussCode) -> bool:
    return a.canonical().tokens == b.canonical().tokens


@dataclass(frozen=True)
class PDCode:
    """Planar diagram: one ``(a, b, c, d)`` tuple per crossing plus its sign."""

    crossings: tuple[tuple[int, int, int, int], ...] = ()
    signs: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(tuple(int(v) for v in x) for x in self.crossings))
        if not self.signs:
            object.__setattr__(self, "signs", tuple(_infer_sign(x, 2 * len(self.crossings)) for x in self.crossings))
        else:
            object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        counts = Counter(v for x in self.crossings for v in x)
        if any(c != 2 for c in counts.values()):
            raise NonRealizableCode("every arc label must appear exactly twice")

    def __len__(self) -> int:
        return len(self.crossings)

    def __str__(self) -> str:
        return " ".join(f"X({a},{b},{c},{d})" for a, b, c, d in self.crossings)

    @classmethod
    def parse(cls, text: str) -> "PDCode":
        found = _PD_RE.findall(text)
        return cls(tuple(tuple(int(v) for v in f) for f in found))

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    def mirror(self) -> "PDCode":
        out = []
        for (a, b, c, d), s in zip(self.crossings, self.signs):
            # the old over strand becomes the under strand; keep the ccw order
            out.append((d, a, b, c) if s > 0 else (b, c, d, a))
        return PDCode(tuple(out), tuple(-s for s in self.signs))


def _infer_sign(x: Sequence[int], n_arcs: int) -> int:
    a, b, c, d = x
    nxt = lambda v: v % n_arcs + 1  # noqa: E731
    if nxt(d) == b and nxt(b) != d:
        return 1
    if nxt(b) == d and nxt(d) != b:
        return -1
    raise CodeParseError(f"cannot infer the sign of X{tuple(x)}; pass signs explicitly")


def parse_pd(text: str) -> PDCode:
    return PDCode.parse(text)


# ---------------------------------------------------------------------------
# Gauss -> PD


def _pd_unchecked(code: SignedGaussCode) -> PDCode:
    n = len(code.tokens)
    visits: dict[int, dict[bool, int]] = {}
    for i, t in enumerate(code.tokens):
        visits.setdefault(t.label, {})[t.over] = i
    arc_in = lambda i: (i - 1) % n + 1  # noqa: E731
    arc_out = lambda i: i % n + 1  # noqa: E731
    crossings, signs = [], []
    for label in sorted(visits):
        u, o = visits[label][False], visits[label][True]
        sign = code.tokens[u].sign
        if sign > 0:
            crossings.append((arc_in(u), arc_out(o), arc_out(u), arc_in(o)))
        else:
            crossings.append((arc_in(u), arc_in(o), arc_out(u), arc_out(o)))
        signs.append(sign)
    return PDCode(tuple(crossings), tuple(signs))


def pd_faces(pd: PDCode) -> list[list[tuple[int, int]]]:
    """Faces of the diagram as cycles of corners ``(crossing, position)``.

    Corner ``(c, p)`` is the sector between positions ``p`` and ``p+1``
    (counterclockwise) at crossing ``c``.
    """
    slots: dict[int, list[tuple[int, int]]] = {}
    for ci, x in enumerate(pd.crossings):
        for p, arc in enumerate(x):
            slots.setdefault(arc, []).append((ci, p))

    def other(ci: int, p: int) -> tuple[int, int]:
        a, b = slots[pd.crossings[ci][p]]
        return b if a == (ci, p) else a

    seen: set[tuple[int, int]] = set()
    faces = []
    for ci in range(len(pd.crossings)):
        for p in range(4):
            if (ci, p) in seen:
                continue
            face = []
            cur = (ci, p)
            while cur not in seen:
                seen.add(cur)
                face.append(cur)
                cur = other(cur[0], (cur[1] + 1) % 4)
            faces.append(face)
    return faces


def is_planar(pd: PDCode) -> bool:
    k = len(pd.crossings)
    return k == 0 or len(pd_faces(pd)) == k + 2


def gauss_to_pd(code: SignedGaussCode) -> PDCode:
    """PD code of a realizable signed Gauss code.

    Raises :class:`NonRealizableCode` when the implied rotation system is not
    planar (Euler characteristic check on the traced faces).
    """
    pd = _pd_unchecked(code)
    if not is_planar(pd):
        raise NonRealizableCode(f"code {code} does not describe a planar diagram")
    return pd


def is_realizable(code: SignedGaussCode) -> bool:
    return is_planar(_pd_unchecked(code))


def checkerboard(pd: PDCode) -> tuple[list[list[tuple[int, int]]], list[int]]:
    """Faces plus a proper two-colouring (0/1) of them."""
    faces = pd_faces(pd)
    corner_face = {c: fi for fi, f in enumerate(faces) for c in f}
    adj: dict[int, set[int]] = {i: set() for i in range(len(faces))}
    for ci in range(len(pd.crossings)):
        for p in range(4):
            f1, f2 = corner_face[(ci, (p - 1) % 4)], corner_face[(ci, p)]
            adj[f1].add(f2)
            adj[f2].add(f1)
    colour = [-1] * len(faces)
    for start in range(len(faces)):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            f = queue.popleft()
            for g in adj[f]:
                if colour[g] < 0:
                    colour[g] = 1 - colour[f]
                    queue.append(g)
                elif colour[g] == colour[f]:
                    raise NonRealizableCode("faces are not two-colourable")
    return faces, colour


# ---------------------------------------------------------------------------
# Reidemeister simplification on Gauss codes


def _r1_once(tokens: list[Token]) -> list[Token] | None:
    n = len(tokens)
    for i in range(n):
        j = (i + 1) % n
        if i != j and tokens[i].label == tokens[j].label:
            return [t for idx, t in enumerate(tokens) if idx not in (i, j)]
    return None


def _r2_once(tokens: list[Token]) -> list[Token] | None:
    n = len(tokens)
    if n < 4:
        return None
    pos: dict[int, list[int]] = {}
    for i, t in enumerate(tokens):
        pos.setdefault(t.label, []).append(i)
    adjacent_pairs = {}
    for i in range(n):
        j = (i + 1) % n
        a, b = tokens[i], tokens[j]
        if a.label != b.label and a.over == b.over:
            adjacent_pairs.setdefault(frozenset((a.label, b.label)), []).append((i, j))
    for labels, places in adjacent_pairs.items():
        if len(places) < 2:
            continue
        la, lb = tuple(labels)
        if tokens[pos[la][0]].sign == tokens[pos[lb][0]].sign:
            continue
        for x in range(len(places)):
            for y in range(x + 1, len(places)):
                p, q = places[x], places[y]
                if tokens[p[0]].over == tokens[q[0]].over:
                    continue
                drop = set(p) | set(q)
                if len(drop) != 4:
                    continue
                cand = [t for idx, t in enumerate(tokens) if idx not in drop]
                if not cand or is_realizable(SignedGaussCode(tuple(cand))):
                    return cand
    return None


def reidemeister_reduce(code: SignedGaussCode) -> SignedGaussCode:
    """Greedily remove R1 kinks and R2 bigons until none is visible in the code."""
    tokens = list(code.tokens)
    while tokens:
        nxt = _r1_once(tokens)
        if nxt is None:
            nxt = _r2_once(tokens)
        if nxt is None:
            break
        tokens = nxt
    return SignedGaussCode(tuple(tokens))


# ---------------------------------------------------------------------------
# Closed braids, a convenient source of realizable fixtures


def braid_closure_code(word: Iterable[int], strands: int | None = None) -> SignedGaussCode:
    """Signed Gauss code of the closure of a braid word.

    ``word`` holds signed generator indices: ``+i`` is sigma_i (the strand in
    position ``i`` crosses over the one in ``i+1``), ``-i`` its inverse.  The
    closure must be a knot (one component).
    """
    word = [int(g) for g in word]
    if any(g == 0 for g in word):
        raise CodeParseError("braid generators are nonzero integers")
    n = strands or (max(abs(g) for g in word) + 1 if word else 1)
    tokens: list[Token] = []
    pos, start = 0, 0
    visited_starts = set()
    while True:
        visited_starts.add(pos)
        for m, g in enumerate(word):
            i = abs(g) - 1
            if pos == i or pos == i + 1:
                from_left = pos == i
                over = from_left if g > 0 else not from_left
                tokens.append(Token(m + 1, over, 1 if g > 0 else -1))
                pos = i + 1 if from_left else i
        if pos == start:
            break
    if len(visited_starts) != n or len(tokens) != 2 * len(word):
        raise CodeParseError("braid closure has more than one component")
    return SignedGaussCode(tuple(tokens))
