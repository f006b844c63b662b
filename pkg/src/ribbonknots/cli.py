"""Command-line front end: ``ribbon <subcommand> ...``.

Machine output is JSON on standard output (SVG or CSV for ``plot``).
Exit codes: 0 success, 1 I/O or parse error, 2 validation failure.
``RIBBON_GRID_N`` overrides the grid size stored in frame files.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import fixtures
from .codes import SignedGaussCode
from .constructor import UNKNOT, construct
from .curves import ClosedCurve3, RibbonFrame, outer_edge, validate_frame
from .diagram import gauss_from_spatial, limiting_resolution
from .errors import CodeParseError, RibbonError
from .intersect import (UNBOUNDED, crossing_widths, detect_goalposts, edge_embedded, sphere_double_points,
                        stabilization_width)
from .invariants import profile

EXIT_OK, EXIT_IO, EXIT_INVALID = 0, 1, 2
SWEEP_FACTORS = (1.5, 3.0, 6.0, 12.0)
FIXTURE_PREFIX = "fixture:"


class _InputError(Exception):
    pass


class _Invalid(Exception):
    """Raised after the JSON payload was printed, to set exit code 2."""


def _grid_override() -> int | None:
    raw = os.environ.get("RIBBON_GRID_N")
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise _InputError(f"RIBBON_GRID_N must be an integer, got {raw!r}") from exc


def load_frame(spec: str) -> RibbonFrame:
    """Frame from a JSON file or from ``fixture:<name>``."""
    grid = _grid_override()
    if spec.startswith(FIXTURE_PREFIX):
        name = spec[len(FIXTURE_PREFIX):]
        table = {**fixtures.bundled_frames(), "goal-post": fixtures.goalpost_frame()}
        if name not in table:
            raise _InputError(f"unknown fixture {name!r}; choose from {sorted(table)}")
        frame = table[name]
        return frame.with_grid(grid) if grid else frame
    try:
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _InputError(f"cannot read {spec}: {exc.strerror or exc}") from exc
    try:
        return RibbonFrame.loads(text, grid)
    except (ValueError, KeyError, TypeError) as exc:
        raise _InputError(f"{spec} is not a frame file: {exc}") from exc


def _load_k1(spec: str):
    if spec == UNKNOT:
        return UNKNOT
    if spec == "trefoil":
        return fixtures.trefoil_curve()
    try:
        with open(spec, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise _InputError(f"cannot read {spec}: {exc.strerror or exc}") from exc
    except ValueError as exc:
        raise _InputError(f"{spec} is not JSON: {exc}") from exc
    try:
        if "x" in data:
            return ClosedCurve3.from_json(data["x"])
        return ClosedCurve3.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise _InputError(f"{spec} holds neither a frame nor a curve: {exc}") from exc


def _num(v):
    if v is UNBOUNDED:
        return "unbounded"
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=1) + "\n")


# ---------------------------------------------------------------------------
# Sweep


@dataclass(frozen=True)
class SweepReport:
    radii: tuple[float, ...]
    embedded: tuple[bool, ...]
    code: tuple[str, ...]
    r_star: float
    stable_from: float

    def to_json(self) -> dict:
        return {"radii": list(self.radii), "embedded": list(self.embedded), "code": list(self.code),
                "r_star": _num(self.r_star), "stable_from": _num(self.stable_from)}


def _edge_code(frame: RibbonFrame, R: float) -> tuple[bool, str]:
    check = edge_embedded(frame, R)
    if not check.embedded:
        return False, ""
    try:
        code = gauss_from_spatial(outer_edge(frame, R), grid_n=frame.grid_n, tol=frame.tol)
    except RibbonError:
        return True, "nongeneric"
    return True, code.canonical_text()


def sweep(frame: RibbonFrame, radii: Sequence[float] | None = None, workers: int = 4) -> SweepReport:
    """Embedding and canonical radial code of ``Y_R`` over a ladder of widths."""
    r_star = stabilization_width(frame)
    rs = math.inf if r_star is UNBOUNDED else float(r_star)
    if radii is None:
        base = 1.0 if not math.isfinite(rs) else max(rs, 1.0)
        radii = [f * base for f in SWEEP_FACTORS]
    radii = sorted(float(r) for r in radii)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda R: _edge_code(frame, R), radii))
    embedded = tuple(r[0] for r in results)
    codes = tuple(r[1] for r in results)
    stable = math.inf
    if codes and embedded[-1]:
        i = len(codes) - 1
        while i > 0 and embedded[i - 1] and codes[i - 1] == codes[-1]:
            i -= 1
        stable = max(radii[i], rs) if math.isfinite(rs) else math.inf
    return SweepReport(tuple(radii), embedded, codes, rs, stable)


# ---------------------------------------------------------------------------
# Plots


def _svg_polyline(points: np.ndarray, stroke: str = "black") -> str:
    pts = " ".join(f"{x:.3f},{y:.3f}" for x, y in points)
    return f'<polyline fill="none" stroke="{stroke}" stroke-width="1" points="{pts}"/>'


def _svg_document(body: list[str], size: int = 400) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}">')
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _azimuthal(P: np.ndarray, size: int) -> np.ndarray:
    """Azimuthal equidistant map about the north pole, scaled to the canvas."""
    polar = np.arccos(np.clip(P[:, 2], -1.0, 1.0))
    lon = np.arctan2(P[:, 1], P[:, 0])
    r = polar / math.pi * (0.45 * size)
    return np.column_stack([0.5 * size + r * np.cos(lon), 0.5 * size - r * np.sin(lon)])


def _split_jumps(xy: np.ndarray, limit: float) -> list[np.ndarray]:
    jumps = np.nonzero(np.linalg.norm(np.diff(xy, axis=0), axis=1) > limit)[0]
    return [seg for seg in np.split(xy, jumps + 1) if len(seg) > 1]


def plot_diagram(frame: RibbonFrame, size: int = 400) -> str:
    n = frame.grid_n
    P = frame.field.sample(n)
    P = np.vstack([P, P[:1]])
    xy = _azimuthal(P, size)
    body = [_svg_polyline(seg) for seg in _split_jumps(xy, 0.25 * size)]
    dps = sphere_double_points(frame.field, frame.tol, n)
    marks = _azimuthal(np.array([d.point for d in dps]).reshape(-1, 3), size)
    for i, (x, y) in enumerate(marks, start=1):
        body.append(f'<circle class="crossing" cx="{x:.3f}" cy="{y:.3f}" r="3" fill="red"/>')
        body.append(f'<text x="{x + 4:.3f}" y="{y - 4:.3f}" font-size="10">{i}</text>')
    return _svg_document(body, size)


def plot_curve(curve: ClosedCurve3, n: int = 2048, size: int = 400,
               direction=(0.0, 0.0, 1.0)) -> str:
    d = np.asarray(direction, dtype=float)
    d /= np.linalg.norm(d)
    e1 = np.cross(d, [1.0, 0.0, 0.0] if abs(d[0]) < 0.9 else [0.0, 1.0, 0.0])
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(d, e1)
    P = curve.sample(n)
    P = np.vstack([P, P[:1]])
    q = P @ np.stack([e1, e2]).T
    c = 0.5 * (q.max(axis=0) + q.min(axis=0))
    scale = 0.45 * size / max(float(np.abs(q - c).max()), 1e-12)
    xy = np.column_stack([0.5 * size + (q[:, 0] - c[0]) * scale, 0.5 * size - (q[:, 1] - c[1]) * scale])
    return _svg_document([_svg_polyline(xy)], size)


def sweep_samples(frame: RibbonFrame, count: int = 16) -> list[tuple[float, bool, float]]:
    r_star = stabilization_width(frame)
    top = 12.0 * (1.0 if r_star is UNBOUNDED else max(float(r_star), 1.0))
    radii = np.geomspace(top / 100.0, top, count)
    out = []
    for R in radii:
        chk = edge_embedded(frame, float(R))
        out.append((float(R), bool(chk.embedded), float(chk.min_gap)))
    return out


def plot_sweep_csv(frame: RibbonFrame, count: int = 16) -> str:
    buf = io.StringIO()
    buf.write("R,embedded,min_gap\n")
    for R, emb, gap in sweep_samples(frame, count):
        buf.write(f"{R:.12g},{int(emb)},{gap:.12g}\n")
    return buf.getvalue()


def plot(frame: RibbonFrame, what: str) -> str:
    """SVG (``diagram``, ``curve``) or CSV (``sweep``) text."""
    if what == "diagram":
        return plot_diagram(frame)
    if what == "curve":
        return plot_curve(frame.base)
    if what == "sweep":
        return plot_sweep_csv(frame)
    raise ValueError(f"unknown plot {what!r}")


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_validate(args) -> None:
    rep = validate_frame(load_frame(args.frame))
    _emit(rep.to_json())
    if not rep.ok:
        raise _Invalid


def _cmd_goalposts(args) -> None:
    frame = load_frame(args.frame)
    gps = detect_goalposts(frame)
    _emit({"goal_posts": [g.to_json() for g in gps], "unbounded": bool(gps)})


def _cmd_rstar(args) -> None:
    frame = load_frame(args.frame)
    r = stabilization_width(frame)
    payload = {"r_star": _num(r), "unbounded": r is UNBOUNDED}
    if r is not UNBOUNDED:
        payload["crossing_widths"] = [c.to_json() for c in crossing_widths(frame)]
    _emit(payload)


def _cmd_limit(args) -> None:
    frame = load_frame(args.frame)
    code = limiting_resolution(frame)
    _emit({"code": str(code), "canonical": code.canonical_text(), "profile": profile(code).to_json()})


def _cmd_sweep(args) -> None:
    frame = load_frame(args.frame)
    _emit(sweep(frame, args.radii).to_json())


def _cmd_construct(args) -> None:
    k1 = _load_k1(args.k1)
    code = SignedGaussCode.parse(args.k2)
    grid = _grid_override() or args.grid_n
    frame, rep = construct(k1, code, grid)
    r = stabilization_width(frame)
    payload = rep.to_json()
    payload["r_star"] = _num(r)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(frame.dumps() + "\n")
        except OSError as exc:
            raise _InputError(f"cannot write {args.out}: {exc.strerror or exc}") from exc
    else:
        payload["frame"] = frame.to_json()
    _emit(payload)


def _cmd_identify(args) -> None:
    code = SignedGaussCode.parse(args.code)
    _emit({"code": str(code), **profile(code).to_json()})


def _cmd_plot(args) -> None:
    text = plot(load_frame(args.frame), args.what)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise _InputError(f"cannot write {args.out}: {exc.strerror or exc}") from exc
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ribbon", description="Wide ribbons on knots.")
    sub = p.add_subparsers(dest="command", required=True)
    frame_help = "frame JSON file, or fixture:<name>"
    for name, fn, desc in [("validate", _cmd_validate, "check the genericity conditions"),
                           ("goalposts", _cmd_goalposts, "list goal posts"),
                           ("rstar", _cmd_rstar, "stabilization width"),
                           ("limit-knot", _cmd_limit, "limiting resolution and its invariants")]:
        sp = sub.add_parser(name, help=desc)
        sp.add_argument("frame", help=frame_help)
        sp.set_defaults(func=fn)
    sp = sub.add_parser("sweep", help="outer-edge codes over a ladder of widths")
    sp.add_argument("frame", help=frame_help)
    sp.add_argument("--radii", type=float, nargs="+", default=None)
    sp.set_defaults(func=_cmd_sweep)
    sp = sub.add_parser("construct", help="build a frame from a base knot and a target diagram")
    sp.add_argument("--k1", default=UNKNOT, help="'unknot', 'trefoil', or a frame/curve JSON file")
    sp.add_argument("--k2", required=True, help="signed Gauss code of the target knot")
    sp.add_argument("--out", default=None)
    sp.add_argument("--grid-n", type=int, default=4096)
    sp.set_defaults(func=_cmd_construct)
    sp = sub.add_parser("identify", help="invariants of a signed Gauss code")
    sp.add_argument("code")
    sp.set_defaults(func=_cmd_identify)
    sp = sub.add_parser("plot", help="SVG or CSV figure")
    sp.add_argument("frame", help=frame_help)
    sp.add_argument("--what", choices=["diagram", "sweep", "curve"], default="diagram")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_plot)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_IO
    try:
        args.func(args)
    except _Invalid:
        return EXIT_INVALID
    except (_InputError, CodeParseError) as exc:
        print(f"ribbon: {exc}", file=sys.stderr)
        return EXIT_IO
    except RibbonError as exc:
        print(f"ribbon: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
