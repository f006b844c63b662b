"""Constant-width ribbons on smooth closed curves.

A ribbon frame is a closed space curve ``x`` with a unit field ``u`` along it.
The package locates the widths at which the outer edge ``x + R u`` fails to
be embedded, detects the goal-post configurations that keep those widths
unbounded, predicts the limiting knot type of the outer edge from the
spherical curve ``u``, and constructs frames with prescribed base and
limiting knots.
"""

from .codes import PDCode, SignedGaussCode, Token, gauss_to_pd, is_realizable, reidemeister_reduce
from .constructor import (UNKNOT, ArcDiagram, LayoutPlan, build_base, build_field, build_frame, construct,
                          hamiltonian_arc_check)
from .curves import (ClosedCurve3, RibbonFrame, SphericalCurve, ToleranceSet, ValidationReport, outer_edge,
                     rescaled_edge, validate_frame)
from .diagram import RADIAL, all_resolutions, gauss_from_spatial, limiting_resolution, planar_code
from .errors import RibbonError, ValidationError
from .intersect import (UNBOUNDED, crossing_widths, detect_goalposts, edge_embedded, remove_goalposts,
                        sphere_double_points, stabilization_width)
from .invariants import InvariantProfile, LaurentPoly, determinant, jones, kauffman_bracket, profile, same_knot_type

__version__ = "0.1.0"

__all__ = [
    "ArcDiagram", "ClosedCurve3", "InvariantProfile", "LaurentPoly", "LayoutPlan", "PDCode", "RADIAL",
    "RibbonError", "RibbonFrame", "SignedGaussCode", "SphericalCurve", "Token", "ToleranceSet", "UNBOUNDED",
    "UNKNOT", "ValidationError", "ValidationReport", "all_resolutions", "build_base", "build_field",
    "build_frame", "construct", "crossing_widths", "detect_goalposts", "determinant", "edge_embedded",
    "gauss_from_spatial", "gauss_to_pd", "hamiltonian_arc_check", "is_realizable", "jones",
    "kauffman_bracket", "limiting_resolution", "outer_edge", "planar_code", "profile", "reidemeister_reduce",
    "remove_goalposts", "rescaled_edge", "same_knot_type", "sphere_double_points", "stabilization_width",
    "validate_frame",
]
