"""Quadrisecants and quadrisecant approximations of polygonal knots."""

__version__ = "0.1.0"

from .approximation import (
    ApproxPolygon,
    build_approximation,
    verify_corner_arc_property,
    verify_corner_triangles_disjoint,
)
from .errors import DegenerateError, QuadknotError
from .geom import PluckerLine, Plane3, Segment3, Tolerance, default_tolerance
from .harness import SamplerConfig, TheoremReport, run_batch, run_theorem_suite, sample_hexagonal_trefoil
from .invariants import KnotClass, classify_knot, project_to_diagram
from .knot import (
    HEXAGON_PATTERN,
    PolygonalKnot,
    classify_hexagon_pattern,
    disk_edge_intersections,
    load_knot,
    validate_general_position,
)
from .laurent import LaurentPoly
from .quadrisecants import (
    Quadrisecant,
    find_quadrisecants,
    plane_pair_quadrisecant,
    transversals_four_lines,
    transversals_four_segments,
)

__all__ = [
    "ApproxPolygon", "DegenerateError", "HEXAGON_PATTERN", "KnotClass", "LaurentPoly", "Plane3", "PluckerLine",
    "PolygonalKnot", "Quadrisecant", "QuadknotError", "SamplerConfig", "Segment3", "TheoremReport", "Tolerance",
    "build_approximation", "classify_hexagon_pattern", "classify_knot", "default_tolerance",
    "disk_edge_intersections", "find_quadrisecants", "load_knot", "plane_pair_quadrisecant", "project_to_diagram",
    "run_batch", "run_theorem_suite", "sample_hexagonal_trefoil", "transversals_four_lines",
    "transversals_four_segments", "validate_general_position", "verify_corner_arc_property",
    "verify_corner_triangles_disjoint",
]
