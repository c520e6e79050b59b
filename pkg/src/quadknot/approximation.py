"""The quadrisecant approximation of a polygonal knot.

The points where the quadrisecants meet the knot cut it into subarcs;
replacing every subarc by the straight segment between its endpoints gives
a closed polygon, the approximation.  For a hexagonal trefoil it is a
12-gon whose edges alternate between ``O_i`` (a piece of edge ``i``) and
``N_i`` (a chord cutting the corner at vertex ``i``).

The corner checks below certify that the approximation is isotopic to the
knot: at every vertex the corner triangle cut off by the chord is disjoint
from the knot and from every other corner triangle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateError, EmptyError, PropertyViolated, SelfIntersectionError
from .geom import Tolerance, _tol, segment_triangle_intersect, triangles_intersect
from .knot import PolygonalKnot, embedding_violation
from .quadrisecants import Quadrisecant, SecantPoint


@dataclass
class ApproxPolygon:
    vertices: list  # SecantPoints in knot order
    labels: list  # per edge k (vertex k -> k+1): ("O", edge) or ("N", knot vertices passed)
    source: Optional[str] = None

    @property
    def points(self) -> np.ndarray:
        return np.array([p.point for p in self.vertices])

    @property
    def n(self) -> int:
        return len(self.vertices)

    def as_knot(self) -> PolygonalKnot:
        return PolygonalKnot(self.points, check=False)

    def label_names(self) -> list[str]:
        out = []
        for kind, what in self.labels:
            if kind == "O":
                out.append(f"O{what}")
            else:
                out.append("N" + "_".join(str(v) for v in what))
        return out

    def to_json(self) -> dict:
        return {
            "vertices": self.points.tolist(),
            "labels": self.label_names(),
            "secant_points": [{"edge": p.edge, "t_edge": p.t_edge, "quad": p.quad} for p in self.vertices],
        }


def secant_points_in_knot_order(knot: PolygonalKnot, quads: Sequence[Quadrisecant],
                                tol: Optional[Tolerance] = None) -> list[SecantPoint]:
    tol = _tol(tol)
    if not quads:
        raise EmptyError("no quadrisecants")
    pts = sorted((h for q in quads for h in q.hits), key=lambda h: (h.edge, h.t_edge))
    for a, b in zip(pts, pts[1:] + pts[:1]):
        if a is not b and np.linalg.norm(a.point - b.point) < tol.band(1.0):
            raise DegenerateError(f"quadrisecants {a.quad} and {b.quad} share a point of the knot")
    return pts


def build_approximation(knot: PolygonalKnot, quads: Sequence[Quadrisecant],
                        tol: Optional[Tolerance] = None) -> ApproxPolygon:
    """Straighten every subarc between consecutive secant points.

    Raises :class:`SelfIntersectionError` if the result is not embedded.
    """
    pts = secant_points_in_knot_order(knot, quads, tol)
    if len(pts) < 3:
        raise DegenerateError("fewer than three secant points")
    n = knot.n
    labels = []
    for a, b in zip(pts, pts[1:] + pts[:1]):
        if a.edge == b.edge and a.t_edge < b.t_edge:
            labels.append(("O", a.edge))
        else:
            passed = []
            e = a.edge
            while True:
                e = (e + 1) % n
                passed.append(e)
                if e == b.edge:
                    break
            labels.append(("N", tuple(passed)))
    poly = ApproxPolygon(pts, labels)
    hit = embedding_violation(poly.points, tol)
    if hit is not None:
        i, j, p = hit
        raise SelfIntersectionError(f"approximation edges {i} and {j} meet near {np.round(p, 6).tolist()}",
                                    pair=(i, j), point=p)
    return poly


# ---------------------------------------------------------------------------
# Corner certificates


@dataclass
class CornerArc:
    vertex: int
    quad: int
    start: SecantPoint  # on edge vertex-1
    end: SecantPoint  # on edge vertex
    interior: list = field(default_factory=list)  # SecantPoints strictly inside the arc

    @property
    def ok(self) -> bool:
        return len(self.interior) == 1


@dataclass
class CornerArcReport:
    arcs: list

    @property
    def ok(self) -> bool:
        return all(a.ok for a in self.arcs)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "arcs": [
                {"vertex": a.vertex, "quad": a.quad,
                 "interior": [{"quad": p.quad, "edge": p.edge} for p in a.interior]}
                for a in self.arcs
            ],
        }


def corner_arcs(knot: PolygonalKnot, quads: Sequence[Quadrisecant]) -> list[CornerArc]:
    """Corner arcs: for each vertex, the quadrisecant meeting both edges at it."""
    if not quads:
        raise EmptyError("no quadrisecants")
    n = knot.n
    pts = [h for q in quads for h in q.hits]
    arcs = []
    for i in range(n):
        before, after = (i - 1) % n, i
        owners = [q for q in quads if before in q.edges and after in q.edges]
        if len(owners) != 1:
            raise PropertyViolated(f"vertex {i} is the corner of {len(owners)} quadrisecants, expected 1")
        q = owners[0]
        start, end = q.hit_on(before), q.hit_on(after)
        inside = [h for h in pts
                  if (h.edge == before and h.t_edge > start.t_edge) or (h.edge == after and h.t_edge < end.t_edge)]
        inside.sort(key=lambda h: (h.edge != before, h.t_edge))
        arcs.append(CornerArc(i, q.id, start, end, inside))
    return arcs


def verify_corner_arc_property(knot: PolygonalKnot, quads: Sequence[Quadrisecant]) -> CornerArcReport:
    """Every corner arc must contain exactly one further secant point.

    Without it the chord of that arc would run along its quadrisecant and
    the approximation would pass through one of the arc's secant points.
    """
    return CornerArcReport(corner_arcs(knot, quads))


@dataclass
class TriangleReport:
    triangles: list
    offending: Optional[tuple] = None  # ("knot", i, edge) or ("pair", i, j)

    @property
    def ok(self) -> bool:
        return self.offending is None

    def to_json(self) -> dict:
        return {"ok": self.ok, "offending": list(self.offending) if self.offending else None}


def corner_triangles(knot: PolygonalKnot, quads: Sequence[Quadrisecant]) -> list[np.ndarray]:
    """Triangle at each vertex spanned by it and the nearest secant point on either edge."""
    pts = secant_points_in_knot_order(knot, quads)
    n = knot.n
    tris = []
    for i in range(n):
        before = [p for p in pts if p.edge == (i - 1) % n]
        after = [p for p in pts if p.edge == i]
        if not before or not after:
            raise PropertyViolated(f"an edge at vertex {i} carries no secant point")
        tris.append(np.array([knot.vertex(i), before[-1].point, after[0].point]))
    return tris


def verify_corner_triangles_disjoint(knot: PolygonalKnot, quads: Sequence[Quadrisecant],
                                     tol: Optional[Tolerance] = None) -> TriangleReport:
    """Corner triangles miss the rest of the knot and are pairwise disjoint.

    Touching within tolerance counts as a violation.
    """
    tol = _tol(tol)
    n = knot.n
    tris = corner_triangles(knot, quads)
    for i, tri in enumerate(tris):
        for e in range(n):
            if e in ((i - 1) % n, i):
                continue
            seg = knot.edge(e)
            if segment_triangle_intersect(seg.a, seg.b, tri, tol):
                return TriangleReport(tris, ("knot", i, e))
    for i in range(n):
        for j in range(i + 1, n):
            if triangles_intersect(tris[i], tris[j], tol):
                return TriangleReport(tris, ("pair", i, j))
    return TriangleReport(tris)
