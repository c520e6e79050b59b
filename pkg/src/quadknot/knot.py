"""Polygonal knots, general position, triangular disks and the hexagon pattern.

Indices are 0-based throughout: vertex ``v[i]``; edge ``i`` joins ``v[i]`` and
``v[i+1]``; disk ``i`` is the triangle ``v[i-1], v[i], v[i+1]`` whose plane is
``plane(i)``.  All indices are taken mod ``n``.  In the 1-based labels used
in the literature, edge ``e_{i,i+1}`` is edge ``i-1`` here and disk
``Delta_i`` is disk ``i-1``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Optional

import numpy as np

from .errors import DegenerateError, SegmentInPlaneError, SelfIntersectionError
from .geom import (
    Plane3,
    Segment3,
    Tolerance,
    _tol,
    barycentric,
    collinear,
    collinear_many,
    orient3d,
    orient3d_many,
    segment_plane_intersect,
    segment_segment_distance,
)


class PolygonalKnot:
    """A closed polygon given by its vertex cycle.

    Parameters
    ----------
    vertices : array_like, shape (n, 3)
        Vertices in knot order; the last vertex connects back to the first.
    check : bool
        Verify that the polygon is embedded (raises
        :class:`~quadknot.errors.SelfIntersectionError` otherwise).
    """

    def __init__(self, vertices, check: bool = True, tol: Optional[Tolerance] = None):
        v = np.array(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or v.shape[0] < 3:
            raise ValueError("need an (n, 3) vertex array with n >= 3")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite vertex coordinates")
        if np.any(np.all(v == np.roll(v, -1, axis=0), axis=1)):
            raise ValueError("consecutive vertices coincide")
        v.setflags(write=False)
        self.vertices = v
        if check:
            hit = embedding_violation(v, tol)
            if hit is not None:
                i, j, p = hit
                raise SelfIntersectionError(f"edges {i} and {j} meet near {p}", pair=(i, j), point=p)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"PolygonalKnot(n={self.n})"

    def vertex(self, i: int) -> np.ndarray:
        return self.vertices[i % self.n]

    def edge(self, i: int) -> Segment3:
        return Segment3(self.vertex(i), self.vertex(i + 1))

    def edges(self) -> list[Segment3]:
        return [self.edge(i) for i in range(self.n)]

    def disk(self, i: int) -> "TriangularDisk":
        return TriangularDisk(i % self.n, self.vertex(i - 1), self.vertex(i), self.vertex(i + 1))

    def plane(self, i: int) -> Plane3:
        return Plane3.from_points(self.vertex(i - 1), self.vertex(i), self.vertex(i + 1))

    def shifted(self, k: int) -> "PolygonalKnot":
        """Relabel cyclically: new vertex ``m`` is old vertex ``m + k``."""
        return PolygonalKnot(np.roll(self.vertices, -k, axis=0), check=False)

    def reversed(self) -> "PolygonalKnot":
        return PolygonalKnot(self.vertices[::-1], check=False)

    def mirrored(self, axis: int = 2) -> "PolygonalKnot":
        v = self.vertices.copy()
        v[:, axis] *= -1
        return PolygonalKnot(v, check=False)

    def transformed(self, rotation=None, translation=None, scale: float = 1.0) -> "PolygonalKnot":
        v = self.vertices * scale
        if rotation is not None:
            v = v @ np.asarray(rotation, dtype=float).T
        if translation is not None:
            v = v + np.asarray(translation, dtype=float)
        return PolygonalKnot(v, check=False)

    def diameter(self) -> float:
        return float(np.ptp(self.vertices, axis=0).max())

    def to_json(self) -> dict:
        return {"vertices": self.vertices.tolist()}


def embedding_violation(vertices, tol: Optional[Tolerance] = None):
    """First pair of edges of the closed polygon that collide, or ``None``.

    Returns ``(i, j, point)``.  Nonadjacent edges collide when their
    distance is below tolerance; adjacent edges collide when they fold back
    onto each other.
    """
    tol = _tol(tol)
    v = np.asarray(vertices, dtype=float)
    n = len(v)
    eps = tol.band(float(np.abs(v).max()) if n else 1.0)
    for i, j in itertools.combinations(range(n), 2):
        if j == i + 1 or (i == 0 and j == n - 1):
            continue
        d, s, _ = segment_segment_distance(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])
        if d < eps:
            return i, j, v[i] + s * (v[(i + 1) % n] - v[i])
    for i in range(n):
        a, b, c = v[i], v[(i + 1) % n], v[(i + 2) % n]
        if collinear(a, b, c, tol) and (a - b) @ (c - b) > 0:
            return i, (i + 1) % n, b.copy()
    return None


def edge_label(i: int, n: int) -> str:
    """1-based literature label of edge ``i``, e.g. edge 0 -> ``e12``."""
    a, b = i % n + 1, (i + 1) % n + 1
    return f"e{a}{b}" if n < 10 else f"e{a}_{b}"


@dataclass(frozen=True, eq=False)
class TriangularDisk:
    i: int
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    @property
    def corners(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c])

    @property
    def plane(self) -> Plane3:
        return Plane3.from_points(self.a, self.b, self.c)


# ---------------------------------------------------------------------------
# General position


@dataclass
class GeneralPositionReport:
    collinear: list = field(default_factory=list)
    coplanar: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.collinear and not self.coplanar

    def to_json(self) -> dict:
        return {"ok": self.ok, "collinear": [list(t) for t in self.collinear],
                "coplanar": [list(q) for q in self.coplanar]}


def validate_general_position(knot: PolygonalKnot, tol: Optional[Tolerance] = None) -> GeneralPositionReport:
    """Check every vertex triple for collinearity and every quadruple for coplanarity."""
    v = knot.vertices
    report = GeneralPositionReport()
    triples = np.array(list(itertools.combinations(range(knot.n), 3)))
    bad = collinear_many(v[triples[:, 0]], v[triples[:, 1]], v[triples[:, 2]], tol)
    report.collinear = [tuple(int(x) for x in t) for t in triples[bad]]
    if knot.n >= 4:
        quads = np.array(list(itertools.combinations(range(knot.n), 4)))
        signs = orient3d_many(*(v[quads[:, k]] for k in range(4)), tol=tol)
        report.coplanar = [tuple(int(x) for x in q) for q in quads[signs == 0]]
    return report


def consecutive_coplanar_triples(knot: PolygonalKnot, tol: Optional[Tolerance] = None) -> list[tuple[int, int, int]]:
    """Edge triples ``(i, i+1, i+2)`` that lie in a common plane."""
    n = knot.n
    out = []
    for i in range(n):
        if orient3d(*(knot.vertex(i + k) for k in range(4)), tol=tol) == 0:
            out.append((i, (i + 1) % n, (i + 2) % n))
    return out


# ---------------------------------------------------------------------------
# Disk / edge intersections


@dataclass(frozen=True)
class IntersectionPattern:
    """Pairs ``(edge, disk)`` whose interiors meet transversally."""

    n: int
    pairs: frozenset

    def shifted(self, k: int) -> "IntersectionPattern":
        return IntersectionPattern(self.n, frozenset(((e + k) % self.n, (d + k) % self.n) for e, d in self.pairs))

    def reflected(self) -> "IntersectionPattern":
        """Image under the relabeling ``v[i] -> v[-i]`` (edge ``e -> -e-1``, disk ``d -> -d``)."""
        return IntersectionPattern(self.n, frozenset(((-e - 1) % self.n, (-d) % self.n) for e, d in self.pairs))

    def disks(self) -> set[int]:
        return {d for _, d in self.pairs}

    def to_json(self) -> list:
        return sorted([e, d] for e, d in self.pairs)


# edge 1 (e23) pierces disks 4, 5 (Delta_5, Delta_6), and so on
HEXAGON_PATTERN = IntersectionPattern(6, frozenset({(1, 4), (1, 5), (3, 0), (3, 1), (5, 2), (5, 3)}))


def _edge_meets_open_disk(knot: PolygonalKnot, e: int, j: int, tol: Tolerance) -> bool:
    n = knot.n
    corners = {(j - 1) % n, j % n, (j + 1) % n}
    ends = {e % n, (e + 1) % n}
    disk = knot.disk(j)
    plane = disk.plane
    seg = knot.edge(e)
    shared = ends & corners
    if shared:
        (s,) = shared
        (other,) = ends - shared
        eps = tol.band(float(np.abs(knot.vertices).max()))
        if abs(plane.signed_distance(knot.vertex(other))) < eps:
            raise DegenerateError(f"edge {e} lies in the plane of disk {j}")
        return False
    try:
        hit = segment_plane_intersect(seg, plane, tol)
    except SegmentInPlaneError as exc:
        raise DegenerateError(f"edge {e} lies in the plane of disk {j}") from exc
    if hit is None:
        return False
    if hit.kind == "endpoint":
        raise DegenerateError(f"a vertex of edge {e} lies in the plane of disk {j}")
    lam = min(barycentric(hit.point, disk.a, disk.b, disk.c))
    scale = max(np.linalg.norm(disk.b - disk.a), np.linalg.norm(disk.c - disk.b), np.linalg.norm(disk.a - disk.c))
    slack = tol.band(scale) / scale
    if abs(lam) <= slack:
        raise DegenerateError(f"edge {e} hits the boundary of disk {j}")
    return lam > 0


def disk_edge_intersections(knot: PolygonalKnot, tol: Optional[Tolerance] = None) -> IntersectionPattern:
    """All ``(edge, disk)`` pairs whose open edge meets the open disk."""
    tol = _tol(tol)
    n = knot.n
    pairs = set()
    for j in range(n):
        for e in range(n):
            if e in ((j - 1) % n, j):
                continue
            if _edge_meets_open_disk(knot, e, j, tol):
                pairs.add((e, j))
    return IntersectionPattern(n, frozenset(pairs))


def classify_hexagon_pattern(pattern: IntersectionPattern) -> Optional[int]:
    """Smallest cyclic shift ``k`` with ``pattern == HEXAGON_PATTERN.shifted(k)``.

    The reference pattern is invariant under a shift by 2, so a match is only
    ever reported as ``k`` in ``{0, 1}``.
    """
    if pattern.n != 6:
        raise ValueError("the hexagon pattern is defined for 6-vertex knots only")
    for k in range(6):
        if HEXAGON_PATTERN.shifted(k).pairs == pattern.pairs:
            return k
    return None


class PatternMatch(NamedTuple):
    shift: int
    reflected: bool


def match_hexagon_pattern(pattern: IntersectionPattern) -> Optional[PatternMatch]:
    """Cyclic match first; falls back to dihedral relabeling and flags it."""
    k = classify_hexagon_pattern(pattern)
    if k is not None:
        return PatternMatch(k, False)
    k = classify_hexagon_pattern(pattern.reflected())
    if k is not None:
        return PatternMatch(k, True)
    return None


def is_disk_reducible(knot: PolygonalKnot, i: int, tol: Optional[Tolerance] = None) -> bool:
    """True iff disk ``i`` meets the knot only in its two defining edges."""
    tol = _tol(tol)
    n = knot.n
    i %= n
    for e in range(n):
        if e in ((i - 1) % n, i):
            continue
        if _edge_meets_open_disk(knot, e, i, tol):
            return False
    return True


# ---------------------------------------------------------------------------
# Knot files


def parse_knot_text(text: str) -> np.ndarray:
    """Parse either the JSON knot format or whitespace-separated rows."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        return np.asarray(data["vertices"], dtype=float)
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([float(x) for x in line.replace(",", " ").split()])
    return np.asarray(rows, dtype=float)


def load_knot(path, check: bool = True) -> PolygonalKnot:
    return PolygonalKnot(parse_knot_text(Path(path).read_text()), check=check)


def dump_knot(vertices: Iterable, path=None, **extra) -> str:
    """Serialize vertices in the JSON knot format; also writes ``path`` if given."""
    if isinstance(vertices, PolygonalKnot):
        vertices = vertices.vertices
    doc = {"vertices": np.asarray(vertices, dtype=float).tolist(), **extra}
    text = json.dumps(doc, indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
