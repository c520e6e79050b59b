"""Low-level 3D primitives and predicates.

Points and vectors are plain ``numpy`` arrays of shape ``(3,)``.  Segments,
planes and lines are small immutable wrappers around them.  All sign
predicates share one :class:`Tolerance`; values inside the guard band are
reported as zero (or raise :class:`~quadknot.errors.DegenerateError` where a
caller cannot proceed) instead of being resolved silently.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    DegenerateError,
    DegenerateLineError,
    PlanesParallelError,
    SegmentInPlaneError,
)

ENV_EPS = "QUADKNOT_EPS"


@dataclass(frozen=True)
class Tolerance:
    """Two-tier tolerance: ``eps_abs`` for residuals, ``eps_rel`` scaled by input size."""

    eps_abs: float = 1e-9
    eps_rel: float = 1e-12

    def __post_init__(self):
        if not (self.eps_abs > 0 and self.eps_rel > 0):
            raise ValueError("tolerances must be strictly positive")

    def band(self, magnitude: float = 1.0) -> float:
        return max(self.eps_abs, self.eps_rel * magnitude)


def default_tolerance() -> Tolerance:
    """The package default, with ``eps_abs`` overridable by ``$QUADKNOT_EPS``."""
    raw = os.environ.get(ENV_EPS)
    if raw:
        return Tolerance(eps_abs=float(raw))
    return Tolerance()


def _tol(tol: Optional[Tolerance]) -> Tolerance:
    return tol if tol is not None else default_tolerance()


def cross3(a, b) -> np.ndarray:
    """Cross product of two 3-vectors (much cheaper than ``np.cross`` for single vectors)."""
    a0, a1, a2 = float(a[0]), float(a[1]), float(a[2])
    b0, b1, b2 = float(b[0]), float(b[1]), float(b[2])
    return np.array([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])


def as_point(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float).reshape(3)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite coordinates: {arr}")
    return arr


# ---------------------------------------------------------------------------
# Value types


@dataclass(frozen=True, eq=False)
class Segment3:
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", as_point(self.a))
        object.__setattr__(self, "b", as_point(self.b))
        if np.array_equal(self.a, self.b):
            raise ValueError("zero-length segment")

    @property
    def direction(self) -> np.ndarray:
        return self.b - self.a

    def at(self, t: float) -> np.ndarray:
        return self.a + t * (self.b - self.a)

    def carrier(self) -> "PluckerLine":
        return plucker_of_points(self.a, self.b)


@dataclass(frozen=True, eq=False)
class Plane3:
    """The plane ``{x : n.x = d}`` with unit normal ``n``."""

    n: np.ndarray
    d: float

    def __post_init__(self):
        n = as_point(self.n)
        norm = np.linalg.norm(n)
        if norm == 0:
            raise ValueError("plane normal is zero")
        if abs(norm - 1.0) > 1e-9:
            n = n / norm
            object.__setattr__(self, "d", float(self.d) / norm)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", float(self.d))

    @classmethod
    def from_points(cls, a, b, c) -> "Plane3":
        a, b, c = as_point(a), as_point(b), as_point(c)
        n = cross3(b - a, c - a)
        norm = np.linalg.norm(n)
        if norm == 0:
            raise DegenerateError("collinear points do not span a plane")
        n = n / norm
        return cls(n, float(n @ a))

    def signed_distance(self, p) -> float:
        return float(self.n @ np.asarray(p, dtype=float) - self.d)


@dataclass(frozen=True, eq=False)
class PluckerLine:
    """A line in Plücker form: direction ``dir`` and moment ``mom = p x dir``."""

    dir: np.ndarray
    mom: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dir", as_point(self.dir))
        object.__setattr__(self, "mom", as_point(self.mom))
        if not np.any(self.dir):
            raise DegenerateLineError("line direction is zero")

    @classmethod
    def from_vector(cls, v) -> "PluckerLine":
        v = np.asarray(v, dtype=float)
        return cls(v[:3], v[3:])

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.dir, self.mom])

    def normalized(self) -> "PluckerLine":
        """Rescale to unit direction, oriented so the largest direction component is positive."""
        s = np.linalg.norm(self.dir)
        if self.dir[np.argmax(np.abs(self.dir))] < 0:
            s = -s
        return PluckerLine(self.dir / s, self.mom / s)

    def closest_point_to_origin(self) -> np.ndarray:
        return cross3(self.dir, self.mom) / (self.dir @ self.dir)

    def point_at(self, t: float) -> np.ndarray:
        """Point at parameter ``t`` of the canonical parametrization.

        The canonical parametrization starts at the point closest to the
        origin and moves with the unit direction of :meth:`normalized`.
        """
        u = self.normalized()
        return u.closest_point_to_origin() + t * u.dir

    def parameter_of(self, p) -> float:
        u = self.normalized()
        return float(u.dir @ (np.asarray(p, dtype=float) - u.closest_point_to_origin()))

    def distance_to_point(self, p) -> float:
        u = self.normalized()
        return float(np.linalg.norm(cross3(p, u.dir) - u.mom))

    def grassmann_residual(self) -> float:
        return float(self.dir @ self.mom)


class PlaneHit(NamedTuple):
    point: np.ndarray
    t: float
    kind: str  # "interior" | "endpoint"


# ---------------------------------------------------------------------------
# Predicates


def orient3d_value(a, b, c, d) -> float:
    a = np.asarray(a, dtype=float)
    return float(np.linalg.det(np.array([np.asarray(b) - a, np.asarray(c) - a, np.asarray(d) - a])))


def orient3d(a, b, c, d, tol: Optional[Tolerance] = None) -> int:
    """Sign of ``det[b-a, c-a, d-a]``; 0 inside the guard band."""
    tol = _tol(tol)
    a, b, c, d = (as_point(p) for p in (a, b, c, d))
    u, v, w = b - a, c - a, d - a
    det = float(u @ cross3(v, w))
    # cube of the largest pairwise distance: symmetric in the four points
    scale = max(np.linalg.norm(u), np.linalg.norm(v), np.linalg.norm(w),
                np.linalg.norm(c - b), np.linalg.norm(d - b), np.linalg.norm(d - c)) ** 3
    if abs(det) < tol.band(scale):
        return 0
    return 1 if det > 0 else -1


def orient3d_many(a, b, c, d, tol: Optional[Tolerance] = None) -> np.ndarray:
    """Vectorized :func:`orient3d` over rows of ``(m, 3)`` arrays."""
    tol = _tol(tol)
    a = np.asarray(a, dtype=float)
    u, v, w = np.asarray(b) - a, np.asarray(c) - a, np.asarray(d) - a
    det = np.einsum("ij,ij->i", u, np.cross(v, w))
    spans = np.stack([u, v, w, v - u, w - u, w - v])
    scale = np.linalg.norm(spans, axis=2).max(axis=0) ** 3
    band = np.maximum(tol.eps_abs, tol.eps_rel * scale)
    return np.where(np.abs(det) < band, 0, np.sign(det)).astype(int)


def collinear_many(a, b, c, tol: Optional[Tolerance] = None) -> np.ndarray:
    tol = _tol(tol)
    a = np.asarray(a, dtype=float)
    u, v = np.asarray(b) - a, np.asarray(c) - a
    area2 = np.linalg.norm(np.cross(u, v), axis=1)
    scale = np.linalg.norm(u, axis=1) * np.linalg.norm(v, axis=1)
    return area2 < np.maximum(tol.eps_abs, tol.eps_rel * scale)


def collinear(a, b, c, tol: Optional[Tolerance] = None) -> bool:
    tol = _tol(tol)
    a, b, c = as_point(a), as_point(b), as_point(c)
    u, v = b - a, c - a
    area2 = np.linalg.norm(cross3(u, v))
    return area2 < tol.band(np.linalg.norm(u) * np.linalg.norm(v))


def segment_plane_intersect(s: Segment3, plane: Plane3, tol: Optional[Tolerance] = None) -> Optional[PlaneHit]:
    """Intersect a segment with a plane.

    Returns ``None`` when both endpoints are strictly on one side, an
    ``"endpoint"`` hit when exactly one endpoint is within tolerance of the
    plane, and an ``"interior"`` hit for a proper crossing.  Raises
    :class:`SegmentInPlaneError` when the whole segment lies in the plane.
    """
    tol = _tol(tol)
    da = plane.signed_distance(s.a)
    db = plane.signed_distance(s.b)
    eps = tol.band(max(np.linalg.norm(s.a), np.linalg.norm(s.b), 1.0))
    on_a, on_b = abs(da) < eps, abs(db) < eps
    if on_a and on_b:
        raise SegmentInPlaneError("segment lies in the plane")
    if on_a:
        return PlaneHit(s.a.copy(), 0.0, "endpoint")
    if on_b:
        return PlaneHit(s.b.copy(), 1.0, "endpoint")
    if (da > 0) == (db > 0):
        return None
    t = da / (da - db)
    return PlaneHit(s.at(t), t, "interior")


def plucker_of_points(p, q) -> PluckerLine:
    p, q = as_point(p), as_point(q)
    d = q - p
    if not np.any(d):
        raise DegenerateLineError("cannot span a line with coincident points")
    return PluckerLine(d, cross3(p, d))


def side_form(l1: PluckerLine, l2: PluckerLine) -> float:
    """Reciprocal product; zero iff the two lines meet or are parallel."""
    return float(l1.dir @ l2.mom + l2.dir @ l1.mom)


def plucker_distance(l1: PluckerLine, l2: PluckerLine) -> float:
    """Distance between unit-direction Plücker vectors, minimized over orientation."""
    u = l1.normalized().vector
    v = l2.normalized().vector
    return float(min(np.linalg.norm(u - v), np.linalg.norm(u + v)))


def plane_plane_intersection(p1: Plane3, p2: Plane3, tol: Optional[Tolerance] = None) -> PluckerLine:
    tol = _tol(tol)
    d = cross3(p1.n, p2.n)
    if np.linalg.norm(d) < tol.eps_abs:
        raise PlanesParallelError("planes are parallel within tolerance")
    # point on both planes closest to the origin
    m = np.array([p1.n, p2.n, d])
    x = np.linalg.solve(m, np.array([p1.d, p2.d, 0.0]))
    return PluckerLine(d, cross3(x, d))


def line_carrier_hit(line: PluckerLine, a, b, tol: Optional[Tolerance] = None):
    """Meet a line with the carrier of segment ``ab``.

    Returns ``(t_edge, t_line, gap)``: the parameter along ``ab``, the
    canonical line parameter, and the closest-approach distance.  Returns
    ``None`` when the two are parallel.
    """
    tol = _tol(tol)
    u = line.normalized()
    p0 = u.closest_point_to_origin()
    a = np.asarray(a, dtype=float)
    e = np.asarray(b, dtype=float) - a
    w = a - p0
    # minimize |a + s e - (p0 + t u)|
    ee, eu, uu = e @ e, e @ u.dir, 1.0
    denom = ee * uu - eu * eu
    # sin^2 of the angle between the two directions
    if denom <= tol.eps_abs**2 * ee:
        return None
    we, wu = w @ e, w @ u.dir
    s = (eu * wu - uu * we) / denom
    t = (ee * wu - eu * we) / denom
    gap = float(np.linalg.norm(a + s * e - (p0 + t * u.dir)))
    return float(s), float(t), gap


def segment_segment_distance(p0, p1, q0, q1):
    """Closest points between two segments.

    Returns ``(distance, s, t)`` with the closest points at
    ``p0 + s (p1 - p0)`` and ``q0 + t (q1 - q0)``.
    """
    p0, p1, q0, q1 = (np.asarray(x, dtype=float) for x in (p0, p1, q0, q1))
    d1, d2, r = p1 - p0, q1 - q0, p0 - q0
    a, e, f = d1 @ d1, d2 @ d2, d2 @ r
    c, b = d1 @ r, d1 @ d2
    denom = a * e - b * b
    if denom > 1e-14 * a * e:
        s = min(max((b * f - c * e) / denom, 0.0), 1.0)
    else:
        s = 0.0
    t = (b * s + f) / e
    if t < 0.0:
        t = 0.0
        s = min(max(-c / a, 0.0), 1.0)
    elif t > 1.0:
        t = 1.0
        s = min(max((b - c) / a, 0.0), 1.0)
    dist = float(np.linalg.norm(p0 + s * d1 - (q0 + t * d2)))
    return dist, float(s), float(t)


def barycentric(p, a, b, c):
    """Barycentric coordinates of ``p`` (assumed in the plane of ``abc``)."""
    a = np.asarray(a, dtype=float)
    v0, v1, v2 = np.asarray(b) - a, np.asarray(c) - a, np.asarray(p) - a
    d00, d01, d11 = v0 @ v0, v0 @ v1, v1 @ v1
    d20, d21 = v2 @ v0, v2 @ v1
    denom = d00 * d11 - d01 * d01
    v = (d11 * d20 - d01 * d21) / denom
    w = (d00 * d21 - d01 * d20) / denom
    return 1.0 - v - w, v, w


def segment_triangle_intersect(a, b, tri, tol: Optional[Tolerance] = None) -> bool:
    """Whether segment ``ab`` meets the closed triangle ``tri`` (3x3 array).

    Touching within tolerance counts as meeting.
    """
    tol = _tol(tol)
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    t0, t1, t2 = (np.asarray(x, dtype=float) for x in tri)
    plane = Plane3.from_points(t0, t1, t2)
    da, db = plane.signed_distance(a), plane.signed_distance(b)
    eps = tol.band(max(np.abs(tri).max(), np.abs(a).max(), np.abs(b).max(), 1.0))
    if abs(da) < eps and abs(db) < eps:
        # coplanar: meet iff an endpoint is inside or the segment crosses a side
        for p in (a, b):
            if min(barycentric(p, t0, t1, t2)) > -eps:
                return True
        return any(segment_segment_distance(a, b, u, v)[0] < eps for u, v in ((t0, t1), (t1, t2), (t2, t0)))
    if (da > eps and db > eps) or (da < -eps and db < -eps):
        return False
    if abs(da) < eps:
        p = a
    elif abs(db) < eps:
        p = b
    else:
        p = a + (da / (da - db)) * (b - a)
    lam = barycentric(p, t0, t1, t2)
    # barycentric slack measured in length units
    scale = max(np.linalg.norm(t1 - t0), np.linalg.norm(t2 - t0), np.linalg.norm(t2 - t1))
    return min(lam) > -eps / scale


def triangles_intersect(t1, t2, tol: Optional[Tolerance] = None) -> bool:
    """Closed-triangle intersection test (conservative at tolerance)."""
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    for i in range(3):
        if segment_triangle_intersect(t1[i], t1[(i + 1) % 3], t2, tol):
            return True
        if segment_triangle_intersect(t2[i], t2[(i + 1) % 3], t1, tol):
            return True
    return False


def angle_between(u, v) -> float:
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    c = abs(u @ v) / (np.linalg.norm(u) * np.linalg.norm(v))
    return math.acos(min(1.0, c))
