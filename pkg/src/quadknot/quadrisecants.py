"""Quadrisecants of polygonal knots.

The common transversals of four lines are found in Plücker space: the four
incidence conditions cut out a projective line (a pencil) of candidate
6-vectors, and the Grassmann-Plücker quadric ``dir . mom = 0`` picks out at
most two real lines on it.  A quadrisecant of a polygonal knot is a common
transversal of four edges that meets each of them at an interior point.

:func:`oracle_transversals` finds the same lines by a completely different
route (grid scan plus Newton refinement over pairs of points on two
segments) and exists only to cross-check the solver.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateError, InfiniteFamilyError, MoreThanTwoAdjacentError, PropertyViolated
from .geom import (
    PluckerLine,
    Segment3,
    Tolerance,
    _tol,
    line_carrier_hit,
    plane_plane_intersection,
    plucker_distance,
    plucker_of_points,
    side_form,
)
from .knot import PolygonalKnot, consecutive_coplanar_triples

# relative singular-value thresholds for the 4x6 incidence system
RANK_DEFICIENT = 1e-10
RANK_AMBIGUOUS = 1e-7
# lines closer than this (unit-direction Plücker distance) are the same line
MERGE_DISTANCE = 1e-7
# pencil directions closer than this (radians) are the same direction
ANGLE_MERGE = 1e-7


@dataclass(frozen=True, eq=False)
class SecantPoint:
    edge: int
    t_edge: float
    t_line: float
    point: np.ndarray
    quad: int = -1
    at_vertex: bool = False


@dataclass(eq=False)
class Quadrisecant:
    line: PluckerLine
    hits: tuple
    order_type: Optional[str] = None
    adjacency_type: Optional[int] = None
    id: int = -1

    @property
    def edges(self) -> tuple:
        return tuple(sorted(h.edge for h in self.hits))

    def hit_on(self, edge: int) -> SecantPoint:
        for h in self.hits:
            if h.edge == edge:
                return h
        raise KeyError(edge)

    def residual(self, knot: PolygonalKnot) -> float:
        """Largest reciprocal product between the line and its hit edges' carriers."""
        u = self.line.normalized()
        out = 0.0
        for h in self.hits:
            c = knot.edge(h.edge).carrier()
            c = PluckerLine(c.dir / np.linalg.norm(c.dir), c.mom / np.linalg.norm(c.dir))
            out = max(out, abs(side_form(u, c)))
        return out

    def to_json(self) -> dict:
        u = self.line.normalized()
        return {
            "id": self.id,
            "edges": list(self.edges),
            "dir": u.dir.tolist(),
            "mom": u.mom.tolist(),
            "order_type": self.order_type,
            "adjacency_type": self.adjacency_type,
            "hits": [
                {"edge": h.edge, "t_edge": h.t_edge, "t_line": h.t_line, "point": h.point.tolist()}
                for h in self.hits
            ],
        }


@dataclass
class TransversalResult:
    kind: str  # "finite" | "infinite_family" | "degenerate"
    lines: list = field(default_factory=list)
    tangent: bool = False


@dataclass(eq=False)
class SegmentTransversal:
    line: PluckerLine
    t_edges: tuple
    t_lines: tuple


# ---------------------------------------------------------------------------
# Four lines


def _quadric(x: np.ndarray, y: np.ndarray) -> float:
    """Polar form of ``dir . mom`` (so ``_quadric(x, x) = 2 dir.mom``)."""
    return float(x[:3] @ y[3:] + y[:3] @ x[3:])


def transversals_four_lines(lines: Sequence[PluckerLine], tol: Optional[Tolerance] = None) -> TransversalResult:
    """Common transversals of four lines.

    Returns a finite list of 0, 1 or 2 lines, ``infinite_family`` when the
    incidence system is rank deficient or the pencil lies on the quadric,
    or ``degenerate`` when the rank cannot be decided within tolerance.
    A double root is reported once with ``tangent=True``.
    """
    tol = _tol(tol)
    if len(lines) != 4:
        raise ValueError("need exactly four lines")
    rows = np.array([np.concatenate([l.mom, l.dir]) for l in lines])
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    _, sv, vt = np.linalg.svd(rows)
    rel = sv[3] / sv[0]
    if rel < RANK_DEFICIENT:
        rank = int(np.sum(sv > RANK_DEFICIENT * sv[0]))
        if rank == 3:
            basis = vt[3:]
            gram = np.array([[_quadric(x, y) for y in basis] for x in basis])
            ev = np.linalg.eigvalsh(gram)
            if np.all(ev > RANK_AMBIGUOUS * np.abs(ev).max()) or np.all(ev < -RANK_AMBIGUOUS * np.abs(ev).max()):
                return TransversalResult("finite", [])
        return TransversalResult("infinite_family")
    if rel < RANK_AMBIGUOUS:
        return TransversalResult("degenerate")

    u, v = vt[4], vt[5]
    # Q(cos t u + sin t v) = h + r cos(2t - phi), Q = dir.mom
    a, c, b = _quadric(u, u) / 2, _quadric(v, v) / 2, _quadric(u, v)
    scale = max(abs(a), abs(b), abs(c))
    if scale < RANK_DEFICIENT:
        return TransversalResult("infinite_family")
    if scale < RANK_AMBIGUOUS:
        return TransversalResult("degenerate")
    a, b, c = a / scale, b / scale, c / scale
    h = (a + c) / 2
    r = math.hypot((a - c) / 2, b / 2)
    disc = r * r - h * h
    if disc < -tol.eps_abs:
        return TransversalResult("finite", [])
    phi = math.atan2(b / 2, (a - c) / 2)
    tangent = abs(disc) <= tol.eps_abs
    if tangent:
        angles = [phi / 2 if h < 0 else (phi + math.pi) / 2]
    else:
        w = math.acos(max(-1.0, min(1.0, -h / r)))
        angles = [(phi + w) / 2, (phi - w) / 2]

    out = []
    for t in angles:
        x = math.cos(t) * u + math.sin(t) * v
        d, m = x[:3], x[3:]
        if np.linalg.norm(d) < 1e-9:
            continue  # line at infinity
        m = m - (d @ m) / (d @ d) * d
        out.append(PluckerLine(d, m).normalized())
    return TransversalResult("finite", out, tangent=tangent)


# ---------------------------------------------------------------------------
# Four segments


def _shared_vertex(s1: Segment3, e1: int, s2: Segment3, e2: int) -> bool:
    p = s1.a if e1 == 0 else s1.b
    q = s2.a if e2 == 0 else s2.b
    return bool(np.array_equal(p, q))


def transversals_four_segments(segments: Sequence[Segment3], tol: Optional[Tolerance] = None) -> list[SegmentTransversal]:
    """Common transversals meeting all four segments at interior points.

    Candidate lines passing through an endpoint shared by two of the
    segments are discarded (the knot meets them in one component there).
    Any other hit within tolerance of a segment endpoint raises
    :class:`DegenerateError`.
    """
    tol = _tol(tol)
    res = transversals_four_lines([s.carrier() for s in segments], tol)
    if res.kind != "finite":
        raise DegenerateError(f"carrier lines admit {res.kind.replace('_', ' ')} transversals")
    out = []
    for line in res.lines:
        hits = []
        for s in segments:
            h = line_carrier_hit(line, s.a, s.b, tol)
            if h is None:
                break
            hits.append(h)
        if len(hits) < 4:
            continue
        eps = [tol.band(1.0) * max(1.0, 1.0 / np.linalg.norm(s.direction)) for s in segments]
        gap_eps = 1e3 * tol.band(max(1.0, max(np.abs(s.a).max() for s in segments)))
        if any(g > gap_eps for _, _, g in hits):
            continue
        if any(t < -e or t > 1 + e for (t, _, _), e in zip(hits, eps)):
            continue
        near = []
        for k, ((t, _, _), e) in enumerate(zip(hits, eps)):
            if abs(t) <= e:
                near.append((k, 0))
            elif abs(t - 1) <= e:
                near.append((k, 1))
        if near:
            through_shared = any(
                _shared_vertex(segments[k1], end1, segments[k2], end2)
                for (k1, end1), (k2, end2) in itertools.combinations(near, 2)
            )
            if through_shared:
                continue
            raise DegenerateError("transversal meets a segment within tolerance of an endpoint")
        out.append(SegmentTransversal(line, tuple(h[0] for h in hits), tuple(h[1] for h in hits)))
    return out


def _coplanarity(p, q, a, b):
    """det[q - p, a - p, b - p], vectorized over leading axes of p and q."""
    return np.einsum("...i,...i->...", np.cross(a - p, b - p), q - p)


def oracle_transversals(segments: Sequence[Segment3], grid: int = 512) -> list[PluckerLine]:
    """Brute-force transversals of four segments (test oracle).

    Lines are parametrized by a point on each of two non-adjacent segments;
    the residuals are the coplanarity determinants with the other two.
    Sign-change cells of a ``grid x grid`` scan seed a Newton refinement.
    """
    segs = list(segments)
    order = None
    for i, j in itertools.combinations(range(4), 2):
        rest = [k for k in range(4) if k not in (i, j)]
        if not _touch(segs[i], segs[j]) and not _touch(segs[rest[0]], segs[rest[1]]):
            order = (i, j, *rest)
            break
    if order is None:
        for i, j in itertools.combinations(range(4), 2):
            if not _touch(segs[i], segs[j]):
                order = (i, j, *[k for k in range(4) if k not in (i, j)])
                break
    s1, s2, s3, s4 = (segs[k] for k in order)

    def residual(u, v):
        p = s1.a + np.multiply.outer(u, s1.direction)
        q = s2.a + np.multiply.outer(v, s2.direction)
        return _coplanarity(p, q, s3.a, s3.b), _coplanarity(p, q, s4.a, s4.b)

    ts = np.linspace(0.0, 1.0, grid + 1)
    uu, vv = np.meshgrid(ts, ts, indexing="ij")
    f, g = residual(uu, vv)

    def changes(z):
        corners = np.stack([z[:-1, :-1], z[1:, :-1], z[:-1, 1:], z[1:, 1:]])
        return (corners.min(axis=0) <= 0) & (corners.max(axis=0) >= 0)

    cells = np.argwhere(changes(f) & changes(g))
    roots = []
    h = 1e-7
    for ci, cj in cells:
        x = np.array([(ci + 0.5) / grid, (cj + 0.5) / grid])
        ok = False
        for _ in range(60):
            fx, gx = (float(z) for z in residual(x[0], x[1]))
            fu, gu = (float(z) for z in residual(x[0] + h, x[1]))
            fu2, gu2 = (float(z) for z in residual(x[0] - h, x[1]))
            fv, gv = (float(z) for z in residual(x[0], x[1] + h))
            fv2, gv2 = (float(z) for z in residual(x[0], x[1] - h))
            jac = np.array([[fu - fu2, fv - fv2], [gu - gu2, gv - gv2]]) / (2 * h)
            try:
                step = np.linalg.solve(jac, [fx, gx])
            except np.linalg.LinAlgError:
                break
            x = x - step
            if np.linalg.norm(step) < 1e-15:
                ok = True
                break
        fx, gx = (float(z) for z in residual(x[0], x[1]))
        if not ok and max(abs(fx), abs(gx)) > 1e-12:
            continue
        # keep the root only if it belongs to this cell's neighbourhood
        if abs(x[0] * grid - ci - 0.5) > 1.5 or abs(x[1] * grid - cj - 0.5) > 1.5:
            continue
        if not (0 < x[0] < 1 and 0 < x[1] < 1):
            continue
        p = s1.a + x[0] * s1.direction
        q = s2.a + x[1] * s2.direction
        if np.linalg.norm(q - p) < 1e-9:
            continue
        if not all(_interior_hit(p, q, s) for s in (s3, s4)):
            continue
        if any(abs(x[0] - r[0]) < 1e-7 and abs(x[1] - r[1]) < 1e-7 for r in roots):
            continue
        roots.append(x)
    lines = [plucker_of_points(s1.a + x[0] * s1.direction, s2.a + x[1] * s2.direction).normalized() for x in roots]
    unique = []
    for line in lines:
        if all(plucker_distance(line, other) > 1e-6 for other in unique):
            unique.append(line)
    return unique


def _touch(s: Segment3, t: Segment3) -> bool:
    return any(np.array_equal(p, q) for p in (s.a, s.b) for q in (t.a, t.b))


def _interior_hit(p, q, s: Segment3, margin: float = 1e-9) -> bool:
    m = np.column_stack([q - p, -s.direction])
    sol, *_ = np.linalg.lstsq(m, s.a - p, rcond=None)
    miss = np.linalg.norm(m @ sol - (s.a - p))
    return miss < 1e-7 and margin < sol[1] < 1 - margin


# ---------------------------------------------------------------------------
# Knots


def _skip_subset(subset, n) -> bool:
    s = set(subset)
    return any(i in s and (i + 1) % n in s and (i + 2) % n in s for i in range(n))


def find_quadrisecants(knot: PolygonalKnot, tol: Optional[Tolerance] = None,
                       allow_vertex_hits: bool = False) -> list[Quadrisecant]:
    """All quadrisecants of a polygonal knot in general position.

    Every 4-subset of edges is solved (subsets with three consecutive edges
    are skipped when no such triple is coplanar).  Lines found from several
    subsets are merged, ids are assigned in lexicographic order of hit edges
    and each quadrisecant is classified.

    With ``allow_vertex_hits`` the knot need not be in general position:
    lines through vertices are kept, components of the intersection are
    counted directly, and pencils of transversals lying in the plane of
    three coplanar edges are swept.  A continuous family of quadrisecants
    raises :class:`InfiniteFamilyError`.
    """
    tol = _tol(tol)
    if allow_vertex_hits:
        return _find_vertex_aware(knot, tol)
    n = knot.n
    edges = knot.edges()
    skip = not consecutive_coplanar_triples(knot, tol)
    found: list[tuple[PluckerLine, dict]] = []
    for subset in itertools.combinations(range(n), 4):
        if skip and _skip_subset(subset, n):
            continue
        for tr in transversals_four_segments([edges[i] for i in subset], tol):
            hits = {e: t for e, t in zip(subset, tr.t_edges)}
            for line, known in found:
                if plucker_distance(line, tr.line) < MERGE_DISTANCE:
                    for e, t in hits.items():
                        known.setdefault(e, t)
                    break
            else:
                found.append((tr.line, hits))

    quads = []
    for line, hits in found:
        pts = []
        for e, t in hits.items():
            p = edges[e].at(t)
            pts.append(SecantPoint(e, float(t), line.parameter_of(p), p))
        pts.sort(key=lambda h: h.t_line)
        quads.append(Quadrisecant(line, tuple(pts)))
    quads.sort(key=lambda q: q.edges)
    out = []
    for k, q in enumerate(quads):
        q = replace(q, id=k, hits=tuple(replace(h, quad=k) for h in q.hits))
        out.append(_classified(q, knot))
    return out


def _classified(q: Quadrisecant, knot: PolygonalKnot) -> Quadrisecant:
    order = classify_order(q, knot) if len(q.hits) == 4 else None
    try:
        adj = classify_adjacency(q, knot) if len(q.hits) == 4 else None
    except MoreThanTwoAdjacentError:
        adj = None
    return replace(q, order_type=order, adjacency_type=adj)


def classify_order_sequence(seq: Sequence[int]) -> str:
    """Order type from knot-order labels ``0..3`` read along the line.

    Consecutive labels along the line are either neighbours in the cyclic
    knot order (A) or opposite (D).  AAA is simple, ADA flipped, DAD
    alternating; no other pattern can occur.
    """
    steps = "".join("A" if (a - b) % 4 in (1, 3) else "D" for a, b in zip(seq, seq[1:]))
    return {"AAA": "simple", "ADA": "flipped", "DAD": "alternating"}[steps]


def classify_order(q: Quadrisecant, knot: PolygonalKnot) -> str:
    if len(q.hits) != 4:
        raise ValueError("order type is defined for exactly four hits")
    along_knot = sorted(q.hits, key=lambda h: (h.edge, h.t_edge))
    label = {id(h): k for k, h in enumerate(along_knot)}
    along_line = sorted(q.hits, key=lambda h: h.t_line)
    return classify_order_sequence([label[id(h)] for h in along_line])


def classify_adjacency(q: Quadrisecant, knot: PolygonalKnot) -> int:
    """Number of adjacent pairs among the four hit edges (type-0, 1 or 2)."""
    n = knot.n
    edges = set(q.edges)
    if len(edges) != 4 or len(q.hits) != 4:
        raise ValueError("adjacency type needs four hits on four distinct edges")
    if any((e + 1) % n in edges and (e + 2) % n in edges for e in edges):
        raise MoreThanTwoAdjacentError("three hit edges are consecutive")
    return sum(1 for e in edges if (e + 1) % n in edges)


def plane_pair_quadrisecant(knot: PolygonalKnot, i: int, j: int, tol: Optional[Tolerance] = None) -> Quadrisecant:
    """The line ``plane(i) & plane(j)`` as a quadrisecant of a hexagon.

    For a hexagonal trefoil labelled with the canonical disk/edge pattern,
    the disk pairs ``(1, 4)``, ``(3, 0)`` and ``(5, 2)`` give its three
    quadrisecants, meeting edges ``i-1, i, j-1, j``.
    """
    tol = _tol(tol)
    n = knot.n
    line = plane_plane_intersection(knot.plane(i), knot.plane(j), tol).normalized()
    pts = []
    for e in sorted({(i - 1) % n, i % n, (j - 1) % n, j % n}):
        seg = knot.edge(e)
        h = line_carrier_hit(line, seg.a, seg.b, tol)
        if h is None or not (0 < h[0] < 1):
            raise PropertyViolated(f"plane pair ({i}, {j}) misses the interior of edge {e}")
        p = seg.at(h[0])
        pts.append(SecantPoint(e, h[0], line.parameter_of(p), p))
    pts.sort(key=lambda h: h.t_line)
    return _classified(Quadrisecant(line, tuple(pts)), knot)


def plane_pair_labels(q: Quadrisecant, i: int, j: int, n: int = 6) -> str:
    """Hit names along the line: ``a`` on edge i-1, ``q`` on i, ``p`` on j-1, ``b`` on j."""
    names = {(i - 1) % n: "a", i % n: "q", (j - 1) % n: "p", j % n: "b"}
    return "".join(names[h.edge] for h in q.hits)


# ---------------------------------------------------------------------------
# Knots that are not in general position


def _loose(knot: PolygonalKnot, tol: Tolerance) -> float:
    return 1e3 * tol.band(max(1.0, float(np.abs(knot.vertices).max())))


def _meets_closed(line: PluckerLine, seg: Segment3, eps: float) -> bool:
    h = line_carrier_hit(line, seg.a, seg.b)
    if h is None:
        return line.distance_to_point(seg.a) < eps
    s, _, gap = h
    slack = eps / np.linalg.norm(seg.direction)
    return gap < eps and -slack <= s <= 1 + slack


def line_knot_components(line: PluckerLine, knot: PolygonalKnot, tol: Optional[Tolerance] = None,
                         eps: Optional[float] = None) -> list[list]:
    """Connected components of ``line & knot``.

    Each component is a list of ``(edge, t_edge, t_line)`` hits, sorted
    along the line.  A hit at a vertex shows up on both of its edges; an
    edge lying on the line contributes both endpoints.  ``eps`` is the
    distance below which the line counts as meeting an edge (default: a
    loose multiple of the tolerance band, to absorb round-off at vertices).
    """
    tol = _tol(tol)
    if eps is None:
        eps = _loose(knot, tol)
    u = line.normalized()
    spans = []  # (t_lo, t_hi, hits)
    for e, seg in enumerate(knot.edges()):
        h = line_carrier_hit(u, seg.a, seg.b)
        if h is None:
            if u.distance_to_point(seg.a) < eps:
                ta, tb = u.parameter_of(seg.a), u.parameter_of(seg.b)
                spans.append((min(ta, tb), max(ta, tb), [(e, 0.0, ta), (e, 1.0, tb)]))
            continue
        s, t, gap = h
        slack = eps / np.linalg.norm(seg.direction)
        if gap < eps and -slack <= s <= 1 + slack:
            s = min(1.0, max(0.0, s))
            spans.append((t, t, [(e, s, t)]))
    spans.sort(key=lambda z: z[0])
    comps: list[list] = []
    end = -math.inf
    for lo, hi, hits in spans:
        if comps and lo <= end + eps:
            comps[-1].extend(hits)
            end = max(end, hi)
        else:
            comps.append(list(hits))
            end = hi
    return [sorted(c, key=lambda h: h[2]) for c in comps]


def _representative(comp: list, knot: PolygonalKnot, eps: float) -> SecantPoint:
    interior = [h for h in comp if eps < h[1] < 1 - eps]
    if len(comp) == 1 and interior:
        e, s, t = comp[0]
        return SecantPoint(e, float(s), float(t), knot.edge(e).at(s))
    # a vertex (or an edge lying on the line): name it by the edge starting there
    starts = sorted(comp, key=lambda h: (h[1] > 0.5, h[1], h[0]))
    e, s, t = starts[0]
    if s > 0.5:
        e, s = (e + 1) % knot.n, 0.0
    s = 0.0 if s < 0.5 else s
    return SecantPoint(e, float(s), float(t), knot.edge(e).at(s), at_vertex=True)


def _plane_basis(normal: np.ndarray):
    n = normal / np.linalg.norm(normal)
    helper = np.eye(3)[int(np.argmin(np.abs(n)))]
    e1 = np.cross(n, helper)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(n, e1)


def _pencils(lines: Sequence[PluckerLine]) -> list[tuple[np.ndarray, np.ndarray]]:
    """Planar pencils of common transversals of four lines, as ``(centre, normal)``.

    Called when the transversals form an infinite family.  A 2-dimensional
    null space lying on the quadric is one pencil; a 3-dimensional one on
    which the quadric has rank 2 splits into two pencils.  Anything else
    (a regulus, a star, a ruled plane) is reported as degenerate.
    """
    rows = np.array([np.concatenate([l.mom, l.dir]) for l in lines])
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    _, sv, vt = np.linalg.svd(rows)
    rank = int(np.sum(sv > RANK_DEFICIENT * sv[0]))
    basis = vt[rank:]
    spans = []
    if len(basis) == 2:
        spans.append((basis[0], basis[1]))
    elif len(basis) == 3:
        gram = np.array([[_quadric(x, y) for y in basis] for x in basis])
        ev, vec = np.linalg.eigh(gram)
        big = np.abs(ev).max()
        zero = np.abs(ev) <= RANK_AMBIGUOUS * big
        if big == 0 or zero.sum() != 1 or ev.min() >= 0 or ev.max() <= 0:
            raise DegenerateError("transversal family is not a union of planar pencils")
        lo, hi, mid = int(np.argmin(ev)), int(np.argmax(ev)), int(np.flatnonzero(zero)[0])
        w0 = vec[:, mid] @ basis
        for sign in (1.0, -1.0):
            w1 = (math.sqrt(-ev[lo]) * vec[:, hi] + sign * math.sqrt(ev[hi]) * vec[:, lo]) @ basis
            spans.append((w0, w1))
    else:
        raise DegenerateError("transversal family of unexpected dimension")

    out = []
    for x, y in spans:
        members = []
        for t in np.linspace(0.0, math.pi, 7)[:-1]:
            z = math.cos(t) * x + math.sin(t) * y
            if np.linalg.norm(z[:3]) > 1e-6:
                members.append(PluckerLine(z[:3], z[3:] - (z[:3] @ z[3:]) / (z[:3] @ z[:3]) * z[:3]).normalized())
        pairs = [(l1, l2) for l1, l2 in itertools.combinations(members, 2)
                 if np.linalg.norm(np.cross(l1.dir, l2.dir)) > 1e-3]
        if not pairs:
            raise DegenerateError("pencil of parallel transversals")
        l1, l2 = pairs[0]
        normal = np.cross(l1.dir, l2.dir)
        normal /= np.linalg.norm(normal)
        # centre: the common point of l1 and l2
        p1, p2 = l1.closest_point_to_origin(), l2.closest_point_to_origin()
        m = np.column_stack([l1.dir, -l2.dir])
        st, *_ = np.linalg.lstsq(m, p2 - p1, rcond=None)
        out.append((p1 + st[0] * l1.dir, normal))
    return out


def _sweep_pencil(knot: PolygonalKnot, segs: Sequence[Segment3], centre: np.ndarray, normal: np.ndarray,
                  tol: Tolerance) -> list[PluckerLine]:
    """Quadrisecant candidates among lines through ``centre`` in the plane ``normal``.

    The directions meeting each segment form an arc (a single direction for
    a segment crossing the plane, everything for one through the centre).
    Every arc endpoint and every midpoint between consecutive endpoints is
    tried; a midpoint line with four or more components is a generic member
    of a family of quadrisecants.
    """
    eps = _loose(knot, tol)
    e1, e2 = _plane_basis(normal)

    def angle(p):
        w = p - centre
        return math.atan2(w @ e2, w @ e1) % math.pi

    raw = []
    for seg in segs:
        da, db = (seg.a - centre) @ normal, (seg.b - centre) @ normal
        if abs(da) < eps and abs(db) < eps:
            raw += [angle(p) for p in (seg.a, seg.b) if np.linalg.norm(p - centre) > eps]
        elif abs(da - db) > eps:
            z = seg.a + (da / (da - db)) * seg.direction
            if np.linalg.norm(z - centre) > eps:
                raw.append(angle(z))
    if not raw:
        return []
    raw.sort()
    ends = [raw[0]]
    for a in raw[1:]:
        if a - ends[-1] > ANGLE_MERGE:
            ends.append(a)
    if len(ends) > 1 and ends[0] + math.pi - ends[-1] <= ANGLE_MERGE:
        ends.pop()
    mids = [(a + b) / 2 for a, b in zip(ends, ends[1:])] + [((ends[-1] + ends[0] + math.pi) / 2) % math.pi]
    out = []
    for theta, generic in [(a, False) for a in ends] + [(m, True) for m in mids]:
        d = math.cos(theta) * e1 + math.sin(theta) * e2
        line = plucker_of_points(centre, centre + d).normalized()
        if not all(_meets_closed(line, seg, eps) for seg in segs):
            continue
        if generic:
            # a true family member meets the knot exactly, so no loose slack here
            strict = tol.band(max(1.0, float(np.abs(knot.vertices).max())))
            if all(_meets_closed(line, seg, strict) for seg in segs) and \
                    len(line_knot_components(line, knot, tol, eps=strict)) >= 4:
                raise InfiniteFamilyError("a planar pencil of lines consists of quadrisecants")
        else:
            out.append(line)
    return out


def _find_vertex_aware(knot: PolygonalKnot, tol: Tolerance) -> list[Quadrisecant]:
    eps = _loose(knot, tol)
    edges = knot.edges()
    carriers = [e.carrier() for e in edges]
    candidates: list[PluckerLine] = []
    known = np.empty((0, 6))
    for subset in itertools.combinations(range(knot.n), 4):
        segs = [edges[i] for i in subset]
        res = transversals_four_lines([carriers[i] for i in subset], tol)
        if res.kind == "finite":
            lines = res.lines
        elif res.kind == "infinite_family":
            lines = []
            for centre, normal in _pencils([carriers[i] for i in subset]):
                lines += _sweep_pencil(knot, segs, centre, normal, tol)
        else:
            raise DegenerateError(f"edges {subset} have an ambiguous transversal system")
        for line in lines:
            if not all(_meets_closed(line, s, eps) for s in segs):
                continue
            vec = line.normalized().vector
            if len(known) and min(np.abs(known - vec).max(axis=1).min(), np.abs(known + vec).max(axis=1).min()) \
                    < MERGE_DISTANCE:
                continue
            candidates.append(line)
            known = np.vstack([known, vec])

    quads = []
    for line in candidates:
        comps = line_knot_components(line, knot, tol)
        if len(comps) < 4:
            continue
        hits = tuple(_representative(c, knot, eps) for c in comps)
        quads.append(Quadrisecant(line, hits))
    quads.sort(key=lambda q: (q.edges, tuple(h.t_edge for h in q.hits)))
    out = []
    for k, q in enumerate(quads):
        q = replace(q, id=k, hits=tuple(replace(h, quad=k) for h in q.hits))
        if any(h.at_vertex for h in q.hits) or len(q.hits) != 4:
            order = classify_order(q, knot) if len(q.hits) == 4 else None
            out.append(replace(q, order_type=order))
        else:
            out.append(_classified(q, knot))
    return out
