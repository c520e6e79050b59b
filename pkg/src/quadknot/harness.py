"""Random hexagonal trefoils, the end-to-end theorem suite and batch runs.

A trial samples a general-position hexagonal trefoil, runs every check in
:func:`run_theorem_suite` and condenses the report into one CSV row.
Trials are seeded independently from ``(seed, trial)`` so a batch gives the
same rows whatever the number of worker processes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .approximation import build_approximation, verify_corner_arc_property, verify_corner_triangles_disjoint
from .errors import DegenerateError, QuadknotError, RejectBudgetExhausted
from .geom import Tolerance, _tol, plucker_distance
from .invariants import classify_knot, projected_crossing_count
from .knot import (
    PolygonalKnot,
    classify_hexagon_pattern,
    disk_edge_intersections,
    embedding_violation,
    is_disk_reducible,
    validate_general_position,
)
from .quadrisecants import find_quadrisecants, plane_pair_labels, plane_pair_quadrisecant

log = logging.getLogger(__name__)

DISTRIBUTIONS = ("cube", "ball", "gaussian")
DEGENERATE = "DEGENERATE"

# edge sets of the three quadrisecants of a canonically labelled hexagonal trefoil
CANONICAL_EDGE_SETS = frozenset({frozenset({0, 1, 3, 4}), frozenset({1, 2, 4, 5}), frozenset({2, 3, 5, 0})})
# disk pairs whose planes meet in the three quadrisecants (canonical labels)
CANONICAL_PLANE_PAIRS = ((1, 4), (3, 0), (5, 2))
PLANE_PAIR_ORDERS = ("bqpa", "apqb")

RESIDUAL_MAX = 1e-8
PLANE_PAIR_MAX = 1e-9
LINE_MATCH_MAX = 1e-6


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    distribution: str = "cube"
    scale: float = 1.0
    max_rejects: int = 200_000

    def __post_init__(self):
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"distribution must be one of {DISTRIBUTIONS}")
        if self.max_rejects < 1:
            raise ValueError("max_rejects must be >= 1")
        if not self.scale > 0:
            raise ValueError("scale must be positive")


def _draw(rng: np.random.Generator, cfg: SamplerConfig) -> np.ndarray:
    if cfg.distribution == "cube":
        return rng.uniform(-cfg.scale, cfg.scale, size=(6, 3))
    if cfg.distribution == "gaussian":
        return rng.normal(0.0, cfg.scale, size=(6, 3))
    d = rng.normal(size=(6, 3))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return d * (cfg.scale * rng.uniform(size=(6, 1)) ** (1 / 3))


def sample_with_stats(cfg: SamplerConfig, tol: Optional[Tolerance] = None) -> tuple[PolygonalKnot, dict]:
    """Rejection-sample a general-position hexagonal trefoil; also return rejection counts.

    Cheap filters run first: a hexagon whose xy-projection has fewer than
    three crossings is an unknot and is rejected without classification.
    """
    tol = _tol(tol)
    rng = np.random.default_rng(cfg.seed)
    stats = {"draws": 0, "few_crossings": 0, "not_embedded": 0, "not_general": 0, "unknot": 0, "other": 0}
    rejects = 0
    while rejects < cfg.max_rejects:
        v = _draw(rng, cfg)
        stats["draws"] += 1
        reason = None
        if projected_crossing_count(v) < 3:
            reason = "few_crossings"
        elif embedding_violation(v, tol) is not None:
            reason = "not_embedded"
        else:
            knot = PolygonalKnot(v, check=False)
            if not validate_general_position(knot, tol).ok:
                reason = "not_general"
            else:
                try:
                    name = classify_knot(knot).name
                except QuadknotError:
                    name = "other"
                if name.startswith("trefoil"):
                    stats["accepted"] = name
                    stats["acceptance_rate"] = 1.0 / stats["draws"]
                    return knot, stats
                reason = "unknot" if name == "unknot" else "other"
        stats[reason] += 1
        rejects += 1
    raise RejectBudgetExhausted(f"no trefoil after {rejects} rejections", stats)


def sample_hexagonal_trefoil(cfg: SamplerConfig, tol: Optional[Tolerance] = None) -> PolygonalKnot:
    return sample_with_stats(cfg, tol)[0]


# ---------------------------------------------------------------------------
# Theorem suite


@dataclass
class TheoremReport:
    knot_id: str
    general_position: object = None
    # intersection pattern of disks and edges
    pattern_shift: object = None
    disks_irreducible: object = None
    # quadrisecants of K
    quad_count: object = None
    edge_sets: object = None
    edge_sets_canonical: object = None
    order_types: object = None
    adjacency_types: object = None
    max_residual: object = None
    # plane-pair construction
    plane_pair_distances: object = None
    plane_pair_orders: object = None
    # approximation
    approx_vertices: object = None
    approx_embedded: object = None
    approx_labels: object = None
    corner_arcs_ok: object = None
    corner_triangles_ok: object = None
    class_K: object = None
    class_Khat: object = None
    # quadrisecants of the approximation
    approx_quad_count: object = None
    line_distances: object = None
    timings_ms: dict = field(default_factory=dict)
    degenerate: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    # -- derived ------------------------------------------------------------

    @staticmethod
    def _known(*values) -> bool:
        return all(v is not None and not (isinstance(v, str) and v == DEGENERATE) for v in values)

    @property
    def alternating_all(self) -> Optional[bool]:
        if not self._known(self.order_types):
            return None
        return all(t == "alternating" for t in self.order_types)

    @property
    def type2_all(self) -> Optional[bool]:
        if not self._known(self.adjacency_types):
            return None
        return all(t == 2 for t in self.adjacency_types)

    @property
    def max_line_dist(self) -> Optional[float]:
        if not self._known(self.line_distances) or not self.line_distances:
            return None
        return max(self.line_distances)

    def verdicts(self) -> dict:
        """Per-theorem verdict: True, False, or None when a needed field is degenerate."""
        def v(cond, *needed):
            return bool(cond()) if self._known(*needed) else None

        return {
            "exactly_three": v(lambda: self.quad_count == 3 and self.edge_sets_canonical
                               and self.max_residual < RESIDUAL_MAX,
                               self.quad_count, self.edge_sets_canonical, self.max_residual),
            "alternating": v(lambda: self.alternating_all and self.type2_all,
                             self.order_types, self.adjacency_types),
            "pattern": v(lambda: self.pattern_shift is not None and self.disks_irreducible,
                         self.disks_irreducible) if self.pattern_shift != DEGENERATE else None,
            "plane_pairs": v(lambda: max(self.plane_pair_distances) < PLANE_PAIR_MAX
                             and all(o in PLANE_PAIR_ORDERS for o in self.plane_pair_orders),
                             self.plane_pair_distances, self.plane_pair_orders),
            "approximation": v(lambda: self.approx_embedded and self.approx_vertices == 12
                               and self.class_K == self.class_Khat and self.class_K.startswith("trefoil")
                               and self.corner_arcs_ok and self.corner_triangles_ok,
                               self.approx_embedded, self.approx_vertices, self.class_K, self.class_Khat,
                               self.corner_arcs_ok, self.corner_triangles_ok),
            "approx_quadrisecants": v(lambda: self.approx_quad_count == 3 and len(self.line_distances) == 3
                                      and self.max_line_dist < LINE_MATCH_MAX,
                                      self.approx_quad_count, self.line_distances),
        }

    @property
    def passed(self) -> bool:
        """All verdicts true (degenerate fields count as not passed)."""
        return all(x is True for x in self.verdicts().values())

    @property
    def failed(self) -> bool:
        """Some verdict is definitely false."""
        return any(x is False for x in self.verdicts().values())

    def to_json(self) -> dict:
        out = asdict(self)
        out["alternating_all"] = self.alternating_all
        out["type2_all"] = self.type2_all
        out["max_line_dist"] = self.max_line_dist
        out["verdicts"] = self.verdicts()
        out["passed"] = self.passed
        return out


def knot_id(knot: PolygonalKnot) -> str:
    return hashlib.sha256(np.ascontiguousarray(knot.vertices).tobytes()).hexdigest()[:16]


class _Steps:
    """Run pipeline steps, recording timings, degeneracies and failures per field.

    A :class:`DegenerateError` marks the step's fields DEGENERATE.  Any other
    library error is a negative result: the fields get ``on_fail`` values
    and the message goes to ``report.errors``.
    """

    def __init__(self, report: TheoremReport):
        self.report = report

    def __call__(self, name: str, fields: tuple, fn, on_fail: Optional[dict] = None):
        t0 = time.perf_counter()
        try:
            return fn()
        except DegenerateError as exc:
            self.report.degenerate[name] = f"{exc.code}: {exc}"
            for f in fields:
                setattr(self.report, f, DEGENERATE)
        except QuadknotError as exc:
            log.info("step %s failed: %s", name, exc)
            self.report.errors[name] = f"{exc.code}: {exc}"
            for f in fields:
                setattr(self.report, f, (on_fail or {}).get(f, DEGENERATE))
        finally:
            self.report.timings_ms[name] = round((time.perf_counter() - t0) * 1e3, 3)
        return None

    def skip(self, name: str, fields: tuple, reason: str):
        self.report.degenerate.setdefault(name, f"SKIPPED: {reason}")
        for f in fields:
            setattr(self.report, f, DEGENERATE)


def run_theorem_suite(K: PolygonalKnot, seed: int = 0, tol: Optional[Tolerance] = None) -> TheoremReport:
    """Run every check on a hexagonal trefoil and collect the results.

    ``seed`` picks the projection directions of the knot classifier (the
    same seed is used for the knot and its approximation).
    """
    tol = _tol(tol)
    if K.n != 6:
        raise ValueError("the theorem suite needs a hexagon")
    r = TheoremReport(knot_id(K))
    step = _Steps(r)
    r.general_position = validate_general_position(K, tol).ok

    def pattern():
        r.pattern_shift = classify_hexagon_pattern(disk_edge_intersections(K, tol))
        r.disks_irreducible = not any(is_disk_reducible(K, i, tol) for i in range(6))

    step("pattern", ("pattern_shift", "disks_irreducible"), pattern)

    def quads():
        qs = find_quadrisecants(K, tol)
        r.quad_count = len(qs)
        r.edge_sets = [list(q.edges) for q in qs]
        r.order_types = [q.order_type for q in qs]
        r.adjacency_types = [q.adjacency_type for q in qs]
        r.max_residual = max((q.residual(K) for q in qs), default=0.0)
        return qs

    qs = step("quadrisecants", ("quad_count", "edge_sets", "order_types", "adjacency_types", "max_residual"), quads)
    r.class_K = step("classify_K", ("class_K",), lambda: classify_knot(K, seed).name)

    downstream = ("edge_sets_canonical", "plane_pair_distances", "plane_pair_orders", "approx_vertices",
                  "approx_embedded", "approx_labels", "corner_arcs_ok", "corner_triangles_ok", "class_Khat",
                  "approx_quad_count", "line_distances")
    if qs is None:
        step.skip("downstream", downstream, "quadrisecants are degenerate")
        return r

    # without a pattern match there is no canonical labelling; the identity
    # labelling then makes the dependent checks fail rather than vanish
    shift = r.pattern_shift if isinstance(r.pattern_shift, int) else 0
    r.edge_sets_canonical = {frozenset((e - shift) % 6 for e in q.edges) for q in qs} == CANONICAL_EDGE_SETS
    Kc = K.shifted(shift)

    def plane_pairs():
        dists, orders = [], []
        for i, j in CANONICAL_PLANE_PAIRS:
            pq = plane_pair_quadrisecant(Kc, i, j, tol)
            dists.append(min((plucker_distance(pq.line, q.line) for q in qs), default=float("inf")))
            orders.append(plane_pair_labels(pq, i, j))
        r.plane_pair_distances, r.plane_pair_orders = dists, orders

    step("plane_pairs", ("plane_pair_distances", "plane_pair_orders"), plane_pairs,
         on_fail={"plane_pair_distances": [float("inf")], "plane_pair_orders": ["missed"]})

    def approximate():
        a = build_approximation(K, qs, tol)
        r.approx_vertices = a.n
        r.approx_labels = a.label_names()
        r.approx_embedded = True
        return a

    no_approx = {"approx_vertices": 0, "approx_embedded": False, "approx_labels": []}
    approx = step("approximation", ("approx_vertices", "approx_embedded", "approx_labels"), approximate,
                  on_fail=no_approx)
    step("corner_arcs", ("corner_arcs_ok",),
         lambda: setattr(r, "corner_arcs_ok", verify_corner_arc_property(K, qs).ok),
         on_fail={"corner_arcs_ok": False})
    step("corner_triangles", ("corner_triangles_ok",),
         lambda: setattr(r, "corner_triangles_ok", verify_corner_triangles_disjoint(K, qs, tol).ok),
         on_fail={"corner_triangles_ok": False})

    if approx is None:
        if r.approx_embedded == DEGENERATE:
            step.skip("approx_downstream", ("class_Khat", "approx_quad_count", "line_distances"),
                      "approximation is degenerate")
        else:
            r.class_Khat, r.approx_quad_count, r.line_distances = "none", 0, []
        return r

    Khat = approx.as_knot()
    r.class_Khat = step("classify_Khat", ("class_Khat",), lambda: classify_knot(Khat, seed).name)

    def approx_quads():
        hq = find_quadrisecants(Khat, tol, allow_vertex_hits=True)
        r.approx_quad_count = len(hq)
        r.line_distances = [min(plucker_distance(h.line, q.line) for q in qs) for h in hq]

    step("approx_quadrisecants", ("approx_quad_count", "line_distances"), approx_quads,
         on_fail={"approx_quad_count": "infinite", "line_distances": [float("inf")]})
    return r


# ---------------------------------------------------------------------------
# Batches

CSV_COLUMNS = (
    "trial", "seed", "quad_count", "alternating_all", "pattern_shift", "approx_embedded", "class_K", "class_Khat",
    "approx_quad_count", "max_line_dist", "degenerate_flag", "ms_elapsed",
)


def trial_seed(seed: int, trial: int, attempt: int = 0) -> int:
    words = [seed, trial] if attempt == 0 else [seed, trial, attempt]
    return int(np.random.SeedSequence(words).generate_state(1, np.uint64)[0])


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.3e}"
    return str(x)


def _run_trial(args) -> dict:
    """One trial; a degenerate first attempt is retried once with a fresh seed and marked."""
    trial, cfg = args
    t0 = time.perf_counter()
    flag = ""
    report = None
    for attempt in (0, 1):
        s = trial_seed(cfg.seed, trial, attempt)
        try:
            knot = sample_hexagonal_trefoil(SamplerConfig(s, cfg.distribution, cfg.scale, cfg.max_rejects))
        except RejectBudgetExhausted:
            flag = "REJECT_BUDGET_EXHAUSTED"
            report = None
            break
        report = run_theorem_suite(knot)
        if not report.degenerate:
            break
        flag = "retried" if attempt == 0 else DEGENERATE
    ms = (time.perf_counter() - t0) * 1e3
    row = {"trial": trial, "seed": s, "degenerate_flag": flag, "_ms": ms, "_report": None}
    if report is not None:
        row.update(
            quad_count=report.quad_count,
            alternating_all=report.alternating_all,
            pattern_shift=report.pattern_shift,
            approx_embedded=report.approx_embedded,
            class_K=report.class_K,
            class_Khat=report.class_Khat,
            approx_quad_count=report.approx_quad_count,
            max_line_dist=report.max_line_dist,
        )
        row["_report"] = report.to_json()
    return row


@dataclass
class BatchResult:
    rows: list
    summary: dict
    reports: list

    def csv_text(self, timings: bool = False) -> str:
        """CSV with the fixed column set; ``ms_elapsed`` stays blank unless ``timings``."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in self.rows:
            cells = []
            for c in CSV_COLUMNS:
                if c == "ms_elapsed":
                    cells.append(f"{row['_ms']:.1f}" if timings else "")
                else:
                    cells.append(_cell(row.get(c)))
            w.writerow(cells)
        return buf.getvalue()


def _percentiles(values) -> dict:
    if not values:
        return {}
    arr = np.asarray(values)
    return {f"p{p}": round(float(np.percentile(arr, p)), 3) for p in (50, 90, 99)} | {"max": round(float(arr.max()), 3)}


def run_batch(n: int, cfg: SamplerConfig, workers: int = 1) -> BatchResult:
    """``n`` independent trials; rows come back sorted by trial index."""
    if n < 1:
        raise ValueError("n must be >= 1")
    jobs = [(i, cfg) for i in range(n)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_trial, jobs))
    else:
        rows = [_run_trial(j) for j in jobs]
    rows.sort(key=lambda r: r["trial"])
    reports = [r["_report"] for r in rows]

    counted = [rep for r, rep in zip(rows, reports) if rep is not None and r["degenerate_flag"] != DEGENERATE]
    fractions = {}
    if counted:
        for key in counted[0]["verdicts"]:
            fractions[key] = sum(rep["verdicts"][key] is True for rep in counted) / len(counted)
    step_times: dict[str, list] = {}
    for rep in counted:
        for k, v in rep["timings_ms"].items():
            step_times.setdefault(k, []).append(v)
    summary = {
        "n": n,
        "seed": cfg.seed,
        "distribution": cfg.distribution,
        "scale": cfg.scale,
        "trials_counted": len(counted),
        "retried": sum(r["degenerate_flag"] == "retried" for r in rows),
        "degenerate": sum(r["degenerate_flag"] == DEGENERATE for r in rows),
        "reject_budget_exhausted": sum(r["degenerate_flag"] == "REJECT_BUDGET_EXHAUSTED" for r in rows),
        "fraction_passing": fractions,
        "all_passed": bool(counted) and all(rep["passed"] for rep in counted),
        "timing_ms": {"trial": _percentiles([r["_ms"] for r in rows])}
                     | {k: _percentiles(v) for k, v in step_times.items()},
    }
    return BatchResult(rows, summary, reports)
