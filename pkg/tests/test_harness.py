import csv
import io

import numpy as np
import pytest

import quadknot.harness as harness
from quadknot.errors import NonGenericError, RejectBudgetExhausted
from quadknot.harness import (
    CSV_COLUMNS,
    DEGENERATE,
    SamplerConfig,
    knot_id,
    run_batch,
    run_theorem_suite,
    sample_hexagonal_trefoil,
    sample_with_stats,
    trial_seed,
)
from quadknot.invariants import classify_knot
from quadknot.knot import validate_general_position


@pytest.fixture(scope="module")
def report(trefoil):
    return run_theorem_suite(trefoil)


def test_sampler_deterministic():
    a = sample_hexagonal_trefoil(SamplerConfig(seed=5))
    b = sample_hexagonal_trefoil(SamplerConfig(seed=5))
    assert np.array_equal(a.vertices, b.vertices)


@pytest.mark.parametrize("dist", ["cube", "ball", "gaussian"])
def test_sampler_distributions(dist):
    knot, stats = sample_with_stats(SamplerConfig(seed=1, distribution=dist, scale=3.0))
    assert validate_general_position(knot).ok
    assert classify_knot(knot).name == stats["accepted"]
    assert stats["accepted"].startswith("trefoil")
    assert stats["draws"] == 1 + sum(stats[k] for k in ("few_crossings", "not_embedded", "not_general",
                                                        "unknot", "other"))
    if dist == "cube":
        assert np.abs(knot.vertices).max() <= 3.0
    if dist == "ball":
        assert np.linalg.norm(knot.vertices, axis=1).max() <= 3.0


def test_reject_budget():
    with pytest.raises(RejectBudgetExhausted) as info:
        sample_with_stats(SamplerConfig(seed=0, max_rejects=3))
    assert info.value.stats["draws"] == 3


def test_sampler_config_validation():
    for bad in ({"distribution": "sphere"}, {"max_rejects": 0}, {"scale": 0.0}, {"scale": float("nan")}):
        with pytest.raises(ValueError):
            SamplerConfig(**bad)


def test_suite_passes_on_trefoil(report):
    assert report.passed and not report.failed
    assert all(report.verdicts().values())
    assert report.quad_count == 3 and report.approx_vertices == 12
    assert report.class_K == report.class_Khat == "trefoil_right"
    assert report.approx_quad_count == 3 and report.max_line_dist < 1e-9
    assert report.plane_pair_orders and all(o in ("bqpa", "apqb") for o in report.plane_pair_orders)
    assert not report.degenerate and not report.errors
    data = report.to_json()
    assert data["passed"] is True and data["verdicts"]["alternating"] is True


def test_suite_relabelling_invariant(trefoil, report):
    other = run_theorem_suite(trefoil.shifted(1))
    assert other.verdicts() == report.verdicts()
    assert other.pattern_shift == (report.pattern_shift + 1) % 2
    assert other.knot_id != report.knot_id
    assert sorted(other.line_distances) == pytest.approx(sorted(report.line_distances), abs=1e-9)


def test_suite_on_unknot_fails(unknot_hexagon):
    r = run_theorem_suite(unknot_hexagon)
    assert r.quad_count == 0 and r.pattern_shift is None
    assert r.approx_embedded is False and r.class_Khat == "none"
    assert r.failed and not r.passed
    assert r.verdicts()["exactly_three"] is False and r.verdicts()["pattern"] is False
    assert "approximation" in r.errors


def test_suite_marks_degenerate_steps(trefoil, monkeypatch):
    def boom(*args, **kwargs):
        raise NonGenericError("forced")

    monkeypatch.setattr(harness, "find_quadrisecants", boom)
    r = run_theorem_suite(trefoil)
    assert r.quad_count == DEGENERATE and r.approx_embedded == DEGENERATE
    assert "quadrisecants" in r.degenerate
    assert r.verdicts()["exactly_three"] is None and r.verdicts()["pattern"] is True
    assert not r.passed and not r.failed


def test_suite_needs_hexagon():
    from quadknot.knot import PolygonalKnot

    with pytest.raises(ValueError):
        run_theorem_suite(PolygonalKnot([[0, 0, 0], [1, 0, 0], [0, 1, 0.1], [0, 0, 1]]))


def test_knot_id_stable(trefoil):
    assert knot_id(trefoil) == knot_id(trefoil.shifted(6)) and len(knot_id(trefoil)) == 16


def test_trial_seeds_distinct():
    seeds = {trial_seed(7, t, a) for t in range(50) for a in (0, 1)}
    assert len(seeds) == 100
    assert trial_seed(7, 3) == trial_seed(7, 3)


def test_batch_of_one_matches_suite():
    cfg = SamplerConfig(seed=4)
    result = run_batch(1, cfg)
    knot = sample_hexagonal_trefoil(SamplerConfig(seed=trial_seed(4, 0)))
    direct = run_theorem_suite(knot).to_json()
    batch = result.reports[0]
    for key in ("timings_ms",):
        direct.pop(key), batch.pop(key)
    assert batch == direct
    rows = list(csv.reader(io.StringIO(result.csv_text())))
    assert tuple(rows[0]) == CSV_COLUMNS
    row = dict(zip(rows[0], rows[1]))
    assert row["quad_count"] == "3" and row["alternating_all"] == "true" and row["ms_elapsed"] == ""
    assert row["seed"] == str(trial_seed(4, 0))
    assert result.summary["all_passed"] and result.summary["fraction_passing"]["approximation"] == 1.0
    assert result.csv_text(timings=True).splitlines()[1].split(",")[-1] != ""


def test_batch_validation():
    with pytest.raises(ValueError):
        run_batch(0, SamplerConfig())
