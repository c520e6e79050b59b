from pathlib import Path

import numpy as np
import pytest

from quadknot.knot import PolygonalKnot, classify_hexagon_pattern, disk_edge_intersections, load_knot
from quadknot.quadrisecants import find_quadrisecants

DATA = Path(__file__).parent / "data"

# edge sets of the three quadrisecants of a canonically labelled hexagonal trefoil, named 1, 2, 3
CANONICAL_NAMES = {frozenset({0, 1, 3, 4}): 1, frozenset({1, 2, 4, 5}): 2, frozenset({2, 3, 5, 0}): 3}

ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


def canonical(knot: PolygonalKnot) -> PolygonalKnot:
    return knot.shifted(classify_hexagon_pattern(disk_edge_intersections(knot)))


def named_quads(knot: PolygonalKnot) -> dict:
    """Quadrisecants of a canonically labelled trefoil keyed by name 1, 2, 3."""
    return {CANONICAL_NAMES[frozenset(q.edges)]: q for q in find_quadrisecants(knot)}


def convex_hexagon(eps: float = 0.01, rng=None) -> PolygonalKnot:
    """Regular hexagon in the xy-plane with alternating (or random) small z offsets."""
    t = np.arange(6) * np.pi / 3
    z = eps * (-1.0) ** np.arange(6) if rng is None else rng.uniform(-eps, eps, 6)
    return PolygonalKnot(np.column_stack([np.cos(t), np.sin(t), z]))


@pytest.fixture(scope="session")
def trefoil() -> PolygonalKnot:
    return load_knot(DATA / "trefoil_right.json")


@pytest.fixture(scope="session")
def trefoil_left() -> PolygonalKnot:
    return load_knot(DATA / "trefoil_left.json")


@pytest.fixture(scope="session")
def canonical_trefoil(trefoil) -> PolygonalKnot:
    return canonical(trefoil)


@pytest.fixture
def unknot_hexagon() -> PolygonalKnot:
    return convex_hexagon()
