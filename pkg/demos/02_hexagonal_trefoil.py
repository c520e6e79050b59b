"""
A random hexagonal trefoil
==========================

Six random points in a cube close up to a trefoil now and then.  We sample
one, look at how its triangular corner disks are pierced by the edges and
name its knot type.
"""

from quadknot.harness import SamplerConfig, sample_with_stats
from quadknot.invariants import classify_knot
from quadknot.knot import (
    HEXAGON_PATTERN,
    classify_hexagon_pattern,
    disk_edge_intersections,
    is_disk_reducible,
    validate_general_position,
)

knot, stats = sample_with_stats(SamplerConfig(seed=3))
print(f"accepted after {stats['draws']} draws:", {k: v for k, v in stats.items() if k != "draws"})
print(knot.vertices.round(3))
print("general position:", validate_general_position(knot).ok)

# which edges pierce which corner disks
pattern = disk_edge_intersections(knot)
print("\n(disk, edge) pairs:", sorted(pattern.pairs))
print("reference pattern: ", sorted(HEXAGON_PATTERN.pairs))
print("matches after relabelling by", classify_hexagon_pattern(pattern))
print("irreducible disks:", [i for i in range(6) if not is_disk_reducible(knot, i)])

kc = classify_knot(knot)
print(f"\nknot type {kc.name}: {kc.fox3} Fox 3-colorings, Jones {kc.jones_t.format('t')}")
