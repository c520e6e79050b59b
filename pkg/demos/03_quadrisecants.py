"""
The three quadrisecants
=======================

Every hexagonal trefoil has exactly three lines meeting it four times.  We
find them by brute force over 4-subsets of edges, and again as intersections
of pairs of corner-disk planes.
"""

from quadknot.geom import plucker_distance
from quadknot.harness import CANONICAL_PLANE_PAIRS, SamplerConfig, sample_hexagonal_trefoil
from quadknot.knot import classify_hexagon_pattern, disk_edge_intersections
from quadknot.quadrisecants import find_quadrisecants, plane_pair_labels, plane_pair_quadrisecant

knot = sample_hexagonal_trefoil(SamplerConfig(seed=11))
# relabel so the disk pattern is the reference one
knot = knot.shifted(classify_hexagon_pattern(disk_edge_intersections(knot)))

quads = find_quadrisecants(knot)
for q in quads:
    order = [h.edge for h in q.hits]
    print(f"line {q.id}: edges {q.edges}, met in the order {order} -> {q.order_type}, "
          f"type {q.adjacency_type}, residual {q.residual(knot):.1e}")

print("\nfrom pairs of disk planes:")
for i, j in CANONICAL_PLANE_PAIRS:
    pq = plane_pair_quadrisecant(knot, i, j)
    d = min(plucker_distance(pq.line, q.line) for q in quads)
    print(f"  disks {i} and {j}: edges {pq.edges}, hit labels {plane_pair_labels(pq, i, j)}, distance {d:.1e}")
