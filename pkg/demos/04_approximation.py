"""
Straightening between quadrisecant points
=========================================

The twelve points where the quadrisecants meet the knot cut it into arcs.
Replacing each arc by a chord gives a 12-gon of the same knot type whose
quadrisecants are the same three lines.
"""

from quadknot.approximation import (
    build_approximation,
    verify_corner_arc_property,
    verify_corner_triangles_disjoint,
)
from quadknot.geom import plucker_distance
from quadknot.harness import SamplerConfig, sample_hexagonal_trefoil
from quadknot.invariants import classify_knot
from quadknot.quadrisecants import find_quadrisecants

knot = sample_hexagonal_trefoil(SamplerConfig(seed=11))
quads = find_quadrisecants(knot)

approx = build_approximation(knot, quads)
print("edges of the 12-gon:", " ".join(approx.label_names()))
print("each corner arc holds one more secant point:", verify_corner_arc_property(knot, quads).ok)
print("corner triangles are disjoint:", verify_corner_triangles_disjoint(knot, quads).ok)

khat = approx.as_knot()
print("\nknot types:", classify_knot(knot).name, "->", classify_knot(khat).name)

# the 12-gon is far from general position (each line passes through four of
# its vertices), so the finder has to be told to accept vertex hits
again = find_quadrisecants(khat, allow_vertex_hits=True)
for q in again:
    d = min(plucker_distance(q.line, p.line) for p in quads)
    print(f"line through vertices {[h.edge for h in q.hits]}: distance to an original {d:.1e}")
