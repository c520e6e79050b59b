"""
Lines, segments and transversals
================================

Plücker coordinates turn "do these two lines meet" into a bilinear form.
Here we plant a line, thread four segments through it and recover the line
from the segments alone.
"""

import numpy as np

from quadknot.geom import Segment3, plucker_distance, plucker_of_points, side_form
from quadknot.quadrisecants import oracle_transversals, transversals_four_segments

rng = np.random.default_rng(0)

# the hidden line
p0, d = rng.normal(size=3), rng.normal(size=3)
hidden = plucker_of_points(p0, p0 + d)

# four unit segments, each crossing the hidden line somewhere in its middle
segments = []
for t in (-1.5, -0.3, 0.4, 1.8):
    c, u = p0 + t * d, rng.normal(size=3)
    segments.append(Segment3(c - 0.5 * u, c + 0.5 * u))

# two lines meet exactly when their reciprocal product vanishes
print("reciprocal products with the hidden line:",
      [f"{side_form(hidden, s.carrier()):+.1e}" for s in segments])

found = transversals_four_segments(segments)
print(f"\n{len(found)} transversal(s) through all four segments")
for tr in found:
    print("  distance to hidden line:", f"{plucker_distance(tr.line, hidden):.1e}",
          " parameters on the segments:", np.round(tr.t_edges, 3))

# an independent grid search agrees
oracle = oracle_transversals(segments)
print("oracle finds", len(oracle), "line(s); max disagreement",
      f"{max(min(plucker_distance(a.line, b) for b in oracle) for a in found):.1e}")
