"""
Checking the whole story on many samples
========================================

``run_batch`` samples trefoils with per-trial seeds, runs every check on
each and tabulates the results.  The CSV is byte-for-byte reproducible.
"""

import json

from quadknot.harness import SamplerConfig, run_batch

result = run_batch(10, SamplerConfig(seed=7, distribution="gaussian"))
print(result.csv_text())
print(json.dumps(result.summary["fraction_passing"], indent=2))
print("median ms per trial:", result.summary["timing_ms"]["trial"]["p50"])
