"""Why maximal subsets need not exist in three dimensions.

Two sets carry the same measure vector, yet each has a subset whose value
the other set cannot reach. The exclusions are read off two-dimensional
projections of the ranges.

    python3 demos/three_dim_certificate.py
"""
from vecmeasure import catalog
from vecmeasure.counterexample import certify_counterexample

report = certify_counterexample(strict=False)
for c in report.checks:
    status = "ok  " if c.passed else "FAIL"
    value = f"error {c.error:.1e}" if c.error is not None else f"margin {c.margin:.6f}"
    print(f"{status} {c.name:<18} {value}")
print("certificate holds:", report.passed)

print("\nwith third density 2x the instance falls apart:")
weak = certify_counterexample(catalog.sawtooth(2.0), strict=False)
print("failing checks:", [c.name for c in weak.checks if not c.passed])
