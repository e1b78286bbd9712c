"""Turning a randomized assignment into a deterministic one.

The kernel sends x to label 1 with probability x and to label 2 otherwise.
Under mu = (1, 2x) dx the expected measures are (1/2, 2/3) and (1/2, 1/3);
purify finds a partition of [0, 1] realizing exactly these vectors. Then an
infeasible family is rejected with the offending subset of targets.

    python3 demos/purification.py
"""
from vecmeasure import catalog
from vecmeasure.errors import Infeasible
from vecmeasure.measure import PiecewisePoly
from vecmeasure.purification import (TargetAllocation, TransitionKernel, kernel_targets, purify,
                                     verify_partition)

mu = catalog.linear_ratio()
kernel = TransitionKernel((1, 2), (PiecewisePoly([0, 1], [[0.0, 1.0]]),
                                   PiecewisePoly([0, 1], [[1.0, -1.0]])))
t = kernel_targets(kernel, mu)
print("targets from the kernel:", t.targets.round(12).tolist())

res = purify(t, mu)
for label, part, got in zip(res.labels, res.parts, res.achieved):
    print(f"  label {label}: {part}  measure {got.round(12).tolist()}")
print("verification:", verify_partition(res.parts, t, mu).to_dict())

try:
    purify(TargetAllocation([(0.5, 0.05), (0.5, 0.95)]), mu)
except Infeasible as exc:
    r = exc.report
    print(f"rejected: subset {list(r.witness)} sums to {r.witness_point}, outside the range")
