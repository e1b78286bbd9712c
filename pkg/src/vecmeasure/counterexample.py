"""Certificate that maximal subsets can fail to exist for three-dimensional measures.

For ``nu = (1, 2x, rho)`` and ``p = (1/2, 1/2, 1/2)`` two sets ``Z1``, ``Z2``
with ``nu(Zi) = p`` contain subsets ``Wi`` with ``nu(Wi) = qi``, yet ``q2`` is
outside the range of ``Z1`` and ``q1`` outside the range of ``Z2``. No single
set with measure ``p`` can therefore have a range containing both.

Exclusion is shown on coordinate pairs: a point whose ``(nu_1, nu_k)``
projection lies below the lower boundary of the projected range is outside
the three-dimensional range too.
"""
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from . import catalog
from .errors import CertificationFailed
from .ranges import lower_boundary

MEASURE_TOL = 1e-12
MARGIN_TOL = 1e-9


@dataclass
class Check:
    name: str
    passed: bool
    error: float = None
    margin: float = None
    detail: dict = field(default_factory=dict)


@dataclass
class CertificateReport:
    """Named checks. Equality checks report ``error``; exclusion checks report
    ``margin``, the gap between the lower boundary and the excluded point."""

    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def first_failure(self):
        return next((c for c in self.checks if not c.passed), None)

    def to_dict(self):
        return {"passed": self.passed, "checks": [asdict(c) for c in self.checks]}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _measure_check(name, nu, s, target):
    value = nu.measure_of(s)
    err = float(np.abs(value - np.asarray(target)).max())
    return Check(name, err <= MEASURE_TOL, error=err,
                 detail={"value": value.tolist(), "expected": list(target)})


def _exclusion_check(name, nu, z, q, k):
    """``q`` lies strictly below the ``(nu_1, nu_k)`` range of ``z`` at ``q[0]``."""
    pair = nu.restrict(z).components(0, k)
    low = float(lower_boundary(pair, q[0]))
    margin = low - q[k]
    return Check(name, margin > MARGIN_TOL, margin=margin,
                 detail={"coords": [0, k], "at": q[0], "lower_boundary": low, "point": q[k]})


def certify_counterexample(third_density=None, strict=True):
    """Run the six checks; raise ``CertificationFailed`` on the first failure if ``strict``."""
    nu = catalog.three_dim(third_density)
    p, q1, q2 = catalog.THREE_DIM_P, catalog.THREE_DIM_Q1, catalog.THREE_DIM_Q2
    checks = [
        _measure_check("nu(Z1) = p", nu, catalog.Z1, p),
        _measure_check("nu(Z2) = p", nu, catalog.Z2, p),
        _measure_check("nu(W1) = q1", nu, catalog.W1, q1),
        _measure_check("nu(W2) = q2", nu, catalog.W2, q2),
        _exclusion_check("q2 not in R(Z1)", nu, catalog.Z1, q2, 2),
        _exclusion_check("q1 not in R(Z2)", nu, catalog.Z2, q1, 1),
    ]
    for c, (w, z) in zip(checks[2:4], [(catalog.W1, catalog.Z1), (catalog.W2, catalog.Z2)]):
        inside = w.issubset(z)
        c.detail["subset"] = inside
        c.passed = c.passed and inside
    report = CertificateReport(checks)
    bad = report.first_failure()
    if strict and bad is not None:
        raise CertificationFailed(f"check failed: {bad.name}", report=report)
    return report
