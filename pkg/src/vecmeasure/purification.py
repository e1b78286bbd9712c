"""Partitions of [0, 1] with prescribed two-dimensional measures.

A family of targets ``p^1, ..., p^n`` is realizable as ``mu(Z^a) = p^a`` for a
partition ``{Z^a}`` exactly when the targets sum to ``mu(X)`` and every
partial sum lies in the range. ``purify`` builds the partition by peeling off
one block at a time, keeping the maximal subset for the remainder.
"""
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import Infeasible, InvalidKernel, NotInRange
from .geometry import locate_points
from .intervals import IntervalSet
from .measure import PiecewisePoly
from .ranges import compute_range, maximal_set

SUM_TOL = 1e-9
MEMBER_TOL = 1e-9
FINAL_TOL = 1e-8
STEP_TOL = 1e-10
MAX_EXHAUSTIVE = 20
N_SAMPLES = 10**6
_BATCH = 1 << 16
POLICIES = ("reject", "absorb-into-last")


@dataclass(frozen=True)
class TargetAllocation:
    """Ordered targets ``p^a`` (rows of ``targets``).

    With ``residual_policy="absorb-into-last"`` a shortfall of the sum against
    ``mu(X)`` is added to the last target; ``"reject"`` leaves it to the
    feasibility check.
    """

    targets: np.ndarray
    residual_policy: str = "reject"
    labels: tuple = None

    def __post_init__(self):
        t = np.array(self.targets, dtype=float)
        if t.ndim != 2 or t.shape[0] < 1:
            raise ValueError("targets must be a non-empty list of vectors")
        if not np.all(np.isfinite(t)):
            raise ValueError("targets must be finite")
        if self.residual_policy not in POLICIES:
            raise ValueError(f"residual_policy must be one of {POLICIES}")
        labels = tuple(range(1, len(t) + 1)) if self.labels is None else tuple(self.labels)
        if len(labels) != len(t):
            raise ValueError("one label per target required")
        t.setflags(write=False)
        object.__setattr__(self, "targets", t)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self):
        return len(self.targets)

    def resolved(self, total, tol=SUM_TOL):
        """Targets after applying the residual policy against ``total``."""
        t = self.targets.copy()
        short = np.asarray(total, dtype=float) - t.sum(axis=0)
        if self.residual_policy == "absorb-into-last" and np.all(short >= -tol):
            t[-1] += short
        return t

    def to_json(self):
        return {"targets": self.targets.tolist(), "residual_policy": self.residual_policy,
                "labels": list(self.labels)}

    @classmethod
    def from_json(cls, data):
        return cls(data["targets"], data.get("residual_policy", "reject"), data.get("labels"))


@dataclass(frozen=True)
class TransitionKernel:
    """Probabilities ``w_a(x)`` of each label, summing to one at every ``x``."""

    labels: tuple
    weights: tuple

    def __post_init__(self):
        labels, weights = tuple(self.labels), tuple(self.weights)
        if not labels or len(labels) != len(weights):
            raise InvalidKernel("need one weight function per label")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "weights", weights)
        grid = np.unique(np.concatenate([w.breakpoints for w in weights]))
        h = np.diff(grid)[:, None] * np.array([0.0, 0.5, 1.0])[None, :]
        # row sums are quadratics, so ends and midpoint of each piece settle them
        W = np.stack([_piece_values(w.on_grid(grid), h) for w in weights])
        if W.min() < -SUM_TOL:
            raise InvalidKernel("negative weight")
        dev = float(np.abs(W.sum(axis=0) - 1.0).max())
        if dev > SUM_TOL:
            raise InvalidKernel(f"row sums deviate from 1 by {dev:.3g}")

    @classmethod
    def from_json(cls, data):
        try:
            weights = [PiecewisePoly.from_json(w) for w in data["weights"]]
        except ValueError as exc:
            raise InvalidKernel(str(exc)) from exc
        return cls(tuple(data["labels"]), tuple(weights))

    def to_json(self):
        return {"labels": list(self.labels), "weights": [w.to_json() for w in self.weights]}


def _piece_values(C, t):
    return C[:, :1] + t * (C[:, 1:2] + t * C[:, 2:3])


def kernel_targets(pi, mu):
    """``p^a = integral of w_a d mu`` for each label, as a TargetAllocation."""
    grid = np.unique(np.concatenate([mu.grid] + [w.breakpoints for w in pi.weights]))
    # products are quartic: three Gauss points per piece integrate them exactly
    nodes, wts = np.polynomial.legendre.leggauss(3)
    h = np.diff(grid)
    x = (0.5 * (grid[:-1] + grid[1:]))[:, None] + 0.5 * h[:, None] * nodes[None, :]
    scale = (0.5 * h)[:, None] * wts[None, :]
    G = np.stack([d(x) for d in mu.densities])
    targets = [[float((w(x) * g * scale).sum()) for g in G] for w in pi.weights]
    return TargetAllocation(targets, labels=pi.labels)


@dataclass
class FeasibilityReport:
    """Outcome of the two realizability conditions.

    ``witness`` names a subset ``B`` (indices into the targets): one whose
    partial sum leaves the range, or else all indices when the total is wrong.
    """

    sum_error: np.ndarray
    sum_ok: bool
    subsets_ok: bool
    exhaustive: bool
    n_checked: int
    seed: int = None
    witness: tuple = None
    witness_point: list = None
    witness_excess: float = None
    boundary_contacts: list = field(default_factory=list)
    n_boundary_contacts: int = 0

    @property
    def feasible(self):
        return self.sum_ok and self.subsets_ok

    @property
    def mode(self):
        return "exhaustive" if self.exhaustive else "sampled, not exhaustive"

    def to_dict(self):
        return {
            "feasible": self.feasible, "sum_ok": self.sum_ok, "sum_error": self.sum_error.tolist(),
            "subsets_ok": self.subsets_ok, "mode": self.mode, "n_checked": self.n_checked,
            "seed": self.seed, "witness": None if self.witness is None else list(self.witness),
            "witness_point": self.witness_point, "witness_excess": self.witness_excess,
            "boundary_contacts": [list(b) for b in self.boundary_contacts],
            "n_boundary_contacts": self.n_boundary_contacts,
        }


def _subset_batches(n, exhaustive, n_samples, rng):
    if exhaustive:
        total = 1 << n
        bits = 1 << np.arange(n, dtype=np.int64)
        for start in range(0, total, _BATCH):
            idx = np.arange(start, min(start + _BATCH, total), dtype=np.int64)
            yield (idx[:, None] & bits[None, :]) != 0
    else:
        for start in range(0, n_samples, _BATCH):
            yield rng.integers(0, 2, size=(min(_BATCH, n_samples - start), n)).astype(bool)


def check_conditions(t, rng_result, tol=MEMBER_TOL, max_exhaustive=MAX_EXHAUSTIVE,
                     n_samples=N_SAMPLES, seed=0, max_contacts=20):
    """Test the sum condition and partial-sum membership for a target family.

    All ``2^n`` subsets are tested when ``n <= max_exhaustive``; otherwise
    ``n_samples`` random subsets drawn with ``seed``. Membership allows
    ``tol`` plus the sampling error of the range; partial sums within that
    distance of an edge are recorded as boundary contacts.
    """
    total = np.asarray(rng_result.total, dtype=float)
    targets = t.resolved(total)
    n = len(targets)
    err = targets.sum(axis=0) - total
    sum_ok = bool(np.abs(err).max() <= SUM_TOL)
    exhaustive = n <= max_exhaustive
    gen = np.random.default_rng(seed)
    region = rng_result.region
    mtol = tol + rng_result.sampling_error
    report = FeasibilityReport(sum_error=err, sum_ok=sum_ok, subsets_ok=True,
                               exhaustive=exhaustive, n_checked=0,
                               seed=None if exhaustive else seed)
    for B in _subset_batches(n, exhaustive, n_samples, gen):
        pts = B.astype(float) @ targets
        inside, contact, excess = locate_points(region, pts, mtol)
        report.n_checked += len(B)
        # the empty and the full subset sit on the boundary by construction
        hits = np.flatnonzero(contact & B.any(axis=1) & ~B.all(axis=1))
        report.n_boundary_contacts += len(hits)
        for h in hits[:max(0, max_contacts - len(report.boundary_contacts))]:
            report.boundary_contacts.append(tuple(np.flatnonzero(B[h]).tolist()))
        if not inside.all():
            bad = int(np.flatnonzero(~inside)[0])
            report.subsets_ok = False
            report.witness = tuple(np.flatnonzero(B[bad]).tolist())
            report.witness_point = pts[bad].tolist()
            report.witness_excess = float(excess[bad])
            break
    if not sum_ok and report.witness is None:
        report.witness = tuple(range(n))
        report.witness_point = targets.sum(axis=0).tolist()
    return report


@dataclass
class PurifyResult:
    parts: list
    labels: tuple
    achieved: np.ndarray
    step_errors: list
    report: FeasibilityReport = None

    @property
    def steps_ok(self):
        return all(e <= STEP_TOL for e in self.step_errors)

    def to_json(self):
        return {
            "partition": {str(l): p.to_json() for l, p in zip(self.labels, self.parts)},
            "achieved": self.achieved.tolist(),
            "step_errors": self.step_errors,
            "steps_ok": self.steps_ok,
            "report": None if self.report is None else self.report.to_dict(),
        }


def purify(t, mu, check=True, rng_result=None, **check_kw):
    """Partition ``[0, 1]`` into sets ``Z^a`` with ``mu(Z^a) = p^a``.

    Step ``k`` keeps the maximal subset of the current remainder with
    measure ``mu(remainder) - p^k`` and assigns the rest to label ``k``; the
    last label takes what remains. Raises ``Infeasible`` (carrying the
    feasibility report) when the conditions fail or an intermediate target
    leaves the current range.
    """
    report = None
    if check:
        report = check_conditions(t, rng_result or compute_range(mu), **check_kw)
        if not report.feasible:
            raise Infeasible(f"targets are not realizable (witness B = {report.witness})", report)
    targets = t.resolved(mu.total)
    current = IntervalSet.full()
    parts, step_errors = [], []
    for k, p in enumerate(targets[:-1]):
        sub = mu.restrict(current)
        try:
            keep = maximal_set(sub, sub.total - p)[0].intersection(current)
        except NotInRange as exc:
            raise Infeasible(f"step {k + 1}: remainder target left the range", report) from exc
        part = current.difference(keep)
        step_errors.append(float(np.abs(mu.measure_of(part) - p).max()))
        parts.append(part)
        current = keep
    parts.append(current)
    achieved = np.array([mu.measure_of(z) for z in parts])
    return PurifyResult(parts, t.labels, achieved, step_errors, report)


@dataclass
class PartitionReport:
    overlaps: list
    cover_gap: float
    errors: np.ndarray
    tol: float

    @property
    def disjoint(self):
        return not self.overlaps

    @property
    def covers(self):
        return self.cover_gap <= 1e-12

    @property
    def max_error(self):
        return float(np.abs(self.errors).max()) if self.errors.size else 0.0

    @property
    def passed(self):
        return self.disjoint and self.covers and self.max_error <= self.tol

    def to_dict(self):
        return {"passed": self.passed, "disjoint": self.disjoint, "overlaps": self.overlaps,
                "covers": self.covers, "cover_gap": self.cover_gap,
                "errors": self.errors.tolist(), "max_error": self.max_error}


def verify_partition(parts, t, mu, tol=FINAL_TOL):
    """Disjointness, cover of ``[0, 1]`` and per-part measure errors."""
    parts = [p if isinstance(p, IntervalSet) else IntervalSet(tuple(p)) for p in parts]
    overlaps = []
    for (i, a), (j, b) in itertools.combinations(enumerate(parts), 2):
        ov = a.intersection(b).length
        if ov > 1e-12:
            overlaps.append((i, j, ov))
    union = IntervalSet.empty()
    for p in parts:
        union = union.union(p)
    targets = t.resolved(mu.total)
    errors = np.array([mu.measure_of(p) - q for p, q in zip(parts, targets)])
    if len(parts) != len(targets):
        errors = np.full((max(len(parts), len(targets)), targets.shape[1]), np.inf)
    return PartitionReport(overlaps, 1.0 - union.length, errors, tol)
