"""Finite unions of half-open intervals of [0, 1].

Sets are compared up to null sets, so the open/closed status of endpoints
is never tracked: ``[x, y)`` is the nominal form and the last interval is
allowed to reach 1.
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class IntervalSet:
    intervals: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "intervals", _normalize(self.intervals))

    @classmethod
    def full(cls):
        return cls(((0.0, 1.0),))

    @classmethod
    def empty(cls):
        return cls(())

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __bool__(self):
        return bool(self.intervals)

    @property
    def length(self):
        return float(sum(b - a for a, b in self.intervals))

    def endpoints(self):
        return np.array([x for iv in self.intervals for x in iv], dtype=float)

    def contains(self, x):
        return any(a <= x < b or (b == 1.0 and x == 1.0) for a, b in self.intervals)

    def complement(self):
        out, prev = [], 0.0
        for a, b in self.intervals:
            if a > prev:
                out.append((prev, a))
            prev = b
        if prev < 1.0:
            out.append((prev, 1.0))
        return IntervalSet(tuple(out))

    def union(self, other):
        return IntervalSet(self.intervals + tuple(other))

    def intersection(self, other):
        out = []
        i = j = 0
        A, B = self.intervals, tuple(other)
        while i < len(A) and j < len(B):
            lo = max(A[i][0], B[j][0])
            hi = min(A[i][1], B[j][1])
            if lo < hi:
                out.append((lo, hi))
            if A[i][1] < B[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(tuple(out))

    def difference(self, other):
        return self.intersection(IntervalSet(tuple(other)).complement())

    def symmetric_difference(self, other):
        other = IntervalSet(tuple(other))
        return self.difference(other).union(other.difference(self))

    def issubset(self, other, tol=0.0):
        """Inclusion up to a set of length ``tol``."""
        return self.difference(other).length <= tol

    def almost_equal(self, other, tol=1e-12):
        return self.symmetric_difference(other).length <= tol

    def to_json(self):
        return [[a, b] for a, b in self.intervals]

    @classmethod
    def from_json(cls, data):
        return cls(tuple((float(a), float(b)) for a, b in data))

    def __repr__(self):
        body = " U ".join(f"[{a:.6g}, {b:.6g})" for a, b in self.intervals)
        return f"IntervalSet({body or 'empty'})"


def _normalize(intervals):
    ivs = []
    for a, b in intervals:
        a, b = max(float(a), 0.0), min(float(b), 1.0)
        if a < b:
            ivs.append((a, b))
    ivs.sort()
    out = []
    for a, b in ivs:
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return tuple(out)
