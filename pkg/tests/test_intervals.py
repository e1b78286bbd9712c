import numpy as np
import pytest
from hypothesis import given, strategies as st

from vecmeasure.intervals import IntervalSet

bounds = st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), max_size=6)


def make(pairs):
    return IntervalSet(tuple((min(a, b), max(a, b)) for a, b in pairs))


def test_normalizes_overlaps_and_touching():
    s = IntervalSet(((0.5, 0.7), (0.1, 0.3), (0.3, 0.4), (0.6, 0.9), (0.95, 0.95)))
    assert s.intervals == ((0.1, 0.4), (0.5, 0.9))


def test_clips_to_unit_interval():
    assert IntervalSet(((-1.0, 0.2), (0.8, 3.0))).intervals == ((0.0, 0.2), (0.8, 1.0))


def test_complement_and_contains():
    s = IntervalSet(((0.0, 0.25), (0.75, 1.0)))
    assert s.complement().intervals == ((0.25, 0.75),)
    assert s.contains(1.0) and s.contains(0.0) and not s.contains(0.25)
    assert IntervalSet.empty().complement() == IntervalSet.full()


def test_json_round_trip():
    s = IntervalSet(((0.1, 0.2), (0.3, 0.45)))
    assert IntervalSet.from_json(s.to_json()) == s


@given(bounds, bounds)
def test_set_algebra_lengths(a, b):
    A, B = make(a), make(b)
    inter, union = A.intersection(B), A.union(B)
    assert union.length + inter.length == pytest.approx(A.length + B.length, abs=1e-12)
    assert A.difference(B).length == pytest.approx(A.length - inter.length, abs=1e-12)
    assert A.symmetric_difference(B).length == pytest.approx(union.length - inter.length, abs=1e-12)
    assert inter.issubset(A, 1e-12) and A.issubset(union, 1e-12)


@given(bounds)
def test_invariants_hold(a):
    s = make(a)
    ends = s.endpoints()
    assert np.all(np.diff(ends) >= 0)
    gaps = ends[2::2] - ends[1:-1:2]
    assert np.all(gaps > 0)
    assert s.length <= 1.0
    assert s.union(s.complement()).almost_equal(IntervalSet.full())
