import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from vecmeasure import catalog
from vecmeasure.geometry import ConvexRegion
from vecmeasure.intervals import IntervalSet
from vecmeasure.measure import random_measure

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def linear():
    return catalog.linear_ratio()


@pytest.fixture
def steps():
    return catalog.step_ratio()


@pytest.fixture
def singular():
    return catalog.singular_pair()


def random_measures(seed, count, **kw):
    rng = np.random.default_rng(seed)
    return [random_measure(rng, **kw) for _ in range(count)]


def random_interval_set(rng, k=3):
    ends = np.sort(rng.uniform(0, 1, 2 * k))
    return IntervalSet(tuple(zip(ends[::2], ends[1::2])))


def random_polygon(rng, n=None, scale=1.0):
    n = int(rng.integers(1, 12)) if n is None else n
    centre = rng.uniform(-1, 1, 2)
    return ConvexRegion(centre + scale * rng.normal(size=(n, 2)))


def random_partition_targets(rng, mu, n):
    """Targets realized by a random partition of [0, 1] into ``n`` interval sets."""
    cuts = np.concatenate([[0.0], np.sort(rng.uniform(0, 1, 3 * n)), [1.0]])
    labels = np.concatenate([np.arange(n), rng.integers(0, n, len(cuts) - 1 - n)])
    rng.shuffle(labels)
    parts = [IntervalSet(tuple((cuts[i], cuts[i + 1]) for i in np.flatnonzero(labels == a)))
             for a in range(n)]
    return np.array([mu.measure_of(z) for z in parts])
