import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vecmeasure import catalog
from vecmeasure import geometry as geo
from vecmeasure.errors import NotInRange
from vecmeasure.geometry import ConvexRegion, hausdorff
from vecmeasure.intervals import IntervalSet
from vecmeasure.measure import random_measure
from vecmeasure.ranges import (compute_range, lower_boundary, maximal_subset, minimal_subset,
                               q_set, range_of_subset)

from conftest import random_interval_set

SQUARE = ConvexRegion.box(0, 0, 1, 1)
P = np.array(catalog.FIGURE_P)
seeds = st.integers(0, 100_000)


def lens(n=4000):
    """Region between ``b = a^2`` and ``b = 2a - a^2``, densely sampled."""
    a = np.linspace(0, 1, n)
    return ConvexRegion(np.vstack([np.column_stack([a, a * a]), np.column_stack([a, 2 * a - a * a])]))


def test_singular_pair_range_is_unit_square(singular):
    rng = compute_range(singular)
    assert hausdorff(rng.region, SQUARE) <= 1e-12
    assert not rng.basis.is_identity


def test_linear_range_matches_parabolas(linear):
    rng = compute_range(linear)
    assert hausdorff(rng.region, lens()) <= 1e-7 + rng.sampling_error
    a = np.linspace(0, 1, 50)
    lo = [geo.vertical_extent(rng.region, x)[0] for x in a]
    assert lo == pytest.approx(a * a, abs=1e-7)


def test_step_range_is_hexagon_with_kink(steps):
    rng = compute_range(steps)
    assert len(rng.region) == 4 or len(rng.region) == 6
    expect = ConvexRegion([(0, 0), (0.5, 0.25), (1, 1), (0.5, 0.75)])
    assert hausdorff(rng.region, expect) <= 1e-12
    assert geo.contains(rng.region, (0.5, 0.25), 1e-12)
    assert rng.sampling_error == 0.0


def test_q_set_examples(singular, linear):
    rs = compute_range(singular)
    assert hausdorff(q_set(rs, P), ConvexRegion.box(0, 0, 0.7, 0.8)) <= 1e-12
    rl = compute_range(linear)
    assert hausdorff(q_set(rl, rl.total), rl.region) == 0.0
    zero = q_set(rl, (0.0, 0.0))
    assert zero.dim == 0 and np.allclose(zero.vertices, 0.0, atol=1e-12)
    with pytest.raises(NotInRange):
        q_set(rl, (0.5, 0.05))


def test_maximal_subset_examples(linear, steps):
    res = maximal_subset(linear, P)
    assert res.z_star.almost_equal(IntervalSet(((0, 11 / 60), (29 / 60, 1))), 1e-10)
    assert res.achieved == pytest.approx(P, abs=1e-10)
    res = maximal_subset(steps, P)
    assert res.z_star.almost_equal(IntervalSet(((0, 0.25), (0.55, 1))), 1e-10)
    full = maximal_subset(linear, linear.total)
    assert full.z_star.almost_equal(IntervalSet.full(), 1e-12)
    assert hausdorff(full.q_set, full.range.region) <= 1e-12
    with pytest.raises(NotInRange):
        maximal_subset(linear, (0.5, 0.05))


def test_minimal_subset_examples(linear, singular):
    m, region = minimal_subset(linear, (0.3, 0.2))
    assert m.almost_equal(IntervalSet(((11 / 60, 29 / 60),)), 1e-10)
    assert hausdorff(region, range_of_subset(linear, m)) <= 1e-6
    m, _ = minimal_subset(linear, linear.total)
    assert m.almost_equal(IntervalSet.full(), 1e-12)
    _, region = minimal_subset(singular, (0.3, 0.2))
    assert hausdorff(region, ConvexRegion.box(0, 0, 0.3, 0.2)) <= 1e-12


def test_range_of_subset_examples(linear):
    assert hausdorff(range_of_subset(linear, IntervalSet.full()), compute_range(linear).region) == 0
    empty = range_of_subset(linear, IntervalSet.empty())
    assert empty.dim == 0 and np.allclose(empty.vertices, 0.0)
    z = IntervalSet(((0, 11 / 60), (29 / 60, 1)))
    assert hausdorff(range_of_subset(linear, z), q_set(compute_range(linear), P)) <= 1e-6


def test_lower_boundary_exact_and_sampled(linear, singular):
    assert lower_boundary(linear, 0.5) == pytest.approx(0.25, abs=1e-15)
    assert lower_boundary(singular, 0.5) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(NotInRange):
        lower_boundary(singular, 1.5)


def test_curved_example_is_fast(linear):
    t0 = time.perf_counter()
    maximal_subset(linear, P)
    assert time.perf_counter() - t0 < 1.0


@given(seeds)
def test_range_is_centrally_symmetric(seed):
    mu = random_measure(np.random.default_rng(seed))
    rng = compute_range(mu)
    assert geo.is_centrally_symmetric(rng.region, 0.5 * rng.total, 1e-9)


@given(seeds)
def test_set_values_lie_in_range(seed):
    rng_ = np.random.default_rng(seed)
    mu = random_measure(rng_)
    rng = compute_range(mu)
    pts = np.array([mu.measure_of(random_interval_set(rng_, int(rng_.integers(1, 5))))
                    for _ in range(20)])
    assert np.all(rng.contains_points(pts))


@settings(max_examples=25)
@given(seeds)
def test_maximal_range_equals_q_set(seed):
    rng_ = np.random.default_rng(seed)
    mu = random_measure(rng_)
    p = mu.measure_of(random_interval_set(rng_))
    res = maximal_subset(mu, p)
    assert res.achieved == pytest.approx(p, abs=1e-9)
    assert hausdorff(range_of_subset(mu, res.z_star), res.q_set) <= 1e-6
    assert geo.is_centrally_symmetric(res.q_set, 0.5 * p, 1e-9)


@settings(max_examples=25)
@given(seeds)
def test_complementary_ranges_add_up(seed):
    rng_ = np.random.default_rng(seed)
    mu = random_measure(rng_)
    s = random_interval_set(rng_)
    total = geo.minkowski_sum(range_of_subset(mu, s), range_of_subset(mu, s.complement()))
    assert hausdorff(total, compute_range(mu).region) <= 1e-6


@settings(max_examples=25)
@given(seeds)
def test_maximal_set_keeps_lower_boundary(seed):
    rng_ = np.random.default_rng(seed)
    mu = random_measure(rng_, kinds=("curved", "flat"))
    p = mu.measure_of(random_interval_set(rng_))
    res = maximal_subset(mu, p)
    sub = mu.restrict(res.z_star)
    for a in np.linspace(0, res.a_star, 20):
        assert lower_boundary(sub, a) == pytest.approx(lower_boundary(mu, a), abs=1e-9)
