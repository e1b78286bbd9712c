import numpy as np
import pytest
from hypothesis import given, strategies as st

from vecmeasure import catalog
from vecmeasure.errors import NonEquivalent, NotInRange, OutOfRange
from vecmeasure.intervals import IntervalSet
from vecmeasure.levels import (g_value, level_profile, lower_set, lower_value, quantile_l, slab,
                               solve_a_star)
from vecmeasure.measure import (PiecewisePoly, VectorMeasure, ensure_equivalent, measure_of,
                                random_measure, step_density)


@pytest.fixture
def p_linear():
    return level_profile(catalog.linear_ratio())


@pytest.fixture
def p_steps():
    return level_profile(catalog.step_ratio())


def random_profile(seed):
    nu, _ = ensure_equivalent(random_measure(np.random.default_rng(seed)))
    return level_profile(nu)


def test_linear_profile_is_one_increasing_piece(p_linear):
    assert p_linear.flat_levels == {}
    (piece,) = p_linear.pieces
    assert (piece.f_left, piece.f_right) == pytest.approx((0.0, 2.0))


def test_step_profile_flat_levels(p_steps):
    assert set(p_steps.flat_levels) == {0.5, 1.5}
    assert p_steps.flat_levels[0.5] == IntervalSet(((0.0, 0.5),))
    assert p_steps.flat_levels[1.5] == IntervalSet(((0.5, 1.0),))


def test_constant_denominator_ratio():
    mu = VectorMeasure([PiecewisePoly.constant(2.0), PiecewisePoly([0, 1], [[0.0, 2.0]])])
    prof = level_profile(mu)
    assert quantile_l(prof, 0.5) == pytest.approx(0.25, abs=1e-15)


def test_singular_pair_needs_basis_change(singular):
    with pytest.raises(NonEquivalent):
        level_profile(singular)


def test_quantile_examples(p_linear, p_steps):
    assert quantile_l(p_linear, 0.25) == pytest.approx(0.5, abs=1e-15)
    assert quantile_l(p_linear, 0.0) == 0.0
    assert quantile_l(p_steps, 0.25) == 0.5


def test_lower_set_examples(p_linear, p_steps):
    assert lower_set(p_linear, 0.25).almost_equal(IntervalSet(((0.0, 0.25),)), 1e-15)
    assert lower_set(p_steps, 0.25).almost_equal(IntervalSet(((0.0, 0.25),)), 1e-15)
    assert lower_set(p_linear, 1.0).almost_equal(IntervalSet.full(), 1e-15)


def test_slab_examples(p_linear, p_steps):
    s = slab(p_linear, 11 / 60, 0.3)
    assert s.almost_equal(IntervalSet(((11 / 60, 29 / 60),)), 1e-14)
    assert g_value(p_linear, 11 / 60, 0.3) == pytest.approx(0.2, abs=1e-14)
    assert slab(p_linear, 0.4, 0.0) == IntervalSet.empty()
    assert g_value(p_linear, 0.4, 0.0) == 0.0
    assert g_value(p_steps, 0.25, 0.3) == pytest.approx(0.2, abs=1e-14)


def test_solve_a_star_examples(p_linear, p_steps):
    assert solve_a_star(p_linear, (0.3, 0.2)) == pytest.approx(11 / 60, abs=1e-12)
    assert solve_a_star(p_linear, (1.0, 1.0)) == 0.0
    assert solve_a_star(p_steps, (0.3, 0.2)) == pytest.approx(0.25, abs=1e-12)


def test_out_of_range_errors(p_linear):
    with pytest.raises(OutOfRange):
        lower_set(p_linear, 1.5)
    with pytest.raises(OutOfRange):
        quantile_l(p_linear, -0.1)
    with pytest.raises(OutOfRange):
        slab(p_linear, 0.8, 0.3)
    with pytest.raises(NotInRange):
        solve_a_star(p_linear, (0.5, 0.05))


@given(st.integers(0, 10_000), st.floats(0, 1))
def test_lower_set_has_exact_mass(seed, frac):
    prof = random_profile(seed)
    a = frac * prof.total1
    L = lower_set(prof, a)
    assert measure_of(prof.measure, L)[0] == pytest.approx(a, abs=1e-12)
    assert measure_of(prof.measure, L)[1] == pytest.approx(lower_value(prof, a), abs=1e-12)


@given(st.integers(0, 10_000), st.floats(0, 1), st.floats(0, 1))
def test_lower_sets_nest(seed, u, v):
    prof = random_profile(seed)
    a, b = sorted((u * prof.total1, v * prof.total1))
    assert lower_set(prof, a).issubset(lower_set(prof, b), 1e-12)
    assert quantile_l(prof, a) <= quantile_l(prof, b)


@given(st.integers(0, 10_000), st.floats(0, 1))
def test_quantile_sandwich(seed, frac):
    prof = random_profile(seed)
    a = frac * prof.total1
    lvl = quantile_l(prof, a)
    below = prof.sublevel([lvl], strict=True)[0][0]
    upto = prof.sublevel([lvl])[0][0]
    assert below - 1e-12 <= a <= upto + 1e-12


@given(st.integers(0, 10_000), st.floats(0, 1), st.floats(0, 1), st.floats(1e-9, 1e-3))
def test_g_is_lipschitz_in_a(seed, u, v, h):
    prof = random_profile(seed)
    d = u * prof.total1
    a = v * (prof.total1 - d - h) if prof.total1 - d > h else None
    if a is None or a < 0:
        return
    step = abs(g_value(prof, a + h, d) - g_value(prof, a, d))
    assert step <= h * prof.f_max + 1e-11


@given(st.integers(0, 10_000), st.floats(0, 1), st.floats(0, 1))
def test_solved_slab_hits_target(seed, u, v):
    prof = random_profile(seed)
    d = u * prof.total1
    lo = lower_value(prof, d)
    hi = prof.total2 - lower_value(prof, prof.total1 - d)
    target = lo + v * (hi - lo)
    a = solve_a_star(prof, (d, target))
    got = measure_of(prof.measure, slab(prof, a, d))
    assert got == pytest.approx([d, target], abs=1e-9)


def test_partial_support_profile_after_basis_change():
    mu = VectorMeasure([PiecewisePoly.constant(1.0), step_density([0, 0.5, 1], [0, 1])])
    nu, _ = ensure_equivalent(mu)
    prof = level_profile(nu)
    assert prof.total1 == pytest.approx(1.5)
    assert set(prof.flat_levels) == {1.0, 1.5}
