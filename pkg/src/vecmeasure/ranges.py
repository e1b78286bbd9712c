"""Ranges of two-dimensional measures, Q-sets, and maximal/minimal subsets."""
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial as P

from . import geometry as geo
from .errors import NotInRange
from .geometry import ConvexRegion
from .intervals import IntervalSet
from .levels import BOUNDARY_TOL, level_profile, lower_value, slab, solve_a_star
from .measure import BasisChange, ensure_equivalent

SAMPLES_PER_PIECE = 512
SAG_TOL = 1e-7


@dataclass(frozen=True)
class RangeResult:
    """The range of ``mu`` and how it was built.

    ``lower_boundary`` holds the points ``(a, nu_2(L_a))`` of the working
    measure ``nu = mu D`` (``D = basis.D``), including every kink; the
    region is the hull of that chain and its reflection about ``total/2``,
    mapped back by ``D^-1``. ``sampling_error`` bounds the chord error of
    the curved parts, in the original coordinates.
    """

    region: ConvexRegion
    lower_boundary: np.ndarray = field(repr=False)
    total: np.ndarray
    basis: BasisChange = field(repr=False)
    profile: object = field(repr=False)
    sampling_error: float = 0.0

    @property
    def tol(self):
        return BOUNDARY_TOL + self.sampling_error

    def contains(self, p, tol=None):
        return geo.contains(self.region, p, self.tol if tol is None else tol)

    def contains_points(self, Q, tol=None):
        return geo.contains_points(self.region, Q, self.tol if tol is None else tol)


def _piece_levels(profile, n):
    """Values of ``f`` at ``n`` equally spaced points of each monotone piece."""
    if not profile.m_w.size:
        return np.zeros(0)
    t = np.linspace(0.0, 1.0, n)[None, :] * profile.m_w[:, None]
    num = np.stack([P.polyval(t[i], profile.m_num[i]) for i in range(len(t))])
    den = np.stack([P.polyval(t[i], profile.m_den[i]) for i in range(len(t))])
    return np.maximum(num / den, 0.0).ravel()


def lower_chain(profile, samples_per_piece=SAMPLES_PER_PIECE, sag_tol=SAG_TOL, max_rounds=16):
    """Sampled lower boundary ``a -> mu_2(L_a)`` and its largest chord sag.

    Levels of ``f`` are sampled at ``samples_per_piece`` points per monotone
    piece plus every piece-end value and flat level; intervals whose chord
    deviates from the curve by more than ``sag_tol`` at the mid-level are
    bisected. Flat levels contribute exact straight segments.
    """
    L = np.unique(np.concatenate([profile.knots, _piece_levels(profile, samples_per_piece)]))
    sag = 0.0
    for _ in range(max_rounds):
        S, T = profile.sublevel(L)
        Ss, Ts = profile.sublevel(L, strict=True)
        if L.size < 2:
            break
        mid = 0.5 * (L[:-1] + L[1:])
        Sm, Tm = profile.sublevel(mid)
        a = np.column_stack([S[:-1], T[:-1]])
        b = np.column_stack([Ss[1:], Ts[1:]])
        m = np.column_stack([Sm, Tm])
        chord = b - a
        length = np.linalg.norm(chord, axis=1)
        cr = np.abs(chord[:, 0] * (m[:, 1] - a[:, 1]) - chord[:, 1] * (m[:, 0] - a[:, 0]))
        dev = np.where(length > 0, cr / np.where(length > 0, length, 1.0), 0.0)
        bad = (dev > sag_tol) & (mid > L[:-1]) & (mid < L[1:])
        sag = float(dev.max(initial=0.0))
        if not bad.any():
            break
        L = np.unique(np.concatenate([L, mid[bad]]))
    S, T = profile.sublevel(L)
    Ss, Ts = profile.sublevel(L, strict=True)
    pts = np.empty((2 * L.size + 2, 2))
    pts[0] = 0.0
    pts[1:-1:2] = np.column_stack([Ss, Ts])
    pts[2:-1:2] = np.column_stack([S, T])
    pts[-1] = (profile.total1, profile.total2)
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.any(np.diff(pts, axis=0) != 0, axis=1)
    return pts[keep], sag


def compute_range(mu, samples_per_piece=SAMPLES_PER_PIECE, sag_tol=SAG_TOL):
    """The range ``{mu(Z)}`` of a two-dimensional measure as a convex polygon."""
    nu, basis = ensure_equivalent(mu)
    prof = level_profile(nu)
    lower, sag = lower_chain(prof, samples_per_piece, sag_tol)
    total_nu = np.array([prof.total1, prof.total2])
    region = ConvexRegion(np.vstack([lower, total_nu - lower]))
    if not basis.is_identity:
        region = geo.linear_map(region, basis.Dinv)
        sag *= np.linalg.norm(basis.Dinv, 2)
    return RangeResult(region=region, lower_boundary=lower, total=mu.total, basis=basis,
                       profile=prof, sampling_error=float(sag))


def range_of_subset(mu, s, **kw):
    """The range of ``mu`` restricted to ``s``."""
    return compute_range(mu.restrict(s), **kw).region


def lower_boundary(mu, a, rng=None):
    """``min {mu_2(Z) : mu_1(Z) = a}``, the lower edge of the range at ``a``.

    Exact (``mu_2`` of the lower set ``L_a``) when ``mu`` needs no basis
    change; otherwise read off the sampled range polygon.
    """
    nu, basis = ensure_equivalent(mu)
    if basis.is_identity:
        return lower_value(rng.profile if rng is not None else level_profile(mu), a)
    rng = rng if rng is not None else compute_range(mu)
    ext = geo.vertical_extent(rng.region, a, rng.tol)
    if ext is None:
        raise NotInRange(f"no set has first coordinate {a}")
    return ext[0]


def q_set(rng, p, tol=None):
    """``(R - {total - p}) & R``: the range shifted toward the origin, clipped."""
    p = np.asarray(p, dtype=float)
    if not rng.contains(p, tol):
        raise NotInRange(f"{p.tolist()} is not in the range")
    return geo.intersect(rng.region, geo.translate(rng.region, p - rng.total))


@dataclass(frozen=True)
class MaximalSetResult:
    z_star: IntervalSet
    a_star: float
    q_set: ConvexRegion
    achieved: np.ndarray
    slab: IntervalSet = field(repr=False)
    range: RangeResult = field(repr=False)


def maximal_set(mu, p, boundary_tol=BOUNDARY_TOL, profile=None):
    """``(Z*, a*, slab)`` for target ``p`` without building any polygon."""
    p = np.asarray(p, dtype=float)
    nu, basis = ensure_equivalent(mu)
    prof = profile if profile is not None else level_profile(nu)
    u = basis.forward(mu.total - p)
    a_star = solve_a_star(prof, u, boundary_tol=boundary_tol)
    d = min(max(float(u[0]), 0.0), prof.total1 - a_star)
    m = slab(prof, a_star, d)
    return m.complement(), a_star, m


def maximal_subset(mu, p, rng=None, boundary_tol=BOUNDARY_TOL):
    """A set ``Z*`` with ``mu(Z*) = p`` whose range contains every other such range.

    ``Z*`` is the complement of the slab ``M_{a*, u_1}`` for ``u = mu(X) - p``,
    computed for the equivalent measure ``nu = mu D``; ``a*`` is reported in
    the mass units of ``nu_1``.
    """
    p = np.asarray(p, dtype=float)
    z, a_star, m = maximal_set(mu, p, boundary_tol, rng.profile if rng is not None else None)
    if rng is None:
        rng = compute_range(mu)
    qs = q_set(rng, p, tol=rng.tol + boundary_tol)
    return MaximalSetResult(z_star=z, a_star=a_star, q_set=qs, achieved=mu.measure_of(z),
                            slab=m, range=rng)


class MinimalSetResult(NamedTuple):
    m_star: IntervalSet
    region: ConvexRegion


def minimal_subset(mu, q, rng=None):
    """A set ``M*`` with ``mu(M*) = q`` whose range lies inside every other such range.

    ``M*`` is the complement of the maximal set for ``mu(X) - q``; its range
    is ``R (-) Q^{mu(X)-q}`` (Minkowski erosion).
    """
    q = np.asarray(q, dtype=float)
    res = maximal_subset(mu, mu.total - q, rng=rng)
    region = geo.minkowski_sub(res.range.region, res.q_set)
    return MinimalSetResult(res.slab, region)
