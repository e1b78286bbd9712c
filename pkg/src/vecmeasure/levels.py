"""Sublevel sets of the density ratio ``f = dmu_2/dmu_1``.

Everything here works on a pair of equivalent measures (see
``measure.ensure_equivalent``). The grid is refined at critical points of
``f`` so that on every piece ``f`` is strictly monotone or constant, which
makes ``{f <= l}`` a prefix or suffix of each monotone piece.
"""
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

from .errors import NonEquivalent, NotInRange, OutOfRange
from .intervals import IntervalSet
from .measure import antiderivative, quad_min, taylor_shift

MASS_TOL = 1e-12
BOUNDARY_TOL = 1e-9
FLAT_TOL = 1e-12

INCREASING, DECREASING, CONSTANT = 1, -1, 0


@dataclass(frozen=True)
class Piece:
    x0: float
    x1: float
    kind: int
    f_left: float
    f_right: float


@dataclass(frozen=True)
class LevelProfile:
    """Distribution of ``f`` under ``mu_1`` for an equivalent pair."""

    measure: object = field(repr=False)
    pieces: tuple
    flat_levels: dict
    # monotone pieces, as arrays for vectorized cuts
    m_x0: np.ndarray = field(repr=False)
    m_w: np.ndarray = field(repr=False)
    m_dir: np.ndarray = field(repr=False)
    m_flo: np.ndarray = field(repr=False)
    m_fhi: np.ndarray = field(repr=False)
    m_den: np.ndarray = field(repr=False)
    m_num: np.ndarray = field(repr=False)
    m_g1: np.ndarray = field(repr=False)
    m_g2: np.ndarray = field(repr=False)
    # flat pieces
    c_x0: np.ndarray = field(repr=False)
    c_x1: np.ndarray = field(repr=False)
    c_level: np.ndarray = field(repr=False)
    c_g1: np.ndarray = field(repr=False)
    c_m1: np.ndarray = field(repr=False)
    c_m2: np.ndarray = field(repr=False)
    knots: np.ndarray = field(repr=False)
    knot_S: np.ndarray = field(repr=False)
    knot_S_strict: np.ndarray = field(repr=False)
    total1: float
    total2: float
    f_max: float

    def sublevel(self, levels, strict=False):
        """``(mu_1({f <= l}), mu_2({f <= l}))`` for an array of levels.

        With ``strict=True`` flat levels equal to ``l`` are excluded, giving
        the masses of ``{f < l}``.
        """
        L = np.atleast_1d(np.asarray(levels, dtype=float))
        tau = self._cuts(L)
        S = np.zeros(L.shape)
        T = np.zeros(L.shape)
        if self.m_w.size:
            inc = self.m_dir > 0
            G1t = antiderivative(self.m_g1[None], tau)
            G2t = antiderivative(self.m_g2[None], tau)
            G1w = antiderivative(self.m_g1, self.m_w)[None]
            G2w = antiderivative(self.m_g2, self.m_w)[None]
            S += np.where(inc, G1t, G1w - G1t).sum(axis=1)
            T += np.where(inc, G2t, G2w - G2t).sum(axis=1)
        if self.c_level.size:
            on = (self.c_level[None] < L[:, None]) if strict else (self.c_level[None] <= L[:, None])
            S += (on * self.c_m1[None]).sum(axis=1)
            T += (on * self.c_m2[None]).sum(axis=1)
        return S, T

    def _cuts(self, L):
        """Local cut position in each monotone piece for each level.

        Increasing pieces contribute ``[0, tau]`` to ``{f <= l}``, decreasing
        pieces ``[tau, w]``.
        """
        if not self.m_w.size:
            return np.zeros((L.size, 0))
        c = self.m_num[None] - L[:, None, None] * self.m_den[None]
        c0, c1, c2 = c[..., 0], c[..., 1], c[..., 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            disc = np.sqrt(np.maximum(c1 * c1 - 4 * c0 * c2, 0.0))
            qq = -0.5 * (c1 + np.where(c1 >= 0, disc, -disc))
            r_a = qq / c2
            r_b = c0 / qq
        w = self.m_w[None]
        d_a = np.where(np.isfinite(r_a), np.maximum(np.maximum(-r_a, r_a - w), 0.0), np.inf)
        d_b = np.where(np.isfinite(r_b), np.maximum(np.maximum(-r_b, r_b - w), 0.0), np.inf)
        root = np.clip(np.where(d_a < d_b, r_a, r_b), 0.0, w)
        root = np.where(np.isfinite(root), root, 0.0)
        Lc = L[:, None]
        inc = self.m_dir[None] > 0
        lo_f = np.where(inc, self.m_flo[None], self.m_fhi[None])
        hi_f = np.where(inc, self.m_fhi[None], self.m_flo[None])
        below = Lc < lo_f
        above = Lc >= hi_f
        tau_inc = np.where(below, 0.0, np.where(above, w, root))
        tau_dec = np.where(below, w, np.where(above, 0.0, root))
        return np.where(inc, tau_inc, tau_dec)

    def S(self, level):
        """``mu_1({f <= level})`` for a single level."""
        L = np.array([float(level)])
        out = 0.0
        if self.m_w.size:
            tau = self._cuts(L)[0]
            G1t = antiderivative(self.m_g1, tau)
            out += float(np.where(self.m_dir > 0, G1t, self._m_mass1 - G1t).sum())
        if self.c_level.size:
            out += float(self.c_m1[self.c_level <= level].sum())
        return out

    @property
    def _m_mass1(self):
        return antiderivative(self.m_g1, self.m_w)

    def sublevel_set(self, level, strict=False):
        """``{f <= level}`` (or ``{f < level}``) as an IntervalSet."""
        if level < 0:
            return IntervalSet.empty()
        tau = self._cuts(np.array([float(level)]))[0]
        ivs = []
        for x0, w, d, t in zip(self.m_x0, self.m_w, self.m_dir, tau):
            ivs.append((x0, x0 + t) if d > 0 else (x0 + t, x0 + w))
        on = self.c_level < level if strict else self.c_level <= level
        ivs.extend(zip(self.c_x0[on], self.c_x1[on]))
        return IntervalSet(tuple(ivs))

    def _band(self, lo, hi):
        """Pieces of ``{lo < f <= hi}`` as (x_start, x_end, g1_coeffs, t_start) sorted by x."""
        tau_hi = self._cuts(np.array([hi]))[0]
        tau_lo = self._cuts(np.array([lo]))[0] if lo >= 0 else np.where(self.m_dir > 0, 0.0, self.m_w)
        out = []
        for x0, d, th, tl, g1 in zip(self.m_x0, self.m_dir, tau_hi, tau_lo, self.m_g1):
            a, b = (tl, th) if d > 0 else (th, tl)
            if b > a:
                out.append((x0 + a, x0 + b, g1, a))
        on = (self.c_level > lo) & (self.c_level <= hi)
        for x0, x1, g1 in zip(self.c_x0[on], self.c_x1[on], self.c_g1[on]):
            out.append((x0, x1, g1, 0.0))
        out.sort(key=lambda r: r[0])
        return out


def _roots_in(c, lo, hi, tol=1e-12):
    c = np.trim_zeros(np.asarray(c, dtype=float), "b")
    if c.size <= 1:
        return []
    r = P.polyroots(c)
    r = r[np.abs(r.imag) <= tol * max(1.0, np.abs(r).max())].real
    return sorted(float(x) for x in r if lo - tol <= x <= hi + tol)


def _reduce_common_roots(den, num, w):
    """Cancel roots shared by ``den`` and ``num`` on ``[0, w]``."""
    for _ in range(2):
        scale = max(np.abs(num).max(), 1e-300)
        shared = [r for r in _roots_in(den, 0.0, w)
                  if abs(P.polyval(r, num)) <= 1e-10 * scale]
        if not shared:
            break
        r = shared[0]
        den = P.polydiv(den, [-r, 1.0])[0]
        num = P.polydiv(num, [-r, 1.0])[0]
    pad = lambda c: np.concatenate([c, np.zeros(3 - len(c))])[:3]
    return pad(np.atleast_1d(den)), pad(np.atleast_1d(num))


def level_profile(mu):
    """Build the LevelProfile of an equivalent two-dimensional measure."""
    if mu.m != 2:
        raise ValueError("level_profile needs a two-dimensional measure")
    mono, flats = [], []
    for i in range(mu.n_pieces):
        x0, x1 = float(mu.grid[i]), float(mu.grid[i + 1])
        w = x1 - x0
        g1, g2 = mu.coeffs[0, i], mu.coeffs[1, i]
        z1 = np.all(np.abs(g1) <= 1e-14)
        z2 = np.all(np.abs(g2) <= 1e-14)
        if z1 and z2:
            continue
        if z1:
            raise NonEquivalent(f"mu_1 vanishes on [{x0}, {x1}) where mu_2 does not")
        den, num = _reduce_common_roots(g1.copy(), g2.copy(), w)
        if quad_min(den, w) <= 1e-12 * max(1.0, np.abs(den).max()):
            raise NonEquivalent(f"density ratio unbounded on [{x0}, {x1})")
        deriv = P.polysub(P.polymul(P.polyder(num), den), P.polymul(num, P.polyder(den)))
        scale = max(np.abs(num).max(), 1e-300) * max(np.abs(den).max(), 1e-300)
        if np.abs(deriv).max() <= FLAT_TOL * scale:
            level = float(P.polyval(0.5 * w, num) / P.polyval(0.5 * w, den))
            flats.append([x0, x1, max(level, 0.0), g1, g2, w])
            continue
        cuts = [0.0] + [r for r in _roots_in(deriv, 0.0, w) if 1e-13 < r < w - 1e-13] + [w]
        for a, b in zip(cuts[:-1], cuts[1:]):
            sd, sn = taylor_shift(den, a), taylor_shift(num, a)
            s1, s2 = taylor_shift(g1, a), taylor_shift(g2, a)
            sw = b - a
            fl = max(P.polyval(0.0, sn) / P.polyval(0.0, sd), 0.0)
            fr = max(P.polyval(sw, sn) / P.polyval(sw, sd), 0.0)
            if fl == fr:
                flats.append([x0 + a, x0 + b, fl, s1, s2, sw])
                continue
            mono.append((x0 + a, sw, 1 if fr > fl else -1, fl, fr, sd, sn, s1, s2))

    # merge flat levels that agree to rounding so that each has one exact value
    flats.sort(key=lambda r: r[2])
    for k in range(1, len(flats)):
        prev = flats[k - 1][2]
        if abs(flats[k][2] - prev) <= FLAT_TOL * max(1.0, abs(prev)):
            flats[k][2] = prev
    flat_levels = {}
    for x0, x1, lev, *_ in flats:
        flat_levels.setdefault(lev, []).append((x0, x1))
    flat_levels = {k: IntervalSet(tuple(v)) for k, v in flat_levels.items()}

    arr = lambda seq, k: np.array([r[k] for r in seq], dtype=float)
    m_den = np.array([r[5] for r in mono]).reshape(-1, 3)
    m_num = np.array([r[6] for r in mono]).reshape(-1, 3)
    m_g1 = np.array([r[7] for r in mono]).reshape(-1, 3)
    m_g2 = np.array([r[8] for r in mono]).reshape(-1, 3)
    c_g1 = np.array([r[3] for r in flats]).reshape(-1, 3)
    c_g2 = np.array([r[4] for r in flats]).reshape(-1, 3)
    c_w = arr(flats, 5)
    c_m1 = antiderivative(c_g1, c_w) if flats else np.zeros(0)
    c_m2 = antiderivative(c_g2, c_w) if flats else np.zeros(0)

    pieces = [Piece(float(r[0]), float(r[0] + r[1]), r[2], float(r[3]), float(r[4])) for r in mono]
    pieces += [Piece(float(r[0]), float(r[1]), CONSTANT, float(r[2]), float(r[2])) for r in flats]
    pieces.sort(key=lambda p: p.x0)

    m_flo, m_fhi = arr(mono, 3), arr(mono, 4)
    c_level = arr(flats, 2)
    knots = np.unique(np.concatenate([[0.0], m_flo, m_fhi, c_level]))
    prof = LevelProfile(
        measure=mu, pieces=tuple(pieces), flat_levels=flat_levels,
        m_x0=arr(mono, 0), m_w=arr(mono, 1), m_dir=arr(mono, 2).astype(int),
        m_flo=m_flo, m_fhi=m_fhi, m_den=m_den, m_num=m_num, m_g1=m_g1, m_g2=m_g2,
        c_x0=arr(flats, 0), c_x1=arr(flats, 1), c_level=c_level, c_g1=c_g1,
        c_m1=c_m1, c_m2=c_m2,
        knots=knots, knot_S=np.zeros(0), knot_S_strict=np.zeros(0),
        total1=0.0, total2=0.0, f_max=float(knots[-1]),
    )
    S, T = prof.sublevel(knots)
    S_strict, _ = prof.sublevel(knots, strict=True)
    # cumulative masses must be monotone along the knots for bracketing
    S = np.maximum.accumulate(S)
    object.__setattr__(prof, "knot_S", S)
    object.__setattr__(prof, "knot_S_strict", np.minimum(S_strict, S))
    object.__setattr__(prof, "total1", float(S[-1]))
    object.__setattr__(prof, "total2", float(T[-1]))
    return prof


def _check_mass(profile, a):
    if not np.isfinite(a) or a < -MASS_TOL or a > profile.total1 + MASS_TOL * max(1.0, profile.total1):
        raise OutOfRange(f"mass {a} outside [0, {profile.total1}]")
    return min(max(float(a), 0.0), profile.total1)


def _as_int(x):
    return int(np.float64(x).view(np.int64))


def _as_float(i):
    return float(np.int64(i).view(np.float64))


def _bracket(profile, a, exact=True):
    """Levels ``lo < hi`` with ``S(lo) <= a <= S(hi)`` around the quantile of ``a``.

    ``lo = -1`` stands for "below every value of f" (empty sublevel set).
    With ``exact`` the two levels are adjacent doubles, so ``hi`` is the
    quantile itself; otherwise they are a few ulps apart, which is all the
    boundary-value formula needs.
    """
    a = _check_mass(profile, a)
    if a == 0.0:
        return -1.0, 0.0, a
    S = profile.knot_S
    if S[0] >= a:
        return -1.0, 0.0, a
    k = min(int(np.searchsorted(S, a, side="left")), S.size - 1)
    if profile.knot_S_strict[k] <= a:
        hi = float(profile.knots[k])
        return float(np.nextafter(hi, -np.inf)), hi, a
    lo, hi = float(profile.knots[k - 1]), float(profile.knots[k])
    # S is continuous and increasing strictly between consecutive knots
    root = brentq(lambda l: profile.S(l) - a, lo, hi, xtol=1e-300, rtol=1e-15)
    delta = 4e-15 * max(abs(root), 1e-300)
    for _ in range(8):
        wlo, whi = max(root - delta, lo), min(root + delta, hi)
        if profile.S(wlo) < a <= profile.S(whi):
            lo, hi = wlo, whi
            break
        delta *= 64
    if not exact:
        return lo, hi, a
    ilo, ihi = _as_int(lo), _as_int(hi)
    while ihi - ilo > 1:
        imid = (ilo + ihi) // 2
        if profile.S(_as_float(imid)) >= a:
            ihi = imid
        else:
            ilo = imid
    return _as_float(ilo), _as_float(ihi), a


def quantile_l(profile, a):
    """Smallest level ``l >= 0`` with ``mu_1({f <= l}) >= a``."""
    return _bracket(profile, a)[1]


def lower_set(profile, a):
    """The set ``L_a``: lowest values of ``f`` first, total ``mu_1``-mass ``a``.

    Ties inside a level set of positive mass are broken by taking its
    leftmost part, so the family is nested in ``a``.
    """
    lo, hi, a = _bracket(profile, a)
    if a == 0.0:
        return IntervalSet.empty()
    base = profile.sublevel_set(lo)
    need = a - (profile.S(lo) if lo >= 0 else 0.0)
    fill = []
    for xs, xe, g1, ts in profile._band(lo, hi):
        if need <= 0:
            break
        G0 = antiderivative(g1, ts)
        mass = antiderivative(g1, ts + (xe - xs)) - G0
        if mass <= need:
            fill.append((xs, xe))
            need -= mass
            continue
        target = need
        t = brentq(lambda s: antiderivative(g1, ts + s) - G0 - target, 0.0, xe - xs,
                   xtol=1e-16, rtol=1e-15)
        fill.append((xs, xs + t))
        need = 0.0
    return base.union(IntervalSet(tuple(fill)))


def lower_value(profile, a):
    """``mu_2(L_a)``, the lower boundary of the range at first coordinate ``a``.

    Computed from the sublevel masses without building the set; the band
    between the two bracketing levels carries ratio ``hi`` up to rounding.
    """
    lo, hi, a = _bracket(profile, a, exact=False)
    if a == 0.0:
        return 0.0
    if lo < 0:
        return hi * a
    S, T = profile.sublevel([lo])
    return float(T[0] + hi * (a - S[0]))


def upper_value(profile, a):
    """``mu_2(X \\ L_{mu_1(X) - a})``, the upper boundary at first coordinate ``a``."""
    a = _check_mass(profile, a)
    return profile.total2 - lower_value(profile, profile.total1 - a)


def slab(profile, a, d):
    """``M_{a,d} = L_{a+d} \\ L_a``."""
    _check_slab(profile, a, d)
    if d <= 0:
        return IntervalSet.empty()
    return lower_set(profile, a + d).difference(lower_set(profile, a))


def g_value(profile, a, d):
    """``mu_2(M_{a,d})``."""
    return float(profile.measure.measure_of(slab(profile, a, d))[1])


def _g_fast(profile, a, d):
    return lower_value(profile, min(a + d, profile.total1)) - lower_value(profile, a)


def _check_slab(profile, a, d):
    t = profile.total1
    eps = MASS_TOL * max(1.0, t)
    if d < -eps or d > t + eps or a < -eps or a + d > t + eps:
        raise OutOfRange(f"slab (a={a}, d={d}) outside [0, {t}]")


def in_range(profile, u, tol=BOUNDARY_TOL):
    """Exact membership of ``u`` in the range, from the boundary functions."""
    u1, u2 = float(u[0]), float(u[1])
    if u1 < -tol or u1 > profile.total1 + tol:
        return False
    u1 = min(max(u1, 0.0), profile.total1)
    return lower_value(profile, u1) - tol <= u2 <= upper_value(profile, u1) + tol


def solve_a_star(profile, u, tol=MASS_TOL, max_iter=80, boundary_tol=BOUNDARY_TOL):
    """Find ``a*`` with ``mu(M_{a*, u_1}) = u`` by bisection on ``a``.

    ``g(a) = mu_2(M_{a, u_1})`` runs continuously from the lower boundary
    value at ``u_1`` to the upper one; targets within ``boundary_tol``
    outside that interval are clamped to its ends.
    """
    u1, u2 = float(u[0]), float(u[1])
    t1 = profile.total1
    if u1 < -boundary_tol or u1 > t1 + boundary_tol:
        raise NotInRange(f"u_1 = {u1} outside [0, {t1}]")
    u1 = min(max(u1, 0.0), t1)
    hi = t1 - u1
    g_lo = lower_value(profile, u1)
    g_hi = profile.total2 - lower_value(profile, hi)
    if u2 < g_lo - boundary_tol or u2 > g_hi + boundary_tol:
        raise NotInRange(f"u_2 = {u2} outside [{g_lo}, {g_hi}] at u_1 = {u1}")
    if u2 <= g_lo or hi <= 0.0:
        return 0.0
    if u2 >= g_hi:
        return hi
    lo = 0.0
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if _g_fast(profile, mid, u1) < u2:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
