"""Vector measures on [0, 1] given by piecewise-quadratic densities."""
from dataclasses import dataclass, field

import numpy as np

from .intervals import IntervalSet

MAX_DEGREE = 2
ZERO_TOL = 1e-14


def _pad(c):
    c = np.asarray(c, dtype=float).ravel()
    if c.size == 0:
        c = np.zeros(1)
    if c.size > MAX_DEGREE + 1:
        if np.any(c[MAX_DEGREE + 1:] != 0):
            raise ValueError(f"polynomial degree exceeds {MAX_DEGREE}: {c.tolist()}")
        c = c[:MAX_DEGREE + 1]
    return np.concatenate([c, np.zeros(MAX_DEGREE + 1 - c.size)])


def quad_min(c, w):
    """Minimum of ``c0 + c1 t + c2 t^2`` over ``t`` in ``[0, w]``."""
    cand = [0.0, w]
    if c[2] != 0.0:
        t = -c[1] / (2 * c[2])
        if 0.0 < t < w:
            cand.append(t)
    return min(c[0] + c[1] * t + c[2] * t * t for t in cand)


def taylor_shift(c, d):
    """Coefficients of ``t -> p(t + d)`` for a quadratic ``p``."""
    return np.array([c[0] + c[1] * d + c[2] * d * d, c[1] + 2 * c[2] * d, c[2]])


def antiderivative(C, t):
    """Evaluate the antiderivative (vanishing at 0) of rows of ``C`` at ``t``."""
    return t * (C[..., 0] + t * (C[..., 1] / 2 + t * C[..., 2] / 3))


@dataclass(frozen=True)
class PiecewisePoly:
    """Piecewise polynomial of degree <= 2 on [0, 1].

    ``coeffs[i]`` holds the constant-first coefficients of piece ``i`` in the
    local variable ``x - breakpoints[i]``.
    """

    breakpoints: np.ndarray
    coeffs: np.ndarray

    def __init__(self, breakpoints, coeffs, check=True):
        bp = np.asarray(breakpoints, dtype=float)
        C = np.array([_pad(c) for c in coeffs]) if len(coeffs) else np.zeros((0, 3))
        if check:
            if bp.ndim != 1 or bp.size < 2:
                raise ValueError("need at least two breakpoints")
            if bp[0] != 0.0 or bp[-1] != 1.0:
                raise ValueError("breakpoints must start at 0 and end at 1")
            if np.any(np.diff(bp) <= 0):
                raise ValueError("breakpoints must be strictly increasing")
            if C.shape[0] != bp.size - 1:
                raise ValueError("one coefficient list per piece required")
            if not np.all(np.isfinite(C)):
                raise ValueError("non-finite coefficient")
            w = np.diff(bp)
            for i in range(C.shape[0]):
                scale = max(1.0, np.abs(C[i]).max())
                if quad_min(C[i], w[i]) < -1e-12 * scale:
                    raise ValueError(f"density is negative on piece {i}")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "coeffs", C)

    @classmethod
    def constant(cls, value):
        return cls([0.0, 1.0], [[value]])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        i = np.clip(np.searchsorted(self.breakpoints, x, side="right") - 1, 0, len(self.coeffs) - 1)
        t = x - self.breakpoints[i]
        C = self.coeffs[i]
        return C[..., 0] + t * (C[..., 1] + t * C[..., 2])

    def on_grid(self, grid):
        """Coefficient array (pieces x 3) re-expanded on a finer grid."""
        grid = np.asarray(grid, dtype=float)
        mid = 0.5 * (grid[:-1] + grid[1:])
        src = np.clip(np.searchsorted(self.breakpoints, mid, side="right") - 1, 0, len(self.coeffs) - 1)
        return np.array([taylor_shift(self.coeffs[s], g - self.breakpoints[s])
                         for s, g in zip(src, grid[:-1])])

    def to_json(self):
        out = []
        for c in self.coeffs:
            c = list(map(float, c))
            while len(c) > 1 and c[-1] == 0.0:
                c.pop()
            out.append(c)
        return {"breakpoints": list(map(float, self.breakpoints)), "coeffs": out}

    @classmethod
    def from_json(cls, data):
        return cls(data["breakpoints"], data["coeffs"])


@dataclass(frozen=True)
class BasisChange:
    D: np.ndarray
    Dinv: np.ndarray

    @classmethod
    def identity(cls):
        return cls(np.eye(2), np.eye(2))

    @classmethod
    def positive(cls):
        D = np.array([[1.0, 1.0], [1.0, 2.0]])
        return cls(D, np.array([[2.0, -1.0], [-1.0, 1.0]]))

    @property
    def is_identity(self):
        return bool(np.all(self.D == np.eye(2)))

    def forward(self, v):
        """Row vectors in the original coordinates -> transformed coordinates."""
        return np.asarray(v, dtype=float) @ self.D

    def backward(self, v):
        return np.asarray(v, dtype=float) @ self.Dinv


@dataclass(frozen=True)
class VectorMeasure:
    """``m`` densities sharing one refined breakpoint grid."""

    densities: tuple
    grid: np.ndarray = field(repr=False)
    coeffs: np.ndarray = field(repr=False)  # (m, pieces, 3)
    _cum: np.ndarray = field(repr=False)

    def __init__(self, densities):
        densities = tuple(densities)
        if len(densities) < 1:
            raise ValueError("need at least one density")
        grid = np.unique(np.concatenate([d.breakpoints for d in densities]))
        C = np.stack([d.on_grid(grid) for d in densities])
        w = np.diff(grid)
        masses = antiderivative(C, w[None, :])
        cum = np.concatenate([np.zeros((C.shape[0], 1)), np.cumsum(masses, axis=1)], axis=1)
        object.__setattr__(self, "densities", densities)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "coeffs", C)
        object.__setattr__(self, "_cum", cum)

    @classmethod
    def from_grid(cls, grid, coeffs, check=True):
        return cls([PiecewisePoly(grid, c, check=check) for c in coeffs])

    @property
    def m(self):
        return len(self.densities)

    @property
    def n_pieces(self):
        return self.grid.size - 1

    @property
    def total(self):
        return self._cum[:, -1].copy()

    def cdf(self, x):
        """``mu([0, x))`` for each entry of ``x``; shape ``x.shape + (m,)``."""
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        i = np.clip(np.searchsorted(self.grid, x, side="right") - 1, 0, self.n_pieces - 1)
        t = x - self.grid[i]
        vals = self._cum[:, i] + antiderivative(self.coeffs[:, i, :], t[None, ...])
        return np.moveaxis(vals, 0, -1)

    def measure_of(self, s):
        s = s if isinstance(s, IntervalSet) else IntervalSet(tuple(s))
        if not s:
            return np.zeros(self.m)
        e = s.endpoints().reshape(-1, 2)
        F = self.cdf(e)
        return (F[:, 1, :] - F[:, 0, :]).sum(axis=0)

    def restrict(self, s):
        """The measure ``mu( . intersected with s)`` as densities zeroed outside ``s``."""
        s = s if isinstance(s, IntervalSet) else IntervalSet(tuple(s))
        grid = np.unique(np.concatenate([self.grid, s.endpoints(), [0.0, 1.0]]))
        mid = 0.5 * (grid[:-1] + grid[1:])
        inside = np.array([s.contains(x) for x in mid], dtype=bool)
        dens = []
        for d in self.densities:
            C = d.on_grid(grid)
            C[~inside] = 0.0
            dens.append(PiecewisePoly(grid, C, check=False))
        return VectorMeasure(dens)

    def components(self, *idx):
        return VectorMeasure([self.densities[i] for i in idx])

    def transform(self, D):
        """The measure ``mu D`` (row-vector convention), on the common grid."""
        D = np.asarray(D, dtype=float)
        C = np.einsum("ipk,ij->jpk", self.coeffs, D)
        return VectorMeasure.from_grid(self.grid, C, check=False)

    def to_json(self):
        return {"densities": [d.to_json() for d in self.densities]}

    @classmethod
    def from_json(cls, data):
        return cls([PiecewisePoly.from_json(d) for d in data["densities"]])


def measure_of(mu, s):
    return mu.measure_of(s)


def _is_zero(c):
    return bool(np.all(np.abs(c) <= ZERO_TOL))


def is_equivalent_pair(mu):
    """Sufficient test used to skip the basis change.

    Every piece is either null for both components, or has a first density
    bounded away from zero and a second density that is not identically zero.
    The ratio of the two is then bounded on every piece.
    """
    if mu.m != 2:
        raise ValueError("equivalence test needs m = 2")
    w = np.diff(mu.grid)
    for i in range(mu.n_pieces):
        c1, c2 = mu.coeffs[0, i], mu.coeffs[1, i]
        if _is_zero(c1) and _is_zero(c2):
            continue
        if _is_zero(c2) or quad_min(c1, w[i]) <= 1e-12 * max(1.0, np.abs(c1).max()):
            return False
    return True


def ensure_equivalent(mu):
    """Return ``(nu, basis)`` with ``nu = mu D`` having equivalent components.

    ``D`` is the identity when ``mu`` already passes ``is_equivalent_pair``,
    otherwise ``[[1, 1], [1, 2]]``.
    """
    if mu.m != 2:
        raise ValueError("ensure_equivalent needs a two-dimensional measure")
    if is_equivalent_pair(mu):
        return mu, BasisChange.identity()
    basis = BasisChange.positive()
    return mu.transform(basis.D), basis


def step_density(breakpoints, values):
    return PiecewisePoly(breakpoints, [[v] for v in values])


def random_measure(rng, max_pieces=5, kinds=("curved", "flat", "singular")):
    """A random two-dimensional measure mixing curved, flat-ratio and one-sided pieces."""
    n = int(rng.integers(1, max_pieces + 1))
    inner = np.sort(rng.uniform(0.05, 0.95, size=n - 1))
    bp = np.concatenate([[0.0], inner, [1.0]])
    bp = np.unique(np.round(bp, 6))
    c1, c2 = [], []
    for _ in range(bp.size - 1):
        kind = kinds[int(rng.integers(len(kinds)))]
        a = _random_positive_quad(rng)
        if kind == "curved":
            b = _random_positive_quad(rng)
        elif kind == "flat":
            b = a * rng.uniform(0.2, 3.0)
        else:
            b = a.copy()
            (a if rng.random() < 0.5 else b)[:] = 0.0
        c1.append(a)
        c2.append(b)
    return VectorMeasure([PiecewisePoly(bp, c1), PiecewisePoly(bp, c2)])


def _random_positive_quad(rng):
    while True:
        c = np.array([rng.uniform(0.1, 2.0), rng.uniform(-2.0, 3.0), rng.uniform(-2.0, 3.0)])
        if quad_min(c, 1.0) > 0.05:
            return c
