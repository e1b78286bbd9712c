"""Brute-force ground truth on a grid of equal-length cells.

Each cell becomes an atom carrying its exact measure. Subset sums of the
atoms approximate the range (their hull is a zonogon), and exhaustive
enumeration gives discrete stand-ins for maximal ranges and partitions.
"""
from dataclasses import dataclass

import numpy as np

from .errors import TooLarge
from .geometry import ConvexRegion, hausdorff
from .intervals import IntervalSet

MAX_QSET_CELLS = 16
MAX_PARTITION_CELLS = 14
MAX_PARTITION_TARGETS = 3
EPS_FACTOR = 1.5
_CHUNK = 1 << 16


@dataclass(frozen=True)
class AtomGrid:
    edges: np.ndarray
    atom_vectors: np.ndarray  # (n, m)

    @classmethod
    def from_measure(cls, mu, n):
        edges = np.linspace(0.0, 1.0, n + 1)
        F = mu.cdf(edges)
        return cls(edges, np.diff(F, axis=0))

    @property
    def n(self):
        return len(self.atom_vectors)

    @property
    def total(self):
        return self.atom_vectors.sum(axis=0)

    @property
    def max_cell_mass(self):
        """Largest atom, per coordinate."""
        return np.abs(self.atom_vectors).max(axis=0)

    @property
    def max_atom_norm(self):
        return float(np.linalg.norm(self.atom_vectors, axis=1).max())

    def default_eps(self):
        return EPS_FACTOR * self.max_cell_mass

    def cells(self, idx):
        return IntervalSet(tuple((self.edges[i], self.edges[i + 1]) for i in idx))


def zonogon(atoms):
    """Hull of all subset sums: generators in angular order, closed by symmetry."""
    V = np.asarray(atoms.atom_vectors if isinstance(atoms, AtomGrid) else atoms, dtype=float)
    if V.ndim != 2 or V.shape[1] != 2:
        raise ValueError("zonogon needs two-dimensional atoms")
    if np.any(V < 0):
        raise ValueError("atoms must be componentwise nonnegative")
    V = V[np.any(V > 0, axis=1)]
    if len(V) == 0:
        return ConvexRegion(np.zeros((1, 2)))
    order = np.argsort(np.arctan2(V[:, 1], V[:, 0]), kind="stable")
    lower = np.vstack([np.zeros(2), np.cumsum(V[order], axis=0)])
    return ConvexRegion(np.vstack([lower, V.sum(axis=0) - lower]))


def _subset_sums(V):
    """Sums over all ``2^n`` masks, mask bit ``i`` selecting atom ``i``."""
    sums = np.zeros((1, V.shape[1]))
    for v in V:
        sums = np.concatenate([sums, sums + v])
    return sums


@dataclass
class OracleQSet:
    cloud: np.ndarray
    hull: ConvexRegion
    n_sets: int
    eps: np.ndarray


def brute_force_qset(atoms, p, eps=None):
    """Points ``mu(T)`` over pairs ``T`` inside ``S`` with ``|mu(S) - p| <= eps``.

    ``S`` runs over all cell subsets in index order; for each admissible ``S``
    every submask ``T`` is visited.
    """
    if atoms.n > MAX_QSET_CELLS:
        raise TooLarge(f"brute_force_qset handles at most {MAX_QSET_CELLS} cells")
    eps = atoms.default_eps() if eps is None else np.broadcast_to(np.asarray(eps, float), (2,))
    sums = _subset_sums(atoms.atom_vectors)
    masks = np.arange(len(sums), dtype=np.int64)
    ok = np.all(np.abs(sums - np.asarray(p, dtype=float)) <= eps + 1e-12, axis=1)
    admissible = np.flatnonzero(ok)
    inside = np.zeros(len(sums), dtype=bool)
    for S in admissible:
        inside |= (masks & ~S) == 0
    cloud = sums[inside]
    hull = ConvexRegion(cloud) if len(cloud) else ConvexRegion.empty()
    return OracleQSet(cloud, hull, len(admissible), np.asarray(eps))


def brute_force_partition(atoms, targets, eps=None):
    """Labels per cell with per-label sums within ``eps`` of the targets, or None.

    Assignments are visited in base-``k`` index order (cell 0 is the least
    significant digit); the first fit is returned.
    """
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    n, k = atoms.n, len(targets)
    if n > MAX_PARTITION_CELLS or k > MAX_PARTITION_TARGETS:
        raise TooLarge(f"brute_force_partition handles at most {MAX_PARTITION_CELLS} cells "
                       f"and {MAX_PARTITION_TARGETS} targets")
    eps = atoms.default_eps() if eps is None else np.asarray(eps, dtype=float)
    V = atoms.atom_vectors
    powers = k ** np.arange(n, dtype=np.int64)
    total = k ** n
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        labels = (idx[:, None] // powers[None, :]) % k
        fit = np.ones(len(idx), dtype=bool)
        for a in range(k):
            s = (labels == a).astype(float) @ V
            fit &= np.all(np.abs(s - targets[a]) <= eps + 1e-12, axis=1)
        hit = np.flatnonzero(fit)
        if hit.size:
            return labels[hit[0]]
    return None


def compare(mu, ranges, cells=(64, 128, 256)):
    """Hausdorff gap between the zonogon of ``n`` cells and the analytic range."""
    rows = []
    for n in cells:
        atoms = AtomGrid.from_measure(mu, n)
        gap = hausdorff(zonogon(atoms), ranges.region)
        rows.append({"cells": n, "hausdorff": gap, "bound": 2.0 * atoms.max_atom_norm})
    return rows
