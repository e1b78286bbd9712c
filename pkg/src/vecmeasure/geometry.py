"""Convex polygons in the plane, including degenerate ones (segments, points).

All set operations return normalized regions: counter-clockwise vertices,
duplicates and collinear vertices removed at tolerance ``GEOM_TOL``. The
empty region is a regular value with zero vertices.
"""
import math
from dataclasses import dataclass

import numpy as np
import shapely

GEOM_TOL = 1e-12
_CHUNK = 256
_GEOS_MIN_VERTICES = 64


@dataclass(frozen=True, eq=False)
class ConvexRegion:
    vertices: np.ndarray

    def __init__(self, points=(), normalized=False):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        object.__setattr__(self, "vertices", pts if normalized else convex_hull(pts))

    @classmethod
    def empty(cls):
        return cls(np.zeros((0, 2)), normalized=True)

    @classmethod
    def box(cls, x0, y0, x1, y1):
        return cls([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])

    @property
    def is_empty(self):
        return len(self.vertices) == 0

    @property
    def dim(self):
        """-1 for empty, 0 for a point, 1 for a segment, 2 otherwise."""
        return min(len(self.vertices), 3) - 1

    @property
    def area(self):
        if self.dim < 2:
            return 0.0
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    @property
    def centroid(self):
        return self.vertices.mean(axis=0)

    def __len__(self):
        return len(self.vertices)

    def to_json(self):
        return self.vertices.tolist()

    @classmethod
    def from_json(cls, data):
        return cls(np.asarray(data, dtype=float).reshape(-1, 2))

    def svg_path(self, fmt="{:.6f}"):
        if self.is_empty:
            return ""
        pts = " L ".join(f"{fmt.format(x)} {fmt.format(y)}" for x, y in self.vertices)
        return f"M {pts} Z"

    def __repr__(self):
        return f"ConvexRegion({len(self.vertices)} vertices, area={self.area:.6g})"


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points, tol=GEOM_TOL):
    """Andrew's monotone chain; returns CCW vertices without collinear points."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        return np.zeros((0, 2))
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.any(np.abs(np.diff(pts, axis=0)) > tol, axis=1)
    pts = pts[keep]
    if len(pts) == 1:
        return pts
    P = [tuple(p) for p in pts]

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0.0:
                out.pop()
            out.append(p)
        return out

    lower = chain(P)
    upper = chain(reversed(P))
    hull = lower[:-1] + upper[:-1]
    H = _drop_flat_vertices(np.array(hull, dtype=float), tol)
    if len(H) > 1:
        ext = np.abs(H - H[0]).max()
        if ext <= tol:
            return H[:1]
    if len(H) == 2 and np.all(np.abs(H[0] - H[1]) <= tol):
        return H[:1]
    return H


def _drop_flat_vertices(H, tol):
    """Remove vertices within ``tol`` of the chord joining their neighbours."""
    while len(H) > 2:
        prev, nxt = np.roll(H, 1, axis=0), np.roll(H, -1, axis=0)
        chord = nxt - prev
        L = np.hypot(chord[:, 0], chord[:, 1])
        cr = chord[:, 0] * (H[:, 1] - prev[:, 1]) - chord[:, 1] * (H[:, 0] - prev[:, 0])
        # a collinear extreme point is near the chord too, so it must also lie between
        t = np.einsum("ij,ij->i", H - prev, chord)
        flat = (-cr <= tol * L) & (t >= -tol * L) & (t <= L * L + tol * L)
        if not flat.any():
            break
        # never drop two neighbours in the same sweep
        flat &= ~np.roll(flat, 1) | (np.arange(len(H)) == 0)
        flat[-1] &= not flat[0]
        H = H[~flat]
    return H


def translate(r, v):
    if r.is_empty:
        return r
    return ConvexRegion(r.vertices + np.asarray(v, dtype=float), normalized=True)


def reflect(r, c):
    """Point reflection ``{2c} - r``."""
    if r.is_empty:
        return r
    return ConvexRegion(2.0 * np.asarray(c, dtype=float) - r.vertices)


def linear_map(r, M):
    """Image of ``r`` under ``v -> v @ M`` (row-vector convention)."""
    if r.is_empty:
        return r
    return ConvexRegion(r.vertices @ np.asarray(M, dtype=float))


def halfplanes(r, tol=GEOM_TOL):
    """Unit normals ``N`` and offsets ``c`` with ``r = {x : N x <= c}``.

    Degenerate regions are represented by a slab of half-width ``tol``.
    """
    V = r.vertices
    if r.dim == 2:
        E = np.roll(V, -1, axis=0) - V
        N = np.column_stack([E[:, 1], -E[:, 0]])
        N /= np.linalg.norm(N, axis=1)[:, None]
        return N, np.einsum("ij,ij->i", N, V)
    if r.dim == 1:
        a, b = V
        d = (b - a) / np.linalg.norm(b - a)
        n = np.array([-d[1], d[0]])
        N = np.array([n, -n, d, -d])
        return N, np.array([n @ a + tol, -(n @ a) + tol, d @ b, -(d @ a)])
    if r.dim == 0:
        p = V[0]
        N = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        return N, np.array([p[0] + tol, -p[0] + tol, p[1] + tol, -p[1] + tol])
    raise ValueError("empty region has no half-plane representation")


def _clip(V, n, c, tol):
    """Sutherland-Hodgman step: keep the part of polygon ``V`` with ``n.x <= c``."""
    s = V @ n - c
    inside = s <= tol
    if inside.all():
        return V
    if not inside.any():
        return V[:0]
    s_next = np.roll(s, -1)
    V_next = np.roll(V, -1, axis=0)
    crossing = inside != np.roll(inside, -1)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.clip(s / (s - s_next), 0.0, 1.0)
    t = np.where(np.isfinite(t), t, 0.0)
    I = V + t[:, None] * (V_next - V)
    pts = np.stack([V, I], axis=1)
    mask = np.stack([inside, crossing], axis=1)
    return pts[mask]


def clip_halfplanes(V, N, c, tol=GEOM_TOL):
    V = np.asarray(V, dtype=float)
    for n, ci in zip(N, c):
        V = _clip(V, n, ci, tol)
        if len(V) == 0:
            break
    return V


def intersect(r1, r2, tol=GEOM_TOL):
    if r1.is_empty or r2.is_empty:
        return ConvexRegion.empty()
    if r1.dim == 2 and r2.dim == 2 and len(r1) + len(r2) > _GEOS_MIN_VERTICES:
        # sequential clipping is O(n m); GEOS is fast for large full-dimensional
        # inputs, and thin or touching results fall through to the clipper
        g = shapely.intersection(shapely.Polygon(r1.vertices), shapely.Polygon(r2.vertices))
        out = ConvexRegion(shapely.get_coordinates(g))
        if out.dim == 2:
            return out
    subject, clipper = (r1, r2) if (r2.dim == 2 or r1.dim < 2) else (r2, r1)
    N, c = halfplanes(clipper, tol)
    return ConvexRegion(clip_halfplanes(subject.vertices, N, c, tol))


def _edges_from_bottom(V):
    i0 = np.lexsort((V[:, 0], V[:, 1]))[0]
    V = np.roll(V, -i0, axis=0)
    if len(V) == 1:
        return V[0], np.zeros((0, 2)), np.zeros(0)
    E = np.roll(V, -1, axis=0) - V
    ang = np.arctan2(E[:, 1], E[:, 0])
    ang = np.where(ang < 0, ang + 2 * np.pi, ang)
    return V[0], E, ang


def minkowski_sum(r1, r2):
    """``r1 + r2`` by merging the two edge sequences in angular order."""
    if r1.is_empty or r2.is_empty:
        return ConvexRegion.empty()
    s1, E1, a1 = _edges_from_bottom(r1.vertices)
    s2, E2, a2 = _edges_from_bottom(r2.vertices)
    E = np.concatenate([E1, E2])
    order = np.argsort(np.concatenate([a1, a2]), kind="stable")
    pts = s1 + s2 + np.concatenate([np.zeros((1, 2)), np.cumsum(E[order], axis=0)])
    return ConvexRegion(pts)


def support(r, U):
    """Support function ``max_v <v, u>`` for each row of ``U``."""
    return _support_argmax(r.vertices, np.atleast_2d(U))[0]


def _support_argmax(V, U):
    vals = np.empty(len(U))
    idx = np.empty(len(U), dtype=int)
    for k in range(0, len(U), _CHUNK):
        D = U[k:k + _CHUNK] @ V.T
        j = D.argmax(axis=1)
        idx[k:k + _CHUNK] = j
        vals[k:k + _CHUNK] = D[np.arange(len(j)), j]
    return vals, idx


def minkowski_sub(r1, r2, tol=GEOM_TOL):
    """Erosion ``r1 - r2 = {x : x + r2 inside r1}``.

    Each half-plane ``n.x <= c`` of ``r1`` becomes ``n.x <= c - h(r2, n)``,
    the intersection of the translates ``r1 - b`` over ``b`` in ``r2``.
    """
    if r2.is_empty:
        raise ValueError("erosion by the empty set is unbounded")
    if r1.is_empty:
        return ConvexRegion.empty()
    N, c = halfplanes(r1, tol)
    c = c - support(r2, N)
    V0 = r1.vertices - r2.vertices[0]
    lo, hi = V0.min(axis=0) - 1.0, V0.max(axis=0) + 1.0
    box = np.array([[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]])
    return ConvexRegion(clip_halfplanes(box, N, c, tol))


def _normal_angles(V):
    if len(V) < 2:
        return np.zeros(0)
    E = np.roll(V, -1, axis=0) - V
    return np.mod(np.arctan2(-E[:, 0], E[:, 1]), 2 * np.pi)


def support_gap(r1, r2):
    """``sup_{|u|=1} h(r1, u) - h(r2, u)``.

    Nonpositive iff ``r1`` is inside ``r2``; ``r1`` lies in the ``t``-dilation
    of ``r2`` iff the gap is at most ``t``.
    """
    if r1.is_empty:
        return -np.inf
    if r2.is_empty:
        return np.inf
    A, B = r1.vertices, r2.vertices
    th = np.unique(np.concatenate([_normal_angles(A), _normal_angles(B), [0.0]]))
    th_next = np.append(th[1:], th[0] + 2 * np.pi)
    mid = 0.5 * (th + th_next)
    Um = np.column_stack([np.cos(mid), np.sin(mid)])
    _, ia = _support_argmax(A, Um)
    _, ib = _support_argmax(B, Um)
    W = A[ia] - B[ib]
    U0 = np.column_stack([np.cos(th), np.sin(th)])
    U1 = np.column_stack([np.cos(th_next), np.sin(th_next)])
    best = np.maximum(np.einsum("ij,ij->i", W, U0), np.einsum("ij,ij->i", W, U1))
    norm = np.linalg.norm(W, axis=1)
    phi = np.arctan2(W[:, 1], W[:, 0])
    rel = np.mod(phi - th, 2 * np.pi)
    inside = (norm > 0) & (rel <= th_next - th)
    best = np.where(inside, np.maximum(best, norm), best)
    return float(best.max())


def hausdorff(r1, r2):
    """Hausdorff distance, exact for convex regions via support functions."""
    if r1.is_empty and r2.is_empty:
        return 0.0
    if r1.is_empty or r2.is_empty:
        return np.inf
    return max(support_gap(r1, r2), support_gap(r2, r1), 0.0)


def is_subset(r1, r2, tol=GEOM_TOL):
    """``r1`` inside ``r2`` dilated by ``tol``."""
    return support_gap(r1, r2) <= tol


def distance_to(r, Q):
    """Euclidean distance from each point of ``Q`` to region ``r`` (0 inside)."""
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    V = r.vertices
    if r.is_empty:
        return np.full(len(Q), np.inf)
    if r.dim == 0:
        return np.linalg.norm(Q - V[0], axis=1)
    E = np.roll(V, -1, axis=0) - V
    if r.dim == 1:
        E, V = E[:1], V[:1]
    d = np.full(len(Q), np.inf)
    for a, e in zip(V, E):
        t = np.clip(((Q - a) @ e) / (e @ e), 0.0, 1.0)
        d = np.minimum(d, np.linalg.norm(Q - a - t[:, None] * e, axis=1))
    if r.dim == 2:
        N, c = halfplanes(r)
        inside = np.all(Q @ N.T - c <= 0.0, axis=1)
        d = np.where(inside, 0.0, d)
    return d


def contains_points(r, Q, tol=GEOM_TOL):
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    if r.is_empty:
        return np.zeros(len(Q), dtype=bool)
    if r.dim == 2:
        N, c = halfplanes(r)
        out = np.empty(len(Q), dtype=bool)
        for k in range(0, len(Q), 4096):
            out[k:k + 4096] = np.all(Q[k:k + 4096] @ N.T - c <= tol, axis=1)
        return out
    return distance_to(r, Q) <= tol


def _max_slack(N, c, Q):
    out = np.empty(len(Q))
    for k in range(0, len(Q), 4096):
        out[k:k + 4096] = (Q[k:k + 4096] @ N.T - c).max(axis=1)
    return out


def locate_points(r, Q, tol=GEOM_TOL):
    """Classify many points against a polygon in ``O(log m)`` each.

    Returns ``(inside, contact, excess)``: half-plane membership at ``tol``,
    whether an inside point lies within ``tol`` of an edge line near it, and
    a lower bound on the largest half-plane violation (0 inside). A fan from the
    first vertex locates each point; only points the fan cannot settle get
    the full ``O(m)`` test.
    """
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    if r.dim < 2:
        d = distance_to(r, Q)
        return d <= tol, d <= tol, d
    V = r.vertices
    m = len(V)
    N, c = halfplanes(r)
    D = V[1:] - V[0]
    R = Q - V[0]
    ref = D[0]
    fan = np.arctan2(ref[0] * D[:, 1] - ref[1] * D[:, 0], D @ ref)
    ang = np.arctan2(ref[0] * R[:, 1] - ref[1] * R[:, 0], R @ ref)
    k = np.clip(np.searchsorted(fan, ang, side="right") - 1, 0, m - 3)
    cand = np.stack([k + 1, k, (k + 2) % m, np.zeros_like(k), np.full_like(k, m - 1)], axis=1)
    S = np.einsum("pkj,pj->pk", N[cand], Q) - c[cand]
    lb = S.max(axis=1)
    settled = (ang >= 0) & (ang <= fan[-1]) & (S[:, 0] <= 0)
    amb = ~settled & (lb <= tol)
    sigma = lb.copy()
    if amb.any():
        sigma[amb] = _max_slack(N, c, Q[amb])
    inside = settled | (amb & (sigma <= tol))
    contact = inside & (sigma >= -tol)
    return inside, contact, np.maximum(sigma, 0.0)


def contains(r, q, tol=GEOM_TOL):
    return bool(contains_points(r, q, tol)[0])


def vertical_extent(r, x, tol=GEOM_TOL):
    """``(min y, max y)`` over points of ``r`` with first coordinate ``x``, or None."""
    V = r.vertices
    if r.is_empty or x < V[:, 0].min() - tol or x > V[:, 0].max() + tol:
        return None
    x = min(max(x, V[:, 0].min()), V[:, 0].max())
    W = np.roll(V, -1, axis=0)
    lo, hi = np.minimum(V[:, 0], W[:, 0]), np.maximum(V[:, 0], W[:, 0])
    hit = (lo <= x) & (x <= hi)
    dx = W[hit, 0] - V[hit, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(dx != 0, (x - V[hit, 0]) / dx, 0.0)
    ys = np.concatenate([V[hit, 1] + t * (W[hit, 1] - V[hit, 1]), V[np.abs(V[:, 0] - x) <= tol, 1]])
    return float(ys.min()), float(ys.max())


def is_centrally_symmetric(r, c, tol=1e-9):
    return hausdorff(reflect(r, c), r) <= tol
