"""Convex polygons built from support functions, hulls and Hausdorff distance.

Points in the plane are handled as ``(k, 2)`` float arrays; complex arrays
are accepted wherever points are expected.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ContractError, GeometryError, ParameterError
from .numrange import SupportCurve
from .theory import Droplet, EllipseAxes

COLLINEAR_EPS = 1e-12
RADIAL_TOL = 1e-10


def as_xy(points) -> np.ndarray:
    p = np.asarray(points)
    if np.iscomplexobj(p) or p.ndim == 1:
        p = np.asarray(p, dtype=complex).ravel()
        return np.column_stack([p.real, p.imag])
    if p.ndim != 2 or p.shape[1] != 2:
        raise ContractError(f"expected (k, 2) points, got shape {p.shape}")
    return p.astype(float)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass
class ConvexRegion:
    """Closed convex polygon with counterclockwise vertices.

    ``degenerate`` is ``"segment"`` (2 vertices) or ``"point"`` (1 vertex)
    for collapsed regions, otherwise ``None``.
    """

    vertices: np.ndarray
    degenerate: str | None = None

    def __post_init__(self) -> None:
        self.vertices = as_xy(self.vertices)
        k = len(self.vertices)
        if k == 0:
            raise GeometryError("empty region")
        expected = {1: "point", 2: "segment"}.get(k)
        if self.degenerate != expected:
            raise ContractError(f"{k} vertices inconsistent with degenerate={self.degenerate!r}")

    @property
    def scale(self) -> float:
        return float(1.0 + np.max(np.abs(self.vertices)))

    def is_convex(self) -> bool:
        if self.degenerate:
            return True
        V = self.vertices
        e = np.roll(V, -1, axis=0) - V
        cr = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        return bool(np.all(cr >= -1e-10 * self.scale**2))

    def area(self) -> float:
        if self.degenerate:
            return 0.0
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return float(0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def support(self, thetas) -> np.ndarray:
        """Support function ``max_v Re(e^{i theta} v)`` over the vertices."""
        th = np.atleast_1d(np.asarray(thetas, dtype=float))
        proj = np.outer(np.cos(th), self.vertices[:, 0]) - np.outer(np.sin(th), self.vertices[:, 1])
        return proj.max(axis=1)

    def diameter_along_real_axis(self) -> float:
        return float(np.ptp(self.vertices[:, 0]))

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        V = self.vertices
        if len(V) == 1:
            return V, V
        if len(V) == 2:
            return V[:1], V[1:]
        return V, np.roll(V, -1, axis=0)

    def contains(self, point, tol: float = 1e-12) -> bool:
        return bool(distance_to_region(as_xy([point]), self)[0] <= tol * self.scale)

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "y"])
            for x, y in self.vertices:
                w.writerow([repr(float(x)), repr(float(y))])

    @classmethod
    def from_csv(cls, path: str | Path) -> "ConvexRegion":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return convex_hull(data)

    def svg_path(self, precision: int = 6) -> str:
        fmt = f"{{:.{precision}g}}"
        pts = [f"{fmt.format(x)} {fmt.format(-y)}" for x, y in self.vertices]
        return "M " + " L ".join(pts) + (" Z" if self.degenerate is None else "")


def convex_hull(points) -> ConvexRegion:
    """Counterclockwise hull (monotone chain); collinear points are dropped."""
    P = as_xy(points)
    if len(P) == 0:
        raise ContractError("convex hull needs at least one point")
    P = np.unique(P, axis=0)
    scale = 1.0 + float(np.max(np.abs(P)))
    eps = COLLINEAR_EPS * scale * scale
    if len(P) == 1:
        return ConvexRegion(P, "point")
    pts = [tuple(p) for p in P]

    def half(seq):
        chain: list[tuple[float, float]] = []
        for p in seq:
            while len(chain) >= 2 and _cross(chain[-2], chain[-1], p) <= eps:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) <= 2:
        ends = np.array([pts[0], pts[-1]])
        span = np.linalg.norm(ends[1] - ends[0])
        if span <= COLLINEAR_EPS * scale:
            return ConvexRegion(ends[:1], "point")
        return ConvexRegion(ends, "segment")
    return ConvexRegion(np.array(hull), None)


def _clip(V: np.ndarray, normal: np.ndarray, h: float, tol: float) -> np.ndarray:
    """Intersect a convex CCW polygon with ``{p : normal . p <= h}``."""
    d = V @ normal - h
    inside = d <= tol
    if inside.all():
        return V
    if not inside.any():
        return V[:0]
    nxt = np.roll(inside, -1)
    i = int(np.nonzero(inside & ~nxt)[0][0])
    j = int(np.nonzero(~inside & nxt)[0][0])
    m = len(V)
    i1, j1 = (i + 1) % m, (j + 1) % m
    p_exit = V[i] + (V[i1] - V[i]) * (d[i] / (d[i] - d[i1]))
    p_enter = V[j] + (V[j1] - V[j]) * (d[j] / (d[j] - d[j1]))
    idx = np.arange(j1, j1 + ((i - j1) % m) + 1) % m
    return np.vstack([V[idx], p_exit, p_enter])


def halfplane_intersection(curve: SupportCurve | tuple[Sequence[float], Sequence[float]]) -> ConvexRegion:
    """Polygon ``{z : Re(e^{i theta_k} z) <= h_k for all k}``."""
    if isinstance(curve, SupportCurve):
        th, h = curve.thetas, curve.values
    else:
        th, h = (np.asarray(x, dtype=float) for x in curve)
    if th.size < 3:
        raise ContractError("need at least three angles")
    if not np.all(np.isfinite(h)):
        raise ContractError("support values must be finite")
    order = np.argsort(np.mod(th, 2 * np.pi))
    th, h = np.mod(th, 2 * np.pi)[order], h[order]
    gaps = np.diff(np.append(th, th[0] + 2 * np.pi))
    if gaps.max() >= np.pi:
        raise ContractError("angles leave a gap of pi or more; the region is unbounded")
    R = 2 * (1 + np.max(np.abs(h))) / math.cos(gaps.max() / 2)
    V = np.array([[-R, -R], [R, -R], [R, R], [-R, R]])
    tol = 1e-13 * (1 + np.max(np.abs(h)))
    for t, hk in zip(th, h):
        V = _clip(V, np.array([math.cos(t), -math.sin(t)]), hk, tol)
        if len(V) == 0:
            raise GeometryError("half-plane intersection is empty")
    return convex_hull(V)


def _point_segment_distances(P: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Distances from each point to each segment, shape ``(len(P), len(A))``."""
    AB = B - A
    L2 = np.einsum("ij,ij->i", AB, AB)
    AP = P[:, None, :] - A[None, :, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(L2 > 0, np.einsum("pij,ij->pi", AP, AB) / L2, 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = A[None, :, :] + t[..., None] * AB[None, :, :]
    return np.linalg.norm(P[:, None, :] - closest, axis=2)


def distance_to_region(P, region: ConvexRegion, chunk_pairs: int = 1 << 20) -> np.ndarray:
    """Euclidean distance from each point to the (filled) region.

    Points are processed in blocks so the point-by-edge work arrays stay
    near ``chunk_pairs`` entries.
    """
    P = as_xy(P)
    A, B = region.edges()
    E = B - A
    step = max(1, chunk_pairs // max(len(A), 1))
    out = np.empty(len(P))
    for start in range(0, len(P), step):
        Pc = P[start : start + step]
        dist = _point_segment_distances(Pc, A, B).min(axis=1)
        if region.degenerate is None:
            rel = Pc[:, None, :] - A[None, :, :]
            cr = E[None, :, 0] * rel[..., 1] - E[None, :, 1] * rel[..., 0]
            inside = np.all(cr >= -1e-12 * region.scale**2, axis=1)
            dist = np.where(inside, 0.0, dist)
        out[start : start + step] = dist
    return out


def _normal_fan(region: ConvexRegion) -> tuple[np.ndarray, np.ndarray]:
    """Sorted cone start angles in ``[0, 2 pi)`` and the vertex active on each cone.

    Vertex ``k`` maximises ``<v, (cos phi, sin phi)>`` for ``phi`` between
    ``starts[k]`` and the next start (cyclically).
    """
    V = region.vertices
    if len(V) == 1:
        return np.zeros(1), V
    e = np.roll(V, -1, axis=0) - V
    # outward normal of a counterclockwise edge (dx, dy) is (dy, -dx)
    starts = np.mod(np.arctan2(-e[:, 0], e[:, 1]), 2 * np.pi)
    active = np.roll(V, -1, axis=0)
    order = np.argsort(starts, kind="stable")
    return starts[order], active[order]


def _active(starts: np.ndarray, verts: np.ndarray, phi: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(starts, phi, side="right") - 1
    return verts[idx % len(verts)]


def hausdorff(p: ConvexRegion, q: ConvexRegion) -> float:
    """Exact Hausdorff distance between two convex polygons.

    For convex sets it equals ``sup_u |h_p(u) - h_q(u)|``. Between
    consecutive breakpoints of the two normal fans the difference is a
    single sinusoid ``<v_p - v_q, u>``, whose extremum over the arc has a
    closed form, so the sup is computed exactly in ``O(n + m)`` after sorting.
    """
    sp, vp = _normal_fan(p)
    sq, vq = _normal_fan(q)
    cuts = np.unique(np.concatenate([sp, sq, [0.0, 2 * np.pi]]))
    lo, hi = cuts[:-1], cuts[1:]
    keep = hi > lo
    lo, hi = lo[keep], hi[keep]
    mid = (lo + hi) / 2
    d = _active(sp, vp, mid) - _active(sq, vq, mid)
    r = np.hypot(d[:, 0], d[:, 1])

    def f(phi):  # <d, u(phi)>
        return d[:, 0] * np.cos(phi) + d[:, 1] * np.sin(phi)

    def fprime(phi):
        return -d[:, 0] * np.sin(phi) + d[:, 1] * np.cos(phi)

    ends = np.maximum(np.abs(f(lo)), np.abs(f(hi)))
    # |<d, u>| peaks where the derivative vanishes; peaks are pi apart, so an
    # arc of length >= pi always holds one. Odd in d, hence exactly symmetric.
    inside = (hi - lo >= np.pi) | (fprime(lo) * fprime(hi) <= 0)
    best = np.where(inside, r, ends)
    return float(best.max())


def hausdorff_pointwise(p: ConvexRegion, q: ConvexRegion) -> float:
    """Hausdorff distance from vertex-to-filled-polygon distances.

    Distance to a convex set is a convex function, so each directed sup is
    attained at a vertex of the other polygon. ``O(n m)``; kept as an
    independent cross-check of :func:`hausdorff`.
    """
    return float(max(distance_to_region(p.vertices, q).max(), distance_to_region(q.vertices, p).max()))


def support_hausdorff(p: ConvexRegion, q: ConvexRegion, count: int = 20000) -> float:
    """Hausdorff distance via ``sup |h_p - h_q|`` on a dense angle grid."""
    th = 2 * np.pi * np.arange(count) / count
    return float(np.max(np.abs(p.support(th) - q.support(th))))


def ellipse_region(axes: EllipseAxes, count: int = 4096) -> ConvexRegion:
    """Inscribed polygon through ``count`` boundary points of the ellipse."""
    if axes.b == 0.0 or axes.a == 0.0:
        c = axes.center
        ends = [c - axes.a - 1j * axes.b, c + axes.a + 1j * axes.b]
        return convex_hull(ends)
    t = 2 * np.pi * np.arange(count) / count
    return convex_hull(axes.center + axes.a * np.cos(t) + 1j * axes.b * np.sin(t))


def disc_region(radius: float, center: complex = 0j, count: int = 4096) -> ConvexRegion:
    return ellipse_region(EllipseAxes(radius, radius, center), count)


# ---------------------------------------------------------------------------
# Droplet boundaries
# ---------------------------------------------------------------------------


def droplet_anchors(d: Droplet) -> list[complex]:
    """Interior points from which every boundary ray exits exactly once."""
    if d.kind != "chiral-quartic":
        return [d.center]
    t, a = d.tau, d.alpha
    C = (1 + a - t * t) * (1 - (1 + a) * t * t)
    if C > 0:
        return [0j]
    # two lobes: real boundary points solve x^4 - 2 t (2 + a) x^2 - C = 0
    m = t * (2 + a)
    root = math.sqrt(m * m + C)
    x_in = math.sqrt(max(m - root, 0.0))
    x_out = math.sqrt(m + root)
    x0 = (x_in + x_out) / 2
    return [complex(x0), complex(-x0)]


def _ray_exit(d: Droplet, anchor: complex, direction: complex, r_max: float) -> float:
    steps = 400
    lo = 0.0
    for k in range(1, steps + 1):
        r = r_max * k / steps
        p = anchor + r * direction
        if d.level(p.real, p.imag) > 0:
            hi = r
            break
        lo = r
    else:
        raise GeometryError(f"ray from {anchor} in direction {direction} never leaves the droplet")
    while hi - lo > RADIAL_TOL:
        mid = (lo + hi) / 2
        p = anchor + mid * direction
        if d.level(p.real, p.imag) > 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def droplet_boundary_components(d: Droplet, count: int) -> list[np.ndarray]:
    """Boundary points per connected component, each as ``(k, 2)`` array."""
    if count < 8:
        raise ParameterError("need at least 8 boundary points")
    if d.tau >= 1.0:
        raise ParameterError("boundary sampling needs tau < 1")
    anchors = droplet_anchors(d)
    for a in anchors:
        if d.level(a.real, a.imag) >= 0:
            raise GeometryError(f"anchor {a} is not interior")
    r_max = 4.0 * (2 + d.alpha) + 4.0
    per = count // len(anchors)
    out = []
    for anchor in anchors:
        phis = 2 * np.pi * np.arange(per) / per
        pts = [anchor + _ray_exit(d, anchor, complex(math.cos(f), math.sin(f)), r_max) * complex(math.cos(f), math.sin(f)) for f in phis]
        out.append(as_xy(np.array(pts)))
    return out


def sample_droplet_boundary(d: Droplet, count: int) -> np.ndarray:
    return np.vstack(droplet_boundary_components(d, count))
