"""Numerical range estimation through the rotated Hermitian part.

For a square matrix ``A`` the support function of its numerical range in
direction ``theta`` is the top eigenvalue of ``Re(e^{i theta} A)``, and the
top eigenvector ``y`` gives the boundary point ``y^* A y``.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import ContractError
from .rmt_core import _square, symmetrize

DEFAULT_THETA_COUNT = 720
CURVE_COLUMNS = ("theta", "lambda", "re_z", "im_z")


def theta_grid(count: int = DEFAULT_THETA_COUNT) -> np.ndarray:
    """``count`` uniform angles on ``[0, 2 pi)``."""
    if count < 1:
        raise ContractError("theta grid needs at least one angle")
    return 2 * np.pi * np.arange(count) / count


def thread_count() -> int:
    cap = os.environ.get("NUMRANGE_LAB_THREADS")
    n = os.cpu_count() or 1
    if cap:
        n = max(1, min(n, int(cap)))
    return n


@dataclass
class SupportCurve:
    thetas: np.ndarray
    values: np.ndarray
    points: np.ndarray | None = None
    provenance: str = "empirical"
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.thetas = np.asarray(self.thetas, dtype=float).ravel()
        self.values = np.asarray(self.values, dtype=float).ravel()
        if self.thetas.size != self.values.size:
            raise ContractError("thetas and values differ in length")
        if self.thetas.size == 0:
            raise ContractError("support curve is empty")
        if np.any(np.diff(self.thetas) <= 0):
            raise ContractError("thetas must be strictly increasing")
        if self.points is not None:
            self.points = np.asarray(self.points, dtype=complex).ravel()
            if self.points.size != self.thetas.size:
                raise ContractError("points and thetas differ in length")
        if self.provenance not in ("empirical", "theoretical"):
            raise ContractError(f"unknown provenance {self.provenance!r}")

    def __len__(self) -> int:
        return self.thetas.size

    def point_consistency(self) -> float:
        """Largest ``|Re(e^{i theta} z) - lambda| / (1 + |lambda|)``."""
        if self.points is None:
            raise ContractError("curve has no boundary points")
        gap = np.abs(np.real(np.exp(1j * self.thetas) * self.points) - self.values)
        return float(np.max(gap / (1 + np.abs(self.values))))

    def to_csv(self, path: str | Path) -> None:
        pts = self.points if self.points is not None else np.full(len(self), np.nan + 0j)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CURVE_COLUMNS)
            for row in zip(self.thetas, self.values, pts.real, pts.imag):
                w.writerow([repr(float(v)) for v in row])

    @classmethod
    def from_csv(cls, path: str | Path, provenance: str = "empirical") -> "SupportCurve":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        pts = data[:, 2] + 1j * data[:, 3]
        if np.all(np.isnan(pts)):
            pts = None
        return cls(data[:, 0], data[:, 1], pts, provenance=provenance)


def rotated_hermitian_part(A: np.ndarray, theta: float) -> np.ndarray:
    """``(e^{i theta} A + e^{-i theta} A^*) / 2``, stored exactly Hermitian."""
    A = _square(A)
    w = np.exp(1j * theta)
    return symmetrize((w * A + np.conj(w) * A.conj().T) / 2)


def _parallel_map(fn: Callable, items: Iterable, workers: int | None):
    items = list(items)
    workers = thread_count() if workers is None else workers
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def support_sweep(
    A: np.ndarray,
    thetas: Sequence[float] | None = None,
    workers: int | None = None,
) -> SupportCurve:
    """Empirical support function and boundary points of ``W(A)``.

    Angles are independent and may run on a thread pool; output order
    always follows ``thetas``.
    """
    A = np.asarray(_square(A), dtype=complex)
    th = theta_grid() if thetas is None else np.asarray(thetas, dtype=float)
    if th.size == 0:
        raise ContractError("thetas must be non-empty")
    n = A.shape[0]
    # Re(e^{it} A) = cos(t) Hc - sin(t) Hs, both exactly Hermitian
    Hc = symmetrize((A + A.conj().T) / 2)
    Hs = symmetrize((A - A.conj().T) / 2j)

    def one(t: float):
        M = math.cos(t) * Hc - math.sin(t) * Hs
        w, V = scipy.linalg.eigh(M, subset_by_index=[n - 1, n - 1])
        y = V[:, 0] / np.linalg.norm(V[:, 0])
        return w[0], np.vdot(y, A @ y)

    res = _parallel_map(one, th, workers)
    values = np.array([r[0] for r in res])
    points = np.array([r[1] for r in res])
    return SupportCurve(th, values, points, provenance="empirical")


def chiral_support_sweep(
    X1: np.ndarray,
    X2: np.ndarray,
    thetas: Sequence[float] | None = None,
    workers: int | None = None,
) -> SupportCurve:
    """``support_sweep`` of ``[[0, X1], [X2^*, 0]]`` using its block structure.

    The rotated Hermitian part is ``[[0, B], [B^*, 0]]`` with
    ``B = (e^{it} X1 + e^{-it} X2) / 2``, so its top eigenvalue is the top
    singular value of ``B`` and the eigenvector is ``[u; v] / sqrt(2)``.
    """
    X1 = np.asarray(X1, dtype=complex)
    X2 = np.asarray(X2, dtype=complex)
    if X1.shape != X2.shape:
        raise ContractError("chiral blocks must share a shape")
    th = theta_grid() if thetas is None else np.asarray(thetas, dtype=float)
    n = X1.shape[0]

    def one(t: float):
        w = np.exp(1j * t)
        B = (w * X1 + np.conj(w) * X2) / 2
        G = symmetrize(B @ B.conj().T)
        lam, U = scipy.linalg.eigh(G, subset_by_index=[n - 1, n - 1])
        sigma = math.sqrt(max(lam[0], 0.0))
        u = U[:, 0]
        v = B.conj().T @ u
        v = v / np.linalg.norm(v)
        # refine sigma from the singular pair itself
        sigma = float(np.real(np.vdot(u, B @ v)))
        z = (np.vdot(u, X1 @ v) + np.vdot(v, X2.conj().T @ u)) / 2
        return sigma, z

    res = _parallel_map(one, th, workers)
    return SupportCurve(th, [r[0] for r in res], [r[1] for r in res], provenance="empirical")


def ensemble_sweep(spec, thetas: Sequence[float] | None = None, workers: int | None = None) -> SupportCurve:
    """Support sweep of the matrix drawn from ``spec``; chiral draws use the block path."""
    from . import ensembles

    if spec.kind == "chiral-elliptic":
        X1, X2 = ensembles.sample_chiral_blocks(spec.N, spec.nu, spec.tau, spec.seed)
        return chiral_support_sweep(X1, X2, thetas, workers)
    return support_sweep(ensembles.sample(spec), thetas, workers)


def numerical_radius(curve: SupportCurve) -> float:
    if curve.points is None:
        raise ContractError("numerical radius needs boundary points")
    return float(np.max(np.abs(curve.points)))


def uniform_gap(empirical: SupportCurve, theoretical: SupportCurve) -> float:
    """Sup-norm distance between two support functions on one grid."""
    if empirical.thetas.shape != theoretical.thetas.shape or not np.allclose(
        empirical.thetas, theoretical.thetas, rtol=0, atol=1e-12
    ):
        raise ContractError("support curves live on different theta grids")
    return float(np.max(np.abs(empirical.values - theoretical.values)))


def lipschitz_violation(curve: SupportCurve, bound: float) -> float:
    """Largest excess of ``|dh|`` over ``bound * |dtheta|`` between neighbours.

    Non-positive means the curve respects the Lipschitz bound (wrap-around
    pair included when the grid spans the circle).
    """
    th = curve.thetas
    h = curve.values
    dth = np.diff(th)
    dh = np.abs(np.diff(h))
    excess = dh - bound * dth
    if th.size > 1:
        wrap = th[0] + 2 * np.pi - th[-1]
        excess = np.append(excess, abs(h[0] - h[-1]) - bound * wrap)
    return float(np.max(excess)) if excess.size else 0.0
