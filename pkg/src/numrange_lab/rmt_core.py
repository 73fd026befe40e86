"""Seeded complex Gaussian sampling and Hermitian extremal eigenpairs.

Matrices are plain complex ``numpy`` arrays. Randomness comes from
``RngStream``: a (seed, stream-id) pair mapped onto a counter-based Philox
generator, so distinct streams never overlap and every draw is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ContractError, ParameterError

HERMITIAN_RTOL = 1e-12
RESIDUAL_RTOL = 1e-8


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence([self.seed & 0xFFFFFFFFFFFFFFFF, self.stream_id & 0xFFFFFFFFFFFFFFFF])
        return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray


def gaussian_complex(rng: RngStream, rows: int, cols: int, variance: float) -> np.ndarray:
    """``rows x cols`` i.i.d. complex Gaussians with ``E|x|^2 = variance``."""
    if not variance > 0:
        raise ParameterError(f"variance must be positive, got {variance}")
    if rows < 1 or cols < 1:
        raise ParameterError(f"shape must be positive, got {rows}x{cols}")
    g = rng.generator().standard_normal((2, rows, cols))
    return np.sqrt(variance / 2) * (g[0] + 1j * g[1])


def is_hermitian(A: np.ndarray) -> bool:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    if A.size == 0:
        return True
    scale = 1.0 + np.max(np.abs(A))
    return bool(np.max(np.abs(A - A.conj().T)) <= HERMITIAN_RTOL * scale)


def hermitian_part(A: np.ndarray) -> np.ndarray:
    """``(A + A^*) / 2`` with exactly Hermitian storage."""
    A = _square(A)
    H = (A + A.conj().T) / 2
    return symmetrize(H)


def symmetrize(H: np.ndarray) -> np.ndarray:
    """Copy the upper triangle onto the lower one so ``H == H^*`` bitwise."""
    H = np.array(H, dtype=complex)
    iu = np.triu_indices(H.shape[0], 1)
    H[(iu[1], iu[0])] = H[iu].conj()
    H[np.diag_indices(H.shape[0])] = H.diagonal().real
    return H


def _square(A) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ContractError(f"expected a non-empty square matrix, got shape {A.shape}")
    return A


def _hermitian(A) -> np.ndarray:
    A = _square(A)
    if not is_hermitian(A):
        raise ContractError("matrix is not Hermitian")
    return A


def hermitian_top_eigenpair(A: np.ndarray) -> EigenPair:
    """Algebraically largest eigenvalue with a unit eigenvector."""
    A = _hermitian(A)
    n = A.shape[0]
    w, V = scipy.linalg.eigh(A, subset_by_index=[n - 1, n - 1])
    v = V[:, 0]
    return EigenPair(float(w[0]), v / np.linalg.norm(v))


def hermitian_extremal_eigenvalues(A: np.ndarray) -> tuple[float, float]:
    A = _hermitian(A)
    n = A.shape[0]
    lo = scipy.linalg.eigh(A, eigvals_only=True, subset_by_index=[0, 0])[0]
    hi = scipy.linalg.eigh(A, eigvals_only=True, subset_by_index=[n - 1, n - 1])[0]
    return float(lo), float(hi)


def residual(A: np.ndarray, pair: EigenPair) -> float:
    return float(np.linalg.norm(A @ pair.vector - pair.value * pair.vector))
