"""Samplers for the Ginibre-type ensembles.

Stream ids are fixed per building block so that algebraic reductions hold
matrix-wise under a shared seed: ``G`` and ``P`` use stream 0, ``Q`` stream 1,
and the word factor ``Y_k`` stream ``k - 1``. Hence ``sample_elliptic`` at
``tau = 0`` returns exactly ``sample_ginibre`` and the word ``[Y1]`` does too.
"""

from __future__ import annotations

import math
import re
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .errors import ParameterError
from .rmt_core import RngStream, gaussian_complex

KINDS = ("ginibre", "elliptic", "chiral-elliptic", "wishart", "ginibre-word")
_LETTER = re.compile(r"^Y([1-9][0-9]*)(\*?)$")


def _check_n(N: int) -> None:
    if int(N) != N or N < 1:
        raise ParameterError(f"N must be a positive integer, got {N}")


def _check_tau(tau: float) -> None:
    if not 0.0 <= tau <= 1.0:
        raise ParameterError(f"tau must lie in [0, 1], got {tau}")


def _check_nu(nu: int) -> None:
    if int(nu) != nu or nu < 0:
        raise ParameterError(f"nu must be a non-negative integer, got {nu}")


def nu_from_alpha(alpha: float, N: int) -> int:
    """Integer rectangularity for a requested ratio ``alpha = nu / N``."""
    if alpha < 0:
        raise ParameterError(f"alpha must be >= 0, got {alpha}")
    return int(round(alpha * N))


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    N: int
    tau: float = 0.0
    nu: int = 0
    word: tuple[str, ...] = field(default_factory=tuple)
    seed: int = 1

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ParameterError(f"unknown ensemble kind {self.kind!r}; expected one of {KINDS}")
        _check_n(self.N)
        _check_tau(self.tau)
        _check_nu(self.nu)
        object.__setattr__(self, "word", tuple(self.word))
        if self.kind == "ginibre-word":
            if not self.word:
                raise ParameterError("ginibre-word needs a non-empty word")
            for letter in self.word:
                parse_letter(letter)

    @property
    def alpha(self) -> float:
        return self.nu / self.N

    @property
    def size(self) -> int:
        return 2 * self.N + self.nu if self.kind == "chiral-elliptic" else self.N

    def with_seed(self, seed: int) -> "EnsembleSpec":
        d = asdict(self)
        d["seed"] = seed
        return EnsembleSpec(**d)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["word"] = list(self.word)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EnsembleSpec":
        d = dict(d)
        d["word"] = tuple(d.get("word") or ())
        return cls(**d)


def parse_letter(letter: str) -> tuple[int, bool]:
    """``"Y2*"`` -> ``(2, True)``."""
    m = _LETTER.match(letter.strip())
    if not m:
        raise ParameterError(f"bad word letter {letter!r}; expected Y<k> or Y<k>*")
    return int(m.group(1)), bool(m.group(2))


def sample_ginibre(N: int, seed: int) -> np.ndarray:
    _check_n(N)
    return gaussian_complex(RngStream(seed, 0), N, N, 1.0 / N)


def sample_elliptic(N: int, tau: float, seed: int) -> np.ndarray:
    _check_tau(tau)
    G = sample_ginibre(N, seed)
    if tau == 0.0:
        return G
    Gs = G.conj().T
    return math.sqrt(1 + tau) / 2 * (G + Gs) + math.sqrt(1 - tau) / 2 * (G - Gs)


def sample_pq_pair(N: int, nu: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Independent ``N x (N + nu)`` Gaussian blocks with variance ``1/(2N)``."""
    _check_n(N)
    _check_nu(nu)
    M = N + nu
    P = gaussian_complex(RngStream(seed, 0), N, M, 1.0 / (2 * N))
    Q = gaussian_complex(RngStream(seed, 1), N, M, 1.0 / (2 * N))
    return P, Q


def correlated_pair(P: np.ndarray, Q: np.ndarray, tau: float) -> tuple[np.ndarray, np.ndarray]:
    """``X1 = sqrt(1+tau) P + sqrt(1-tau) Q``, ``X2 = sqrt(1+tau) P - sqrt(1-tau) Q``."""
    _check_tau(tau)
    p, q = math.sqrt(1 + tau), math.sqrt(1 - tau)
    return p * P + q * Q, p * P - q * Q


def sample_chiral_blocks(N: int, nu: int, tau: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    return correlated_pair(*sample_pq_pair(N, nu, seed), tau)


def chiral_matrix(X1: np.ndarray, X2: np.ndarray) -> np.ndarray:
    N, M = X1.shape
    X = np.zeros((N + M, N + M), dtype=complex)
    X[:N, N:] = X1
    X[N:, :N] = X2.conj().T
    return X


def sample_chiral(N: int, nu: int, tau: float, seed: int) -> np.ndarray:
    """``(2N + nu)``-square Dirac matrix ``[[0, X1], [X2^*, 0]]``."""
    return chiral_matrix(*sample_chiral_blocks(N, nu, tau, seed))


def sample_wishart(N: int, nu: int, tau: float, seed: int) -> np.ndarray:
    X1, X2 = sample_chiral_blocks(N, nu, tau, seed)
    X = X1 @ X2.conj().T
    if tau == 1.0:
        X = (X + X.conj().T) / 2
    return X


def wishart_hermitian_part_blocks(P: np.ndarray, Q: np.ndarray, tau: float, theta: float) -> np.ndarray:
    """``R S R^*`` with ``R = [P Q]`` and ``S = T(theta) kron I_M``.

    Equals ``Re(e^{i theta} X1 X2^*)`` as a matrix identity.
    """
    from .theory import rotation_block

    M = P.shape[1]
    R = np.hstack([P, Q])
    S = np.kron(rotation_block(tau, theta), np.eye(M))
    return R @ S @ R.conj().T


def sample_ginibre_word(N: int, word: Sequence[str], seed: int) -> np.ndarray:
    """Product of Ginibre factors in word order; repeated letters share a draw."""
    _check_n(N)
    if not word:
        raise ParameterError("word must be non-empty")
    letters = [parse_letter(w) for w in word]
    factors = {k: gaussian_complex(RngStream(seed, k - 1), N, N, 1.0 / N) for k in {k for k, _ in letters}}
    X = None
    for k, star in letters:
        Y = factors[k].conj().T if star else factors[k]
        X = Y.copy() if X is None else X @ Y
    return X


def sample(spec: EnsembleSpec) -> np.ndarray:
    if spec.kind == "ginibre":
        return sample_ginibre(spec.N, spec.seed)
    if spec.kind == "elliptic":
        return sample_elliptic(spec.N, spec.tau, spec.seed)
    if spec.kind == "chiral-elliptic":
        return sample_chiral(spec.N, spec.nu, spec.tau, spec.seed)
    if spec.kind == "wishart":
        return sample_wishart(spec.N, spec.nu, spec.tau, spec.seed)
    return sample_ginibre_word(spec.N, spec.word, spec.seed)
