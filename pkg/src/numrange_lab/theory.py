"""Closed-form limiting shapes and the polynomial machinery behind them.

Ellipse axes for the elliptic and chiral elliptic Ginibre ensembles, the
angle-dependent quartic whose larger real root is the support function of
the limiting numerical range of the non-Hermitian Wishart ensemble, the
cubic satisfied by the Cauchy transform of the free convolution behind it,
resultants, and the spectral droplets of all three models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConsistencyError, ContractError, ParameterError
from .numrange import SupportCurve

MAX_DEGREE = 8
DEFAULT_ROOT_TOL = 1e-8


def _check_tau(tau: float, *, allow_one: bool = True) -> None:
    hi_ok = tau <= 1.0 if allow_one else tau < 1.0
    if not (0.0 <= tau and hi_ok):
        raise ParameterError(f"tau must lie in [0, 1{']' if allow_one else ')'}, got {tau}")


def _check_alpha(alpha: float) -> None:
    if not alpha >= 0.0:
        raise ParameterError(f"alpha must be >= 0, got {alpha}")


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolyReal:
    """Real polynomial, coefficients in ascending degree.

    Trailing coefficients below ``1e-14 * max|c|`` are trimmed so that the
    leading coefficient is genuinely nonzero.
    """

    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=float).ravel()
        if c.size == 0 or not np.all(np.isfinite(c)):
            raise ContractError("polynomial needs finite coefficients")
        scale = np.max(np.abs(c))
        last = c.size - 1
        while last > 0 and abs(c[last]) <= 1e-14 * scale:
            last -= 1
        c = c[: last + 1]
        if c.size - 1 > MAX_DEGREE:
            raise ContractError(f"degree {c.size - 1} exceeds {MAX_DEGREE}")
        object.__setattr__(self, "coeffs", tuple(float(x) for x in c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def descending(self) -> list[float]:
        return list(self.coeffs[::-1])

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(x, self.coeffs)

    def derivative(self) -> "PolyReal":
        if self.degree == 0:
            return PolyReal((0.0,))
        return PolyReal(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))


def companion_matrix(p: PolyReal) -> np.ndarray:
    """Frobenius companion matrix of the monic normalisation of ``p``."""
    n = p.degree
    if n < 1:
        raise ContractError("companion matrix needs degree >= 1")
    c = np.asarray(p.coeffs) / p.coeffs[-1]
    C = np.zeros((n, n))
    C[1:, :-1] = np.eye(n - 1)
    C[:, -1] = -c[:-1]
    return C


def real_roots(p: PolyReal, tolerance: float = DEFAULT_ROOT_TOL) -> list[float]:
    """Sorted distinct real roots of ``p`` from its companion eigenvalues.

    A computed root counts as real when its imaginary part is at most
    ``tolerance * (1 + |root|)``; real roots closer than that are merged.
    A k-fold root splits by about ``eps**(1/k)``, so neighbours up to
    ``sqrt(tolerance)`` apart are also merged when ``p`` at their midpoint is
    indistinguishable from rounding noise.
    """
    if p.degree < 1:
        raise ContractError("real_roots needs a polynomial of degree >= 1")
    roots = np.linalg.eigvals(companion_matrix(p))
    cand = sorted(r.real for r in roots if abs(r.imag) <= tolerance * (1.0 + abs(r)))
    absp = PolyReal(tuple(abs(c) for c in p.coeffs))
    out: list[list[float]] = []
    for r in cand:
        if out:
            prev = out[-1][-1]
            gap = abs(r - prev)
            mid = (r + prev) / 2
            noise = 64 * np.finfo(float).eps * absp(abs(mid))
            if gap <= tolerance * (1.0 + abs(r)) or (
                gap <= math.sqrt(tolerance) * (1.0 + abs(r)) and abs(p(mid)) <= noise
            ):
                out[-1].append(r)
                continue
        out.append([r])
    return [float(np.mean(group)) for group in out]


def sylvester_matrix(p: PolyReal, q: PolyReal) -> np.ndarray:
    m, n = p.degree, q.degree
    if m < 1 or n < 1:
        raise ContractError("Sylvester matrix needs two non-constant polynomials")
    S = np.zeros((m + n, m + n))
    pd, qd = p.descending(), q.descending()
    for i in range(n):
        S[i, i : i + m + 1] = pd
    for i in range(m):
        S[n + i, i : i + n + 1] = qd
    return S


def sylvester_resultant(p: PolyReal, q: PolyReal) -> float:
    """Resultant as the determinant of the Sylvester matrix.

    Vanishes exactly when ``p`` and ``q`` share a root.
    """
    return float(np.linalg.det(sylvester_matrix(p, q)))


def cubic_discriminant(a, b, c, d):
    """Discriminant of ``a x^3 + b x^2 + c x + d``; accepts complex input."""
    return b * b * c * c - 4 * a * c**3 - 4 * b**3 * d - 27 * a * a * d * d + 18 * a * b * c * d


# ---------------------------------------------------------------------------
# Ellipses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EllipseAxes:
    a: float
    b: float
    center: complex = 0j

    def __post_init__(self) -> None:
        if self.a < 0 or self.b < 0:
            raise ParameterError("semi-axes must be non-negative")


def _scaled_axes(tau: float, edge: float) -> EllipseAxes:
    return EllipseAxes(math.sqrt(1 + tau) * edge, math.sqrt(1 - tau) * edge)


def elliptic_axes(tau: float) -> EllipseAxes:
    """``a = sqrt(2 (1 + tau))``, ``b = sqrt(2 (1 - tau))``."""
    _check_tau(tau)
    return _scaled_axes(tau, math.sqrt(2))


def chiral_axes(tau: float, alpha: float) -> EllipseAxes:
    """Elliptic axes scaled by the Marchenko-Pastur edge of ``P``.

    Written so that ``alpha = 0`` reproduces :func:`elliptic_axes` bitwise.
    """
    _check_tau(tau)
    _check_alpha(alpha)
    return _scaled_axes(tau, math.sqrt(2) * (math.sqrt(1 + alpha) + 1) / 2)


def ellipse_support(axes: EllipseAxes, theta):
    """Support function of the ellipse, ``theta`` scalar or array."""
    theta = np.asarray(theta, dtype=float)
    shift = np.real(np.exp(1j * theta) * axes.center)
    h = shift + np.sqrt((axes.a * np.cos(theta)) ** 2 + (axes.b * np.sin(theta)) ** 2)
    return float(h) if h.ndim == 0 else h


def ellipse_support_curve(axes: EllipseAxes, thetas: Sequence[float]) -> SupportCurve:
    """Theoretical support curve with the tangency point for each angle."""
    th = np.asarray(thetas, dtype=float)
    c, s = np.cos(th), np.sin(th)
    r = np.sqrt((axes.a * c) ** 2 + (axes.b * s) ** 2)
    with np.errstate(invalid="ignore", divide="ignore"):
        pts = np.where(r > 0, (axes.a**2 * c - 1j * axes.b**2 * s) / r, 0j)
    values = r + np.real(np.exp(1j * th) * axes.center)
    return SupportCurve(th, values, pts + axes.center, provenance="theoretical")


# ---------------------------------------------------------------------------
# Non-Hermitian Wishart envelope
# ---------------------------------------------------------------------------


def _quartic_coeffs(tau: float, alpha: float, c):
    """Ascending coefficients of the angular quartic at ``c = cos(theta)``.

    ``c`` may be complex, which is used for complex-step differentiation.
    """
    t2 = tau * tau
    s = 1 - t2
    k = s + c * c * t2
    a4 = 16 * k
    a3 = -32 * c * tau * (alpha + 2) * k
    a2 = (
        16 * alpha**2 * c**4 * tau**4
        + 4 * (alpha**2 - 8 * alpha - 11) * s**2
        + 8 * c * c * t2 * (2 * alpha**2 - 5 * alpha - 6) * s
    )
    a1 = 4 * c * tau * s * (2 * alpha**2 * c * c * t2 - s * (2 * alpha**3 + 5 * alpha**2 + 8 * alpha + 3))
    a0 = (2 * alpha + 1) ** 2 * s**2 * (alpha**2 * c * c * t2 - (2 * alpha + 1) * s)
    return [a0, a1, a2, a3, a4]


def wishart_quartic(tau: float, alpha: float, theta: float) -> PolyReal:
    """The quartic whose larger real root is the Wishart support at ``theta``."""
    if tau == 1.0:
        raise ParameterError("the quartic is degenerate at tau = 1; probe with tau = 1 - eps")
    _check_tau(tau, allow_one=False)
    _check_alpha(alpha)
    return PolyReal(tuple(_quartic_coeffs(tau, alpha, math.cos(theta))))


def tau_zero_radius(alpha: float) -> float:
    """Radius of the limiting disc at ``tau = 0``."""
    _check_alpha(alpha)
    inner = -(alpha**2) + 8 * alpha + 11 + (alpha + 5) * math.sqrt(alpha**2 + 6 * alpha + 5)
    return math.sqrt(inner / 8)


def _two_roots(p: PolyReal, tolerance: float) -> tuple[float, float]:
    roots = real_roots(p, tolerance)
    if len(roots) != 2:
        raise ConsistencyError(f"expected exactly two real roots, found {len(roots)}: {roots}")
    lo, hi = roots
    if hi - lo <= 1e-6 * (1 + abs(hi)):
        raise ConsistencyError(f"real roots {lo}, {hi} are not separated")
    return lo, hi


def wishart_support(tau: float, alpha: float, theta: float, tolerance: float = DEFAULT_ROOT_TOL) -> float:
    """Larger real root of the angular quartic."""
    return _two_roots(wishart_quartic(tau, alpha, theta), tolerance)[1]


def wishart_support_curve(tau: float, alpha: float, thetas: Sequence[float]) -> SupportCurve:
    """Theoretical Wishart support curve with envelope points.

    The point of tangency is ``e^{-i theta} (h - i h')``; ``h'`` comes from
    implicit differentiation of the quartic, with the cosine derivative taken
    by a complex step.
    """
    th = np.asarray(thetas, dtype=float)
    values = np.empty(th.size)
    points = np.empty(th.size, dtype=complex)
    step = 1e-20
    for k, theta in enumerate(th):
        h = wishart_support(tau, alpha, theta)
        p = wishart_quartic(tau, alpha, theta)
        dDdx = p.derivative()(h)
        dcoef = np.imag(_quartic_coeffs(tau, alpha, math.cos(theta) + 1j * step)) / step
        dDdc = np.polynomial.polynomial.polyval(h, dcoef)
        dh = -dDdc * (-math.sin(theta)) / dDdx
        values[k] = h
        points[k] = np.exp(-1j * theta) * (h - 1j * dh)
    return SupportCurve(th, values, points, provenance="theoretical")


def cauchy_cubic(tau: float, alpha: float, theta: float, z: complex) -> tuple:
    """Descending coefficients of the cubic satisfied by the Cauchy transform.

    At ``z = 0`` the leading coefficient vanishes and the cubic is really a
    quadratic; callers handle that case.
    """
    _check_tau(tau, allow_one=False)
    c = math.cos(theta)
    s = 1 - tau * tau
    return (
        z * s,
        (2 * alpha + 1) * s + 4 * tau * z * c,
        4 * tau * alpha * c - 4 * z,
        4,
    )


def discriminant_matches_quartic(
    tau: float,
    alpha: float,
    theta: float,
    x: float,
    quartic: Callable[[float, float, float], PolyReal] = wishart_quartic,
) -> float:
    """Absolute gap between disc(cubic)/16 and the quartic, both at ``x``.

    ``quartic`` is replaceable so that validation can be fault-injected.
    """
    disc = cubic_discriminant(*cauchy_cubic(tau, alpha, theta, x)) / 16
    return float(abs(disc - quartic(tau, alpha, theta)(x)))


def f_certificate(alpha: float, tau: float, u: float) -> float:
    """Polynomial in ``u = sin^2 theta`` whose positivity rules out double roots."""
    a, t = alpha, tau
    t2 = t * t
    return (
        -16 * a**3 * t**6 * u**3
        + 24 * a**2 * t**4 * (a * t2 + a + t2 - 1) * u**2
        - 3 * t2 * (4 * a**3 * (t2 + 1) ** 2 + a**2 * (t2 - 1) * (17 * t2 - 1) + (22 * a + 9) * (t2 - 1) ** 2) * u
        + 2 * (a + 1) ** 3 * t**6
        + 3 * (a + 1) ** 2 * (2 * a + 7) * t**4
        + 6 * (a + 1) * (a**2 - 11 * a - 8) * t2
        + (2 * a + 1) * (a + 5) ** 2
    )


def lambda_pm(tau: float, theta: float) -> tuple[float, float]:
    """Eigenvalues ``(lambda_+, lambda_-)`` of the 2x2 rotation block."""
    _check_tau(tau)
    root = math.sqrt(1 - (tau * math.sin(theta)) ** 2)
    return tau * math.cos(theta) + root, tau * math.cos(theta) - root


def rotation_block(tau: float, theta: float) -> np.ndarray:
    """2x2 Hermitian block ``T`` with ``Re(e^{i theta} X1 X2^*) = [P Q] (T kron I) [P Q]^*``."""
    _check_tau(tau)
    c, s = math.cos(theta), math.sin(theta)
    off = math.sqrt(1 - tau * tau) * s
    return np.array([[(1 + tau) * c, -1j * off], [1j * off, -(1 - tau) * c]])


def hermitian_limit_endpoints(alpha: float) -> tuple[float, float]:
    """Marchenko-Pastur edges ``(lambda_-, lambda_+)``."""
    _check_alpha(alpha)
    r = math.sqrt(alpha + 1)
    return (r - 1) ** 2, (r + 1) ** 2


def power_ginibre_cubic(z: complex) -> tuple:
    """Descending coefficients of the Cauchy-transform cubic for ``Re(X^2)``."""
    return (z, 1, -4 * z, 4)


def power_ginibre_discriminant() -> PolyReal:
    return PolyReal((-16.0, 0.0, -704.0, 0.0, 256.0))


def power_ginibre_radius() -> float:
    """Limiting numerical radius of the square of a Ginibre matrix."""
    r = real_roots(power_ginibre_discriminant())[-1]
    closed = math.sqrt((11 + 5 * math.sqrt(5)) / 8)
    if abs(r - closed) > 1e-12:
        raise ConsistencyError(f"companion root {r!r} disagrees with closed form {closed!r}")
    return r


def ellipse_ansatz(tau: float, alpha: float) -> EllipseAxes:
    """The ellipse one would get if the Wishart envelope were elliptic.

    Real extent from the two real roots at ``theta = 0``; vertical semi-axis
    ``sqrt(1 - tau^2) * B(alpha)``.
    """
    lo, hi = _two_roots(wishart_quartic(tau, alpha, 0.0), DEFAULT_ROOT_TOL)
    return EllipseAxes(
        (hi - lo) / 2,
        math.sqrt(1 - tau * tau) * tau_zero_radius(alpha),
        center=complex((hi + lo) / 2),
    )


# ---------------------------------------------------------------------------
# Droplets
# ---------------------------------------------------------------------------

DROPLET_KINDS = ("ellipse", "chiral-quartic", "shifted-ellipse")


@dataclass(frozen=True)
class Droplet:
    """Limiting eigenvalue support of one of the three ensembles.

    ``level(x, y) <= 0`` is the defining inequality, ``center`` the point
    dilations are taken about.
    """

    kind: str
    tau: float
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in DROPLET_KINDS:
            raise ParameterError(f"unknown droplet kind {self.kind!r}")
        _check_tau(self.tau, allow_one=self.kind != "chiral-quartic")
        _check_alpha(self.alpha)

    @property
    def center(self) -> complex:
        if self.kind == "shifted-ellipse":
            return complex(self.tau * (2 + self.alpha))
        return 0j

    def semi_axes(self) -> tuple[float, float]:
        t = self.tau
        if self.kind == "ellipse":
            return 1 + t, 1 - t
        if self.kind == "shifted-ellipse":
            r = math.sqrt(1 + self.alpha)
            return (1 + t * t) * r, (1 - t * t) * r
        raise ContractError("the chiral droplet is not an ellipse")

    def level(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.kind == "chiral-quartic":
            t, a = self.tau, self.alpha
            r2 = x * x + y * y
            return (
                r2 * r2
                + 16 * t * t / (1 - t * t) ** 2 * x * x * y * y
                - 2 * t * (2 + a) * (x * x - y * y)
                - (1 + a - t * t) * (1 - (1 + a) * t * t)
            )
        ax, by = self.semi_axes()
        u = x - self.center.real
        if by == 0.0:
            # segment limit at tau = 1
            return np.where(y == 0, np.abs(u) / ax - 1, np.inf)
        return (u / ax) ** 2 + (y / by) ** 2 - 1

    def contains(self, point: complex, dilation: float = 1.0) -> bool:
        w = self.center + (complex(point) - self.center) / dilation
        return bool(self.level(w.real, w.imag) <= 0)


def droplet_contains(d: Droplet, point: complex) -> bool:
    return d.contains(point)


def chiral_component_count(tau: float, alpha: float) -> int:
    _check_tau(tau)
    _check_alpha(alpha)
    return 2 if tau > 1 / math.sqrt(1 + alpha) else 1
