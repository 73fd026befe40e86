"""Simulation-versus-theory checks with pinned tolerances.

Each ``check_*`` function returns a :class:`CheckResult`; :func:`run_checks`
assembles them into a :class:`ValidationReport`. Monte-Carlo checks use
seeds 1..5 and compare medians.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from . import ensembles, geometry, numrange, theory
from .ensembles import EnsembleSpec
from .errors import ConsistencyError
from .numrange import SupportCurve

DEFAULT_SEEDS = (1, 2, 3, 4, 5)
THETA_COUNT = 720
POWER_RADIUS = 1.6651
TAU0_ALPHA0_VALUE = 1.665096


@dataclass
class CheckResult:
    name: str
    measured: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: measured={self.measured:.6g} tolerance={self.tolerance:.6g}"


@dataclass
class ValidationReport:
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"overall": "pass" if self.passed else "fail", "checks": [asdict(c) for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=_jsonable)


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not JSON serialisable: {type(x)}")


# ---------------------------------------------------------------------------
# Shared, memoised computations
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def empirical_curve(spec: EnsembleSpec, theta_count: int = THETA_COUNT) -> SupportCurve:
    """Memoised support sweep of one sample."""
    return numrange.ensemble_sweep(spec, numrange.theta_grid(theta_count))


def theory_curve(kind: str, tau: float, alpha: float, theta_count: int = THETA_COUNT) -> SupportCurve:
    th = numrange.theta_grid(theta_count)
    if kind == "elliptic":
        return theory.ellipse_support_curve(theory.elliptic_axes(tau), th)
    if kind == "chiral-elliptic":
        return theory.ellipse_support_curve(theory.chiral_axes(tau, alpha), th)
    if kind == "ginibre":
        return theory.ellipse_support_curve(theory.elliptic_axes(0.0), th)
    if kind == "wishart":
        return _wishart_curve(tau, alpha, theta_count)
    if kind == "ginibre-word":
        r = theory.power_ginibre_radius()
        return theory.ellipse_support_curve(theory.EllipseAxes(r, r), th)
    raise ValueError(f"no theory curve for {kind!r}")


@lru_cache(maxsize=32)
def _wishart_curve(tau: float, alpha: float, theta_count: int) -> SupportCurve:
    return theory.wishart_support_curve(tau, alpha, numrange.theta_grid(theta_count))


def theory_region(kind: str, tau: float, alpha: float, theta_count: int = THETA_COUNT) -> geometry.ConvexRegion:
    if kind == "wishart":
        return geometry.halfplane_intersection(_wishart_curve(tau, alpha, theta_count))
    if kind == "elliptic":
        return geometry.ellipse_region(theory.elliptic_axes(tau))
    if kind == "chiral-elliptic":
        return geometry.ellipse_region(theory.chiral_axes(tau, alpha))
    if kind == "ginibre":
        return geometry.disc_region(math.sqrt(2))
    if kind == "ginibre-word":
        return geometry.disc_region(theory.power_ginibre_radius())
    raise ValueError(f"no theory region for {kind!r}")


def empirical_hausdorff(spec: EnsembleSpec, target: geometry.ConvexRegion, theta_count: int = THETA_COUNT) -> float:
    poly = geometry.halfplane_intersection(empirical_curve(spec, theta_count))
    return geometry.hausdorff(poly, target)


def random_draws(count: int = 1000, seed: int = 20240601) -> np.ndarray:
    """Rows ``(alpha, tau, theta, x)`` over the validation parameter box."""
    g = np.random.default_rng(seed)
    return np.column_stack(
        [
            g.uniform(0, 5, count),
            g.uniform(0.01, 0.99, count),
            g.uniform(0, 2 * np.pi, count),
            g.uniform(-10, 10, count),
        ]
    )


def _median(xs) -> float:
    return float(np.median(np.asarray(xs, dtype=float)))


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def check_ginibre_radius(seeds=DEFAULT_SEEDS) -> CheckResult:
    target = geometry.disc_region(math.sqrt(2))
    radii, dists = [], []
    for s in seeds:
        spec = EnsembleSpec("ginibre", 500, seed=s)
        radii.append(numrange.numerical_radius(empirical_curve(spec)))
        dists.append(empirical_hausdorff(spec, target))
    r, d = _median(radii), _median(dists)
    ok_r = 0.95 * math.sqrt(2) <= r <= 1.05 * math.sqrt(2)
    return CheckResult(
        "1 ginibre radius",
        d,
        0.12,
        bool(ok_r and d <= 0.12),
        {"median_radius": r, "radius_band": [0.95 * math.sqrt(2), 1.05 * math.sqrt(2)], "radii": radii, "hausdorff": dists},
    )


def check_elliptic_ellipse(seeds=DEFAULT_SEEDS) -> CheckResult:
    target = theory_region("elliptic", 0.5, 0.0)
    dists = [empirical_hausdorff(EnsembleSpec("elliptic", 500, tau=0.5, seed=s), target) for s in seeds]
    d = _median(dists)
    return CheckResult("2 elliptic ellipse", d, 0.12, d <= 0.12, {"hausdorff": dists})


def check_chiral_ellipse(seeds=DEFAULT_SEEDS) -> CheckResult:
    target = theory_region("chiral-elliptic", 0.5, 1.0)
    dists = [
        empirical_hausdorff(EnsembleSpec("chiral-elliptic", 250, tau=0.5, nu=250, seed=s), target) for s in seeds
    ]
    d = _median(dists)
    axes = theory.chiral_axes(0.5, 1.0)
    return CheckResult("3 chiral ellipse", d, 0.15, d <= 0.15, {"hausdorff": dists, "a": axes.a, "b": axes.b})


def check_wishart_envelope(seeds=DEFAULT_SEEDS) -> CheckResult:
    target = theory_region("wishart", 0.5, 1.0)
    tol = 0.05 * target.diameter_along_real_axis()
    dists = [empirical_hausdorff(EnsembleSpec("wishart", 500, tau=0.5, nu=500, seed=s), target) for s in seeds]
    d = _median(dists)
    return CheckResult(
        "4 wishart envelope", d, tol, d <= tol, {"hausdorff": dists, "real_diameter": target.diameter_along_real_axis()}
    )


def check_discriminant_identity(
    quartic: Callable[[float, float, float], theory.PolyReal] = theory.wishart_quartic, draws=None
) -> CheckResult:
    draws = random_draws() if draws is None else draws
    worst = 0.0
    for alpha, tau, theta, x in draws:
        gap = theory.discriminant_matches_quartic(tau, alpha, theta, x, quartic=quartic)
        scale = 1 + abs(quartic(tau, alpha, theta)(x))
        worst = max(worst, gap / scale)
    return CheckResult("5 discriminant identity", worst, 1e-8, worst <= 1e-8, {"draws": len(draws)})


def check_root_count(draws=None) -> CheckResult:
    draws = random_draws() if draws is None else draws
    bad_count, bad_sign = 0, 0
    max_eval = -math.inf
    for alpha, tau, theta, _ in draws:
        p = theory.wishart_quartic(tau, alpha, theta)
        roots = theory.real_roots(p)
        if len(roots) != 2 or roots[1] - roots[0] <= 1e-6 * (1 + abs(roots[1])):
            bad_count += 1
        v = p(tau * math.cos(theta) * alpha)
        max_eval = max(max_eval, v)
        if not v < 0:
            bad_sign += 1
    return CheckResult(
        "6 root-count law",
        float(bad_count + bad_sign),
        0.0,
        bad_count == 0 and bad_sign == 0,
        {"root_count_failures": bad_count, "sign_failures": bad_sign, "max_D_at_tau_c_alpha": max_eval},
    )


def check_tau_zero_closed_form() -> CheckResult:
    gaps = {}
    for alpha in (0.0, 0.5, 1.0, 2.0, 5.0):
        vals = [theory.wishart_support(0.0, alpha, t) for t in (0.0, 1.0, 2.5, 4.0)]
        gaps[alpha] = max(abs(v - theory.tau_zero_radius(alpha)) for v in vals)
    worst = max(gaps.values())
    at_zero = theory.wishart_support(0.0, 0.0, 0.0)
    ok_value = abs(at_zero - TAU0_ALPHA0_VALUE) <= 1e-6
    return CheckResult(
        "7 tau=0 closed form",
        worst,
        1e-10,
        bool(worst <= 1e-10 and ok_value),
        {"per_alpha": {str(k): v for k, v in gaps.items()}, "value_alpha0": at_zero},
    )


def check_hermitian_limit() -> CheckResult:
    lo, hi = theory.hermitian_limit_endpoints(1.0)
    right = theory.wishart_support(0.9999, 1.0, 0.0)
    left = theory.wishart_support(0.9999, 1.0, math.pi)
    err = max(abs(right - hi), abs(left + lo))
    return CheckResult(
        "8 hermitian limit",
        err,
        2e-2,
        err <= 2e-2,
        {"support_0": right, "lambda_plus": hi, "support_pi": left, "minus_lambda_minus": -lo},
    )


def check_products_vs_powers(seeds=DEFAULT_SEEDS) -> CheckResult:
    prod = [numrange.numerical_radius(empirical_curve(EnsembleSpec("ginibre-word", 500, word=("Y1", "Y2"), seed=s))) for s in seeds]
    power = [numrange.numerical_radius(empirical_curve(EnsembleSpec("ginibre-word", 500, word=("Y1", "Y1"), seed=s))) for s in seeds]
    rp, rq = _median(prod), _median(power)
    off = max(abs(rp - POWER_RADIUS), abs(rq - POWER_RADIUS)) / POWER_RADIUS
    rel = abs(rp - rq) / max(rp, rq)
    return CheckResult(
        "9 products vs powers",
        off,
        0.05,
        bool(off <= 0.05 and rel <= 0.03),
        {"median_product": rp, "median_power": rq, "mutual_relative_gap": rel, "mutual_tolerance": 0.03},
    )


def check_non_ellipse() -> CheckResult:
    th = numrange.theta_grid(THETA_COUNT)

    def gap_profile(tau, alpha):
        w = np.array([theory.wishart_support(tau, alpha, t) for t in th])
        e = theory.ellipse_support(theory.ellipse_ansatz(tau, alpha), th)
        return np.abs(w - e)

    g = gap_profile(0.8, 2.0)
    g0 = gap_profile(0.0, 2.0)
    k = int(np.argmax(g))
    theta_max = float(th[k])
    off_pi = abs(theta_max - math.pi)
    big, ref = float(g[k]), float(g0.max())
    ok = big > 10 * ref and big > 1e-2 and off_pi <= math.pi / 6
    return CheckResult(
        "10 non-ellipse",
        big,
        1e-2,
        bool(ok),
        {
            "tau0_gap": ref,
            "argmax_theta": theta_max,
            "argmax_distance_from_pi": off_pi,
            "argmax_window": math.pi / 6,
            "gap_at_pi": float(g[np.argmin(np.abs(th - math.pi))]),
        },
    )


def check_uniform_convergence(seeds=DEFAULT_SEEDS, sizes=(100, 200, 400)) -> CheckResult:
    th_curve = _wishart_curve(0.5, 1.0, THETA_COUNT)
    medians = []
    for N in sizes:
        nu = ensembles.nu_from_alpha(1.0, N)
        gaps = [numrange.uniform_gap(empirical_curve(EnsembleSpec("wishart", N, tau=0.5, nu=nu, seed=s)), th_curve) for s in seeds]
        medians.append(_median(gaps))
    steps = np.diff(medians)
    return CheckResult(
        "11 uniform convergence trend",
        float(steps.max()),
        0.0,
        bool(np.all(steps < 0)),
        {"sizes": list(sizes), "median_gaps": medians},
    )


def check_geometry_oracle() -> CheckResult:
    axes = theory.EllipseAxes(2.0, 1.0)
    th = numrange.theta_grid(THETA_COUNT)
    poly = geometry.halfplane_intersection((th, theory.ellipse_support(axes, th)))
    dense = geometry.ellipse_region(axes, 10_000)
    d = geometry.hausdorff(poly, dense)
    return CheckResult("12 geometry oracle", d, 1e-3, d <= 1e-3, {"vertices": len(poly.vertices)})


CHECKS: dict[int, Callable[[], CheckResult]] = {
    1: check_ginibre_radius,
    2: check_elliptic_ellipse,
    3: check_chiral_ellipse,
    4: check_wishart_envelope,
    5: check_discriminant_identity,
    6: check_root_count,
    7: check_tau_zero_closed_form,
    8: check_hermitian_limit,
    9: check_products_vs_powers,
    10: check_non_ellipse,
    11: check_uniform_convergence,
    12: check_geometry_oracle,
}


def run_checks(only=None, quartic=None, log: Callable[[str], None] | None = None) -> ValidationReport:
    """Run the selected checks; a failing or crashing check never aborts the rest."""
    ids = sorted(CHECKS) if not only else sorted(only)
    results = []
    for i in ids:
        fn = CHECKS[i]
        t0 = time.perf_counter()
        try:
            res = fn(quartic=quartic) if (i == 5 and quartic is not None) else fn()
        except ConsistencyError as exc:
            res = CheckResult(fn.__name__, math.nan, math.nan, False, {"error": str(exc)})
        res.details["seconds"] = round(time.perf_counter() - t0, 3)
        results.append(res)
        if log:
            log(res.line())
    return ValidationReport(results)
