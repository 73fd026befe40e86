"""Property-based checks over random matrices, parameters and polygons."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from numrange_lab import geometry as G
from numrange_lab import numrange as NR
from numrange_lab import theory as T
from numrange_lab.rmt_core import hermitian_part, is_hermitian

SETTINGS = settings(max_examples=60, deadline=None)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
sizes = st.integers(min_value=1, max_value=9)
taus = st.floats(min_value=0.01, max_value=0.99)
alphas = st.floats(min_value=0.0, max_value=5.0)
angles = st.floats(min_value=0.0, max_value=2 * math.pi, exclude_max=True)


def random_matrix(n, seed):
    g = np.random.default_rng(seed)
    return g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))


@SETTINGS
@given(sizes, seeds)
def test_hermitian_part_exact(n, seed):
    H = hermitian_part(random_matrix(n, seed))
    assert np.array_equal(H, H.conj().T) and is_hermitian(H)


@SETTINGS
@given(sizes, seeds)
def test_spectrum_inside_range(n, seed):
    A = random_matrix(n, seed)
    curve = NR.support_sweep(A, NR.theta_grid(48), workers=1)
    region = G.halfplane_intersection(curve)
    norm = np.linalg.norm(A, 2)
    assert np.max(G.distance_to_region(np.linalg.eigvals(A), region)) <= 1e-6 * (1 + norm)
    assert curve.point_consistency() <= 1e-8
    assert NR.lipschitz_violation(curve, norm) <= 1e-12


@SETTINGS
@given(sizes, seeds)
def test_unitary_invariance(n, seed):
    A = random_matrix(n, seed)
    U, _ = np.linalg.qr(random_matrix(n, seed + 1))
    th = NR.theta_grid(16)
    a = NR.support_sweep(A, th, workers=1).values
    b = NR.support_sweep(U @ A @ U.conj().T, th, workers=1).values
    assert np.allclose(a, b, atol=1e-10 * (1 + np.abs(a).max()))


@SETTINGS
@given(sizes, seeds)
def test_negation_rotates_by_pi(n, seed):
    A = random_matrix(n, seed)
    th = NR.theta_grid(16)
    a = NR.support_sweep(A, th + math.pi, workers=1).values
    b = NR.support_sweep(-A, th, workers=1).values
    assert np.allclose(a, b, atol=1e-10 * (1 + np.abs(a).max()))


@SETTINGS
@given(taus, alphas, angles, st.floats(min_value=-10, max_value=10))
def test_discriminant_identity(tau, alpha, theta, x):
    gap = T.discriminant_matches_quartic(tau, alpha, theta, x)
    assert gap <= 1e-8 * (1 + abs(T.wishart_quartic(tau, alpha, theta)(x)))


@SETTINGS
@given(taus, alphas, angles)
def test_root_count_and_sign(tau, alpha, theta):
    p = T.wishart_quartic(tau, alpha, theta)
    roots = T.real_roots(p)
    assert len(roots) == 2 and roots[1] - roots[0] > 1e-6 * (1 + abs(roots[1]))
    assert p(tau * math.cos(theta) * alpha) < 0


@SETTINGS
@given(taus, alphas, angles)
def test_wishart_support_symmetric(tau, alpha, theta):
    assert T.wishart_support(tau, alpha, theta) == pytest.approx(T.wishart_support(tau, alpha, 2 * math.pi - theta), abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(taus, alphas)
def test_envelope_is_convex_body(tau, alpha):
    th = NR.theta_grid(90)
    curve = T.wishart_support_curve(tau, alpha, th)
    region = G.halfplane_intersection(curve)
    assert region.degenerate is None and region.is_convex() and region.area() > 0
    # the envelope points lie on the polygon boundary up to discretisation
    assert np.max(G.distance_to_region(curve.points, region)) <= 1e-9 * region.scale
    # the droplet sits inside the numerical range
    d = T.Droplet("shifted-ellipse", tau, alpha)
    inner = G.sample_droplet_boundary(d, 32)
    assert np.max(G.distance_to_region(inner, region)) <= 1e-9


@SETTINGS
@given(taus, alphas)
def test_chiral_reduces_to_elliptic(tau, alpha):
    c = T.chiral_axes(tau, alpha)
    e = T.elliptic_axes(tau)
    k = (math.sqrt(1 + alpha) + 1) / 2
    assert c.a == pytest.approx(k * e.a) and c.b == pytest.approx(k * e.b)
    assert T.chiral_axes(tau, 0.0) == e


polygons = st.builds(
    lambda n, seed, s: G.convex_hull(s * np.random.default_rng(seed).normal(size=(n, 2))),
    st.integers(min_value=1, max_value=20),
    seeds,
    st.floats(min_value=0.1, max_value=5.0),
)


@SETTINGS
@given(polygons, polygons, polygons)
def test_hausdorff_metric(p, q, r):
    assert G.hausdorff(p, q) == G.hausdorff(q, p)
    assert G.hausdorff(p, p) == 0.0
    assert G.hausdorff(p, r) <= G.hausdorff(p, q) + G.hausdorff(q, r) + 1e-9
    assert G.hausdorff(p, q) == pytest.approx(G.hausdorff_pointwise(p, q), abs=1e-9)


@SETTINGS
@given(polygons)
def test_halfplanes_recover_polygon(p):
    th = NR.theta_grid(720)
    back = G.halfplane_intersection((th, p.support(th)))
    assert back.is_convex()
    # faces not normal to a grid angle overshoot to first order in the spacing
    diam = max(np.hypot(*(a - b)) for a in p.vertices for b in p.vertices)
    assert G.hausdorff(back, p) <= diam * (2 * math.pi / 720) + 1e-12 * p.scale
