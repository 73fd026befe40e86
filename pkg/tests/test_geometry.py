import math

import numpy as np
import pytest

from numrange_lab import geometry as G
from numrange_lab import numrange as NR
from numrange_lab import theory as T
from numrange_lab.errors import ContractError, GeometryError, ParameterError

# measured discretisation constant for the (2, 1) ellipse: d_H * n^2 ~ 19.75
DISCRETISATION_K = 25.0


class TestHalfplanes:
    def test_unit_disc(self):
        th = NR.theta_grid(720)
        poly = G.halfplane_intersection((th, np.ones(720)))
        assert G.hausdorff(poly, G.disc_region(1.0, count=20000)) <= 1e-4
        assert poly.is_convex()

    def test_triangle(self):
        tri = G.halfplane_intersection((NR.theta_grid(3), np.ones(3)))
        assert len(tri.vertices) == 3
        assert tri.area() == pytest.approx(3 * math.sqrt(3))
        assert sorted(np.round(tri.vertices[:, 0], 12)) == [-2.0, 1.0, 1.0]

    def test_ellipse_oracle(self):
        ax = T.EllipseAxes(2.0, 1.0)
        th = NR.theta_grid(720)
        poly = G.halfplane_intersection((th, T.ellipse_support(ax, th)))
        assert G.hausdorff(poly, G.ellipse_region(ax, 10_000)) <= 1e-3

    @pytest.mark.parametrize("n", [180, 360, 720])
    def test_discretisation_bound(self, n):
        ax = T.EllipseAxes(2.0, 1.0)
        th = NR.theta_grid(n)
        poly = G.halfplane_intersection((th, T.ellipse_support(ax, th)))
        assert G.hausdorff(poly, G.ellipse_region(ax, 10_000)) <= DISCRETISATION_K / n**2

    def test_too_few_angles(self):
        with pytest.raises(ContractError):
            G.halfplane_intersection(([0.0, 1.0], [1.0, 1.0]))

    def test_half_circle_unbounded(self):
        with pytest.raises(ContractError):
            G.halfplane_intersection((np.linspace(0, 3, 10), np.ones(10)))

    def test_empty(self):
        th = NR.theta_grid(8)
        with pytest.raises(GeometryError):
            G.halfplane_intersection((th, -np.ones(8)))

    def test_segment_flag(self):
        th = NR.theta_grid(64)
        poly = G.halfplane_intersection((th, T.ellipse_support(T.EllipseAxes(2.0, 0.0), th)))
        assert poly.degenerate == "segment"
        assert sorted(poly.vertices[:, 0]) == pytest.approx([-2.0, 2.0])


class TestHausdorff:
    def test_identical(self):
        d = G.disc_region(1.0)
        assert G.hausdorff(d, d) == 0.0

    def test_concentric(self):
        assert G.hausdorff(G.disc_region(1.0), G.disc_region(1.5)) == pytest.approx(0.5, abs=1e-9)

    def test_shifted(self):
        a, b = G.disc_region(1.0), G.disc_region(1.0, 0.3)
        assert G.hausdorff(a, b) == pytest.approx(0.3, abs=1e-6)
        assert G.support_hausdorff(a, b) == pytest.approx(0.3, abs=1e-6)

    def test_symmetry_and_triangle(self):
        regions = [G.disc_region(1.0), G.ellipse_region(T.EllipseAxes(2.0, 0.5)), G.disc_region(0.7, 0.4 - 0.2j)]
        for p in regions:
            for q in regions:
                assert G.hausdorff(p, q) == G.hausdorff(q, p)
                for r in regions:
                    assert G.hausdorff(p, r) <= G.hausdorff(p, q) + G.hausdorff(q, r) + 1e-9

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_pointwise(self, seed):
        g = np.random.default_rng(seed)
        for _ in range(40):
            p = G.convex_hull(g.normal(size=(int(g.integers(1, 15)), 2)) + g.normal(size=2))
            q = G.convex_hull(2 * g.normal(size=(int(g.integers(1, 15)), 2)))
            assert G.hausdorff(p, q) == pytest.approx(G.hausdorff_pointwise(p, q), abs=1e-12)

    def test_segment_vs_point(self):
        seg = G.convex_hull([[-1.0, 0.0], [1.0, 0.0]])
        pt = G.convex_hull([[0.0, 2.0]])
        assert seg.degenerate == "segment" and pt.degenerate == "point"
        assert G.hausdorff(seg, pt) == pytest.approx(math.sqrt(5))


class TestHull:
    def test_square_with_center(self):
        h = G.convex_hull([[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5], [0.5, 0]])
        assert len(h.vertices) == 4
        assert h.area() == pytest.approx(1.0)

    def test_single_point(self):
        assert G.convex_hull([[2.0, 3.0]]).degenerate == "point"

    def test_disc_cloud(self):
        g = np.random.default_rng(0)
        r = np.sqrt(g.uniform(size=1000))
        f = g.uniform(0, 2 * np.pi, 1000)
        assert G.hausdorff(G.convex_hull(r * np.exp(1j * f)), G.disc_region(1.0)) <= 0.1

    def test_csv_round_trip(self, tmp_path):
        e = G.ellipse_region(T.EllipseAxes(2.0, 1.0), 64)
        e.to_csv(tmp_path / "p.csv")
        assert (tmp_path / "p.csv").read_text().startswith("x,y\n")
        assert np.array_equal(G.ConvexRegion.from_csv(tmp_path / "p.csv").vertices, e.vertices)

    def test_svg_path(self):
        tri = G.halfplane_intersection((NR.theta_grid(3), np.ones(3)))
        path = tri.svg_path()
        assert path.startswith("M ") and path.endswith(" Z") and path.count(" L ") == 2


class TestDropletBoundary:
    def test_ellipse(self):
        pts = G.sample_droplet_boundary(T.Droplet("ellipse", 0.3), 256)
        assert np.allclose((pts[:, 0] / 1.3) ** 2 + (pts[:, 1] / 0.7) ** 2, 1.0, atol=1e-8)

    def test_shifted_ellipse(self):
        d = T.Droplet("shifted-ellipse", 0.5, 1.0)
        pts = G.sample_droplet_boundary(d, 256)
        ax, by = d.semi_axes()
        assert np.allclose(((pts[:, 0] - 1.5) / ax) ** 2 + (pts[:, 1] / by) ** 2, 1.0, atol=1e-8)
        assert pts[:, 0].mean() == pytest.approx(1.5, abs=1e-6)

    @pytest.mark.parametrize("tau,parts", [(0.5, 1), (0.85, 2)])
    def test_chiral(self, tau, parts):
        d = T.Droplet("chiral-quartic", tau, 1.0)
        comps = G.droplet_boundary_components(d, 256)
        assert len(comps) == parts
        pts = np.vstack(comps)
        assert np.max(np.abs(d.level(pts[:, 0], pts[:, 1]))) <= 1e-6

    def test_count(self):
        with pytest.raises(ParameterError):
            G.sample_droplet_boundary(T.Droplet("ellipse", 0.3), 4)
