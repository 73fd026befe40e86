import csv
import json
import math

import numpy as np
import pytest

from numrange_lab import cli, numrange, theory
from numrange_lab.errors import ConsistencyError


def rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def run(*argv):
    return cli.main([str(a) for a in argv])


class TestSample:
    @pytest.mark.parametrize(
        "args,count",
        [
            (("--ensemble", "elliptic", "--n", 500, "--tau", 0.3), 500),
            (("--ensemble", "chiral-elliptic", "--n", 250, "--nu", 250), 750),
            (("--ensemble", "wishart", "--n", 500), 500),
        ],
    )
    def test_row_counts(self, tmp_path, args, count):
        assert run("sample", *args, "--out", tmp_path, "--format", "csv") == 0
        (f,) = tmp_path.glob("*_eigenvalues.csv")
        r = rows(f)
        assert r[0] == ["re", "im"] and len(r) == count + 1

    def test_seeds_and_json(self, tmp_path):
        assert run("sample", "--n", 20, "--seeds", "1,2,3", "--out", tmp_path) == 0
        assert len(list(tmp_path.glob("*_eigenvalues.csv"))) == 3
        (j,) = tmp_path.glob("*_sample.json")
        assert [s["seed"] for s in json.loads(j.read_text())["samples"]] == [1, 2, 3]

    def test_alpha_converted(self, tmp_path):
        assert run("sample", "--ensemble", "chiral-elliptic", "--n", 10, "--alpha", 0.55, "--out", tmp_path) == 0
        (f,) = tmp_path.glob("*nu6*_eigenvalues.csv")
        assert len(rows(f)) == 26 + 1


class TestRange:
    def test_ginibre_radius(self, tmp_path):
        assert run("range", "--n", 500, "--thetas", 180, "--out", tmp_path) == 0
        (j,) = tmp_path.glob("*_range.json")
        r = json.loads(j.read_text())["ranges"][0]["numerical_radius"]
        assert abs(r - math.sqrt(2)) <= 0.05 * math.sqrt(2)
        (curve,) = tmp_path.glob("*_support.csv")
        assert rows(curve)[0] == ["theta", "lambda", "re_z", "im_z"]
        (poly,) = tmp_path.glob("*_polygon.csv")
        assert rows(poly)[0] == ["x", "y"]

    def test_hermitian_segment(self, tmp_path):
        assert run("range", "--ensemble", "elliptic", "--tau", 1, "--n", 60, "--thetas", 64, "--out", tmp_path) == 0
        (j,) = tmp_path.glob("*_range.json")
        assert json.loads(j.read_text())["ranges"][0]["degenerate"] == "segment"

    def test_deterministic(self, tmp_path):
        args = ("range", "--ensemble", "wishart", "--n", 30, "--alpha", 1, "--tau", 0.5, "--thetas", 32, "--format", "csv,json,svg")
        assert run(*args, "--seeds", "1,2", "--out", tmp_path) == 0
        first = {f.name: f.read_bytes() for f in tmp_path.iterdir()}
        assert run(*args, "--seeds", "1,2", "--out", tmp_path) == 0
        assert {f.name: f.read_bytes() for f in tmp_path.iterdir()} == first


class TestTheory:
    def test_wishart_constant(self, tmp_path):
        assert run("theory", "--ensemble", "wishart", "--tau", 0, "--alpha", 0, "--thetas", 36, "--out", tmp_path) == 0
        (f,) = tmp_path.glob("*_support.csv")
        lam = np.array([float(r[1]) for r in rows(f)[1:]])
        assert np.allclose(lam, 1.6651, atol=1e-4)
        assert np.allclose(lam, 1.6650953383927806, atol=1e-12)

    def test_elliptic_formula(self, tmp_path):
        assert run("theory", "--ensemble", "elliptic", "--tau", 0.5, "--thetas", 64, "--out", tmp_path) == 0
        (f,) = tmp_path.glob("*_support.csv")
        data = np.array([[float(x) for x in r] for r in rows(f)[1:]])
        th = data[:, 0]
        assert np.allclose(data[:, 1], np.sqrt(3 * np.cos(th) ** 2 + np.sin(th) ** 2), atol=1e-14)
        assert (tmp_path / "theory_elliptic_tau0.5_alpha0_droplet.csv").exists()

    def test_chiral_alpha_zero_identical(self, tmp_path):
        assert run("theory", "--ensemble", "elliptic", "--tau", 0.4, "--thetas", 90, "--out", tmp_path / "e") == 0
        assert run("theory", "--ensemble", "chiral-elliptic", "--tau", 0.4, "--alpha", 0, "--thetas", 90, "--out", tmp_path / "c") == 0
        for suffix in ("_support.csv", "_polygon.csv"):
            (e,) = (tmp_path / "e").glob("*" + suffix)
            (c,) = (tmp_path / "c").glob("*" + suffix)
            assert e.read_bytes() == c.read_bytes()

    def test_tau_one_wishart_rejected(self, tmp_path):
        assert run("theory", "--ensemble", "wishart", "--tau", 1, "--out", tmp_path) == cli.EXIT_USAGE


class TestConverge:
    def test_trend(self, tmp_path):
        code = run(
            "converge", "--ensemble", "wishart", "--tau", 0.5, "--alpha", 1, "--n", "100,200,400",
            "--seeds", "1,2,3,4,5", "--thetas", 180, "--out", tmp_path,
        )
        assert code == 0
        (f,) = tmp_path.glob("converge_*.csv")
        table = rows(f)
        assert table[0] == ["N", "nu", "median_uniform_gap", "median_hausdorff", "seeds"]
        assert len(table) == 4
        gaps = [float(r[2]) for r in table[1:]]
        assert gaps[0] > gaps[1] > gaps[2]

    def test_single_n(self, tmp_path):
        assert run("converge", "--ensemble", "wishart", "--n", 100, "--out", tmp_path) == cli.EXIT_USAGE


class TestValidate:
    def test_subset_report(self, tmp_path):
        assert run("validate", "--only", "5,6,7,8,12", "--out", tmp_path) == 0
        report = json.loads((tmp_path / "validation_report.json").read_text())
        assert report["overall"] == "pass"
        assert [c["name"].split()[0] for c in report["checks"]] == ["5", "6", "7", "8", "12"]

    def test_fault_injection(self, tmp_path, monkeypatch):
        def tampered(tau, alpha, theta):
            c = list(theory.wishart_quartic(tau, alpha, theta).coeffs)
            c[0] += 1e-3
            return theory.PolyReal(tuple(c))

        monkeypatch.setattr(cli, "QUARTIC_HOOK", tampered)
        assert run("validate", "--only", 5, "--out", tmp_path) == cli.EXIT_VALIDATION
        report = json.loads((tmp_path / "validation_report.json").read_text())
        assert report["overall"] == "fail" and not report["checks"][0]["passed"]

    def test_unknown_check(self, tmp_path):
        assert run("validate", "--only", 13, "--out", tmp_path) == cli.EXIT_USAGE


class TestFigure:
    def test_unknown(self, tmp_path):
        assert run("figure", "9z", "--out", tmp_path) == cli.EXIT_USAGE

    @pytest.mark.parametrize("fid", ["1a", "1h", "2g", "3", "4a", "5"])
    def test_render(self, tmp_path, fid):
        assert run("figure", fid, "--n", 40, "--thetas", 64, "--out", tmp_path) == 0
        svg = (tmp_path / f"figure-{fid}.svg").read_text()
        assert svg.lstrip().startswith("<?xml") and "<svg" in svg
        assert (tmp_path / f"figure-{fid}_theory.csv").exists()

    def test_panel_parameters(self):
        from numrange_lab.plotting import PANELS

        assert (PANELS["1a"].kind, PANELS["1a"].N, PANELS["1a"].tau) == ("elliptic", 500, 0.0)
        assert (PANELS["2g"].alpha, PANELS["2g"].tau) == (1.0, 1 / math.sqrt(2))
        assert (PANELS["5"].N, PANELS["5"].tau, PANELS["5"].alpha) == (3000, 0.8, 2.0)
        assert len(PANELS) == 22

    def test_figure_1a_theory_circle(self, tmp_path):
        assert run("figure", "1a", "--n", 30, "--thetas", 32, "--out", tmp_path) == 0
        lam = np.array([float(r[1]) for r in rows(tmp_path / "figure-1a_theory.csv")[1:]])
        assert np.allclose(lam, math.sqrt(2), atol=1e-14)

    def test_deterministic_svg(self, tmp_path):
        for d in ("a", "b"):
            assert run("figure", "2e", "--n", 30, "--thetas", 32, "--out", tmp_path / d) == 0
        assert (tmp_path / "a" / "figure-2e.svg").read_bytes() == (tmp_path / "b" / "figure-2e.svg").read_bytes()


class TestErrors:
    def test_bad_subcommand(self):
        assert run("bogus") == cli.EXIT_USAGE

    def test_bad_thetas(self, tmp_path):
        assert run("sample", "--thetas", 4, "--out", tmp_path) == cli.EXIT_USAGE

    def test_bad_format(self, tmp_path):
        assert run("sample", "--format", "png", "--out", tmp_path) == cli.EXIT_USAGE

    def test_bad_tau(self, tmp_path):
        assert run("sample", "--ensemble", "elliptic", "--tau", 2, "--out", tmp_path) == cli.EXIT_USAGE

    def test_io_error_names_path(self, tmp_path, capsys):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        assert run("sample", "--n", 4, "--out", blocker / "sub") == cli.EXIT_USAGE
        assert str(blocker / "sub") in capsys.readouterr().err

    def test_consistency_exit(self, tmp_path, monkeypatch):
        def broken(*a, **k):
            raise ConsistencyError("boom")

        monkeypatch.setattr(numrange, "ensemble_sweep", broken)
        assert run("range", "--n", 4, "--out", tmp_path) == cli.EXIT_CONSISTENCY


class TestConfig:
    def test_round_trip(self, tmp_path):
        cfg = cli.RunConfig(
            cli.EnsembleSpec("ginibre-word", 12, word=("Y1", "Y2*")), theta_count=16, seeds=(4, 5), output_dir=tmp_path / "o", formats=("csv",)
        )
        assert cli.RunConfig.from_dict(cfg.to_dict()) == cfg
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg.to_dict()))
        assert run("sample", "--config", path) == 0
        assert len(list((tmp_path / "o").glob("*_eigenvalues.csv"))) == 2

    @pytest.mark.parametrize(
        "kw", [dict(theta_count=7), dict(seeds=()), dict(formats=())]
    )
    def test_invariants(self, kw):
        with pytest.raises(ValueError):
            cli.RunConfig(cli.EnsembleSpec("ginibre", 3), **kw)

    def test_bad_config_file(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        assert run("sample", "--config", p) == cli.EXIT_USAGE
