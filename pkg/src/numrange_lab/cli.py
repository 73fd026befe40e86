"""``numrange-lab`` command line.

Subcommands: ``sample``, ``range``, ``theory``, ``converge``, ``validate``
and ``figure``. Exit status is 0 on success, 1 for usage and parameter
errors, 2 when validation fails and 3 for internal-consistency errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import ensembles, geometry, numrange, plotting, validation
from .ensembles import EnsembleSpec
from .errors import ConsistencyError, ContractError, GeometryError, ParameterError

FORMATS = ("csv", "json", "svg")
EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_CONSISTENCY = 0, 1, 2, 3

# replaced by tests to fault-inject the discriminant check
QUARTIC_HOOK = None


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    ensemble: EnsembleSpec
    theta_count: int = numrange.DEFAULT_THETA_COUNT
    seeds: tuple[int, ...] = (1,)
    output_dir: Path = Path(".")
    formats: tuple[str, ...] = ("csv", "json")
    sizes: tuple[int, ...] = ()
    alpha: float | None = None

    def __post_init__(self) -> None:
        self.seeds = tuple(int(s) for s in self.seeds)
        self.formats = tuple(self.formats)
        self.output_dir = Path(self.output_dir)
        if self.theta_count < 8:
            raise ParameterError(f"theta count must be >= 8, got {self.theta_count}")
        if not self.seeds:
            raise ParameterError("need at least one seed")
        if not self.formats:
            raise ParameterError("need at least one output format")
        bad = set(self.formats) - set(FORMATS)
        if bad:
            raise ParameterError(f"unknown formats {sorted(bad)}; choose from {FORMATS}")

    def to_dict(self) -> dict:
        return {
            "ensemble": self.ensemble.to_dict(),
            "theta_count": self.theta_count,
            "seeds": list(self.seeds),
            "output_dir": str(self.output_dir),
            "formats": list(self.formats),
            "sizes": list(self.sizes),
            "alpha": self.alpha,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        d["ensemble"] = EnsembleSpec.from_dict(d["ensemble"])
        d["seeds"] = tuple(d.get("seeds", (1,)))
        d["formats"] = tuple(d.get("formats", ("csv", "json")))
        d["sizes"] = tuple(d.get("sizes", ()))
        return cls(**d)


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _write_rows(path: Path, header: Sequence[str], rows) -> Path:
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for row in rows:
                w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return path


def _write_json(path: Path, payload: dict) -> Path:
    try:
        path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=validation._jsonable) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return path


def _write_curve(curve, path: Path) -> Path:
    try:
        curve.to_csv(path)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return path


def _write_region(region: geometry.ConvexRegion, path: Path) -> Path:
    try:
        region.to_csv(path)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return path


def stem(spec: EnsembleSpec) -> str:
    """File-name stem that encodes the ensemble parameters."""
    parts = [spec.kind, f"N{spec.N}", f"tau{spec.tau:g}"]
    if spec.kind in ("chiral-elliptic", "wishart"):
        parts.append(f"nu{spec.nu}")
    if spec.kind == "ginibre-word":
        parts.append("".join(spec.word).replace("*", "s"))
    return "_".join(parts)


def _outdir(cfg: RunConfig) -> Path:
    try:
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {cfg.output_dir}: {exc.strerror}") from exc
    return cfg.output_dir


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_sample(cfg: RunConfig) -> list[Path]:
    """Eigenvalues of every sampled matrix, one file per seed."""
    out = _outdir(cfg)
    files = []
    summary = []
    for seed in cfg.seeds:
        spec = cfg.ensemble.with_seed(seed)
        eig = np.linalg.eigvals(ensembles.sample(spec))
        base = out / f"{stem(spec)}_seed{seed}"
        if "csv" in cfg.formats:
            files.append(_write_rows(base.with_name(base.name + "_eigenvalues.csv"), ("re", "im"), zip(eig.real, eig.imag)))
        if "svg" in cfg.formats:
            files.append(plotting.scatter_svg(eig, base.with_name(base.name + "_eigenvalues.svg"), stem(spec)))
        summary.append({"seed": seed, "count": int(eig.size), "spectral_radius": float(np.max(np.abs(eig)))})
    if "json" in cfg.formats:
        files.append(_write_json(out / f"{stem(cfg.ensemble)}_sample.json", {"config": cfg.to_dict(), "samples": summary}))
    return files


def cmd_range(cfg: RunConfig) -> list[Path]:
    """Empirical support curve and half-plane polygon per seed."""
    out = _outdir(cfg)
    th = numrange.theta_grid(cfg.theta_count)
    files = []
    summary = []
    for seed in cfg.seeds:
        spec = cfg.ensemble.with_seed(seed)
        curve = numrange.ensemble_sweep(spec, th)
        region = geometry.halfplane_intersection(curve)
        if not region.is_convex():
            raise ConsistencyError(f"polygon for seed {seed} is not convex")
        base = f"{stem(spec)}_seed{seed}"
        if "csv" in cfg.formats:
            files.append(_write_curve(curve, out / f"{base}_support.csv"))
            files.append(_write_region(region, out / f"{base}_polygon.csv"))
        if "svg" in cfg.formats:
            files.append(plotting.range_svg(curve, out / f"{base}_range.svg", base))
        summary.append(
            {
                "seed": seed,
                "numerical_radius": numrange.numerical_radius(curve),
                "point_consistency": curve.point_consistency(),
                "vertices": len(region.vertices),
                "degenerate": region.degenerate,
            }
        )
    if "json" in cfg.formats:
        files.append(_write_json(out / f"{stem(cfg.ensemble)}_range.json", {"config": cfg.to_dict(), "ranges": summary}))
    return files


def cmd_theory(cfg: RunConfig) -> list[Path]:
    """Theoretical support curve, its polygon and the droplet boundary."""
    spec = cfg.ensemble
    alpha = spec.alpha if cfg.alpha is None else cfg.alpha
    out = _outdir(cfg)
    th = numrange.theta_grid(cfg.theta_count)
    curve = plotting.theory_support(spec.kind, spec.tau, alpha, th, spec.word)
    region = geometry.halfplane_intersection(curve)
    base = f"theory_{spec.kind}_tau{spec.tau:g}_alpha{alpha:g}"
    files = []
    droplet = plotting.droplet_for(spec.kind, spec.tau, alpha)
    boundary = None if droplet is None else geometry.sample_droplet_boundary(droplet, cfg.theta_count)
    if "csv" in cfg.formats:
        files.append(_write_curve(curve, out / f"{base}_support.csv"))
        files.append(_write_region(region, out / f"{base}_polygon.csv"))
        if boundary is not None:
            files.append(_write_rows(out / f"{base}_droplet.csv", ("x", "y"), boundary))
    if "svg" in cfg.formats:
        data = plotting.PanelData(
            plotting.Panel("theory", spec.kind, 0, spec.tau, alpha, (spec.word,) if spec.word else ()),
            theoretical=curve,
            droplet=[] if boundary is None else geometry.droplet_boundary_components(droplet, cfg.theta_count),
        )
        files.append(plotting.render(data, out / f"{base}.svg"))
    if "json" in cfg.formats:
        payload = {
            "kind": spec.kind,
            "tau": spec.tau,
            "alpha": alpha,
            "theta_count": cfg.theta_count,
            "support_min": float(curve.values.min()),
            "support_max": float(curve.values.max()),
            "real_diameter": region.diameter_along_real_axis(),
            "area": region.area(),
        }
        files.append(_write_json(out / f"{base}.json", payload))
    return files


def converge_table(cfg: RunConfig) -> list[dict]:
    if len(cfg.sizes) < 2:
        raise ParameterError("converge needs at least two values of N")
    spec = cfg.ensemble
    alpha = spec.alpha if cfg.alpha is None else cfg.alpha
    th = numrange.theta_grid(cfg.theta_count)
    curve = plotting.theory_support(spec.kind, spec.tau, alpha, th, spec.word)
    target = geometry.halfplane_intersection(curve)
    rows = []
    for N in cfg.sizes:
        nu = ensembles.nu_from_alpha(alpha, N)
        gaps, dists = [], []
        for seed in cfg.seeds:
            s = EnsembleSpec(spec.kind, N, tau=spec.tau, nu=nu, word=spec.word, seed=seed)
            emp = numrange.ensemble_sweep(s, th)
            gaps.append(numrange.uniform_gap(emp, curve))
            dists.append(geometry.hausdorff(geometry.halfplane_intersection(emp), target))
        rows.append({"N": N, "nu": nu, "median_uniform_gap": float(np.median(gaps)), "median_hausdorff": float(np.median(dists)), "seeds": len(cfg.seeds)})
    return rows


def cmd_converge(cfg: RunConfig) -> list[Path]:
    rows = converge_table(cfg)
    out = _outdir(cfg)
    base = f"converge_{cfg.ensemble.kind}_tau{cfg.ensemble.tau:g}"
    files = []
    if "csv" in cfg.formats:
        cols = ("N", "nu", "median_uniform_gap", "median_hausdorff", "seeds")
        files.append(_write_rows(out / f"{base}.csv", cols, ([r[c] for c in cols] for r in rows)))
    if "json" in cfg.formats:
        files.append(_write_json(out / f"{base}.json", {"config": cfg.to_dict(), "rows": rows}))
    if "svg" in cfg.formats:
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(4.2, 3.2))
        Ns = [r["N"] for r in rows]
        ax.loglog(Ns, [r["median_uniform_gap"] for r in rows], "o-", label="uniform gap")
        ax.loglog(Ns, [r["median_hausdorff"] for r in rows], "s--", label="Hausdorff")
        ax.set_xlabel("N")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(out / f"{base}.svg", format="svg", metadata={"Date": None, "Creator": None})
        plt.close(fig)
        files.append(out / f"{base}.svg")
    return files


def cmd_validate(out: Path, only=None, log=print) -> validation.ValidationReport:
    report = validation.run_checks(only=only, quartic=QUARTIC_HOOK, log=log)
    out.mkdir(parents=True, exist_ok=True)
    (out / "validation_report.json").write_text(report.to_json() + "\n")
    return report


def cmd_figure(figure_id: str, cfg: RunConfig, N: int | None = None) -> list[Path]:
    if figure_id not in plotting.PANELS:
        raise UsageError(f"unknown figure id {figure_id!r}; choose from {', '.join(plotting.PANELS)}")
    out = _outdir(cfg)
    panel = plotting.PANELS[figure_id]
    data = plotting.panel_data(panel, seed=cfg.seeds[0], theta_count=cfg.theta_count, N=N)
    base = out / f"figure-{figure_id}"
    files = [plotting.render(data, base.with_suffix(".svg"))]
    if "csv" in cfg.formats:
        for k, eig in enumerate(data.eigenvalues):
            files.append(_write_rows(out / f"figure-{figure_id}_eigenvalues{k}.csv", ("re", "im"), zip(eig.real, eig.imag)))
        for k, curve in enumerate(data.empirical):
            files.append(_write_curve(curve, out / f"figure-{figure_id}_empirical{k}.csv"))
        if data.theoretical is not None:
            files.append(_write_curve(data.theoretical, out / f"figure-{figure_id}_theory.csv"))
        if data.droplet:
            files.append(_write_rows(out / f"figure-{figure_id}_droplet.csv", ("x", "y"), np.vstack(data.droplet)))
        if data.ansatz is not None:
            files.append(_write_curve(data.ansatz, out / f"figure-{figure_id}_ansatz.csv"))
    return files


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _str_list(text: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--ensemble", default="ginibre", choices=ensembles.KINDS)
    common.add_argument("--n", type=_int_list, default=None, help="matrix size; comma list for converge")
    common.add_argument("--tau", type=float, default=0.0)
    common.add_argument("--alpha", type=float, default=None, help="rectangularity; nu = round(alpha N)")
    common.add_argument("--nu", type=int, default=None)
    common.add_argument("--word", type=_str_list, default=None, help="letters such as Y1,Y2*")
    common.add_argument("--thetas", type=int, default=numrange.DEFAULT_THETA_COUNT)
    common.add_argument("--seeds", type=_int_list, default=None)
    common.add_argument("--out", type=Path, default=Path("numrange-out"))
    common.add_argument("--format", type=_str_list, default=None)
    common.add_argument("--config", type=Path, default=None, help="RunConfig as JSON; flags are ignored")

    p = _Parser(prog="numrange-lab", description="Numerical ranges of non-Hermitian random matrices.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("sample", parents=[common], help="eigenvalues of sampled matrices")
    sub.add_parser("range", parents=[common], help="empirical support curves and polygons")
    sub.add_parser("theory", parents=[common], help="limiting support curve, polygon and droplet")
    sub.add_parser("converge", parents=[common], help="gap to theory as N grows")
    v = sub.add_parser("validate", parents=[common], help="run the acceptance checks")
    v.add_argument("--only", type=_int_list, default=None, help="subset of check numbers")
    f = sub.add_parser("figure", parents=[common], help="render one figure panel")
    f.add_argument("figure_id")
    return p


def config_from_args(args) -> RunConfig:
    if args.config is not None:
        try:
            return RunConfig.from_dict(json.loads(args.config.read_text()))
        except OSError as exc:
            raise OSError(f"cannot read {args.config}: {exc.strerror}") from exc
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise UsageError(f"bad config {args.config}: {exc}") from exc
    sizes = args.n or (500,)
    if args.command not in ("converge",) and len(sizes) != 1:
        raise UsageError("--n takes a single value except for converge")
    N = sizes[0]
    if args.nu is not None and args.alpha is not None:
        raise UsageError("give --alpha or --nu, not both")
    nu = args.nu if args.nu is not None else ensembles.nu_from_alpha(args.alpha or 0.0, N)
    word = args.word or (("Y1", "Y2") if args.ensemble == "ginibre-word" else ())
    spec = EnsembleSpec(args.ensemble, N, tau=args.tau, nu=nu, word=word, seed=1)
    default_formats = ("csv", "svg") if args.command == "figure" else ("csv", "json")
    return RunConfig(
        spec,
        theta_count=args.thetas,
        seeds=args.seeds if args.seeds is not None else (1,),
        output_dir=args.out,
        formats=args.format if args.format is not None else default_formats,
        sizes=tuple(sizes),
        alpha=args.alpha,
    )


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        only = args.only
        if only and not set(only) <= set(validation.CHECKS):
            raise UsageError(f"unknown check ids {sorted(set(only) - set(validation.CHECKS))}")
        report = cmd_validate(args.out, only=only)
        print(f"overall: {'PASS' if report.passed else 'FAIL'}")
        return EXIT_OK if report.passed else EXIT_VALIDATION
    cfg = config_from_args(args)
    if args.command == "figure":
        n = None if args.n is None else args.n[0]
        files = cmd_figure(args.figure_id, cfg, N=n)
    else:
        files = {"sample": cmd_sample, "range": cmd_range, "theory": cmd_theory, "converge": cmd_converge}[args.command](cfg)
    for f in files:
        print(f)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    try:
        return run(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, ContractError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConsistencyError, GeometryError) as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
