"""Figure panels: eigenvalues, droplet, theoretical and empirical ranges.

Every panel overlays four layers on one complex-plane axis: the sampled
eigenvalues, the limiting droplet boundary, the theoretical numerical-range
boundary and the empirical one. Rendering goes through matplotlib's Agg
backend with SVG metadata pinned, so the same inputs give the same bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import ensembles, geometry, numrange, theory  # noqa: E402
from .ensembles import EnsembleSpec  # noqa: E402
from .errors import ParameterError  # noqa: E402
from .numrange import SupportCurve  # noqa: E402

plt.rcParams.update(
    {
        "svg.hashsalt": "numrange-lab",
        "svg.fonttype": "none",
        "font.size": 9,
        "axes.linewidth": 0.8,
        "lines.linewidth": 1.2,
    }
)

_EIG_COLOR = "tab:red"
_DROPLET_COLOR = "0.35"
_THEORY_COLOR = "black"
_EMPIRICAL_COLOR = "tab:blue"
_ANSATZ_COLOR = "tab:green"


@dataclass(frozen=True)
class Panel:
    """Parameters of one figure panel; ``words`` is only used for products."""

    id: str
    kind: str
    N: int
    tau: float = 0.0
    alpha: float = 0.0
    words: tuple[tuple[str, ...], ...] = ()

    def specs(self, seed: int, N: int | None = None) -> list[EnsembleSpec]:
        n = self.N if N is None else N
        if self.kind == "theory-only":
            return []
        if self.kind == "ginibre-word":
            return [EnsembleSpec("ginibre-word", n, word=w, seed=seed) for w in self.words]
        return [EnsembleSpec(self.kind, n, tau=self.tau, nu=ensembles.nu_from_alpha(self.alpha, n), seed=seed)]

    @property
    def title(self) -> str:
        if self.kind == "ginibre-word":
            return " vs ".join("".join(w) for w in self.words)
        if self.kind == "theory-only":
            return f"envelope, tau={self.tau:g}, alpha={self.alpha:g}"
        bits = [self.kind, f"N={self.N}", f"tau={self.tau:.4g}"]
        if self.kind in ("chiral-elliptic", "wishart"):
            bits.append(f"alpha={self.alpha:g}")
        return ", ".join(bits)


def _build_panels() -> dict[str, Panel]:
    out: dict[str, Panel] = {}
    four = (0.0, 0.3, 0.6, 0.9)
    crit = (0.0, 0.5, 1 / math.sqrt(2), 0.85)
    for letter, tau in zip("abcd", four):
        out["1" + letter] = Panel("1" + letter, "elliptic", 500, tau)
    for letter, tau in zip("efgh", crit):
        out["1" + letter] = Panel("1" + letter, "chiral-elliptic", 250, tau, 1.0)
    for letter, tau in zip("abcd", four):
        out["2" + letter] = Panel("2" + letter, "wishart", 500, tau, 0.0)
    for letter, tau in zip("efgh", crit):
        out["2" + letter] = Panel("2" + letter, "wishart", 500, tau, 1.0)
    out["3"] = Panel("3", "theory-only", 0, 0.8, 2.0)
    words = {
        "4a": (("Y1", "Y2"), ("Y1", "Y1")),
        "4b": (("Y1", "Y1", "Y1"),),
        "4c": (("Y1", "Y1", "Y2"),),
        "4d": (("Y1", "Y2", "Y3"),),
    }
    for pid, w in words.items():
        out[pid] = Panel(pid, "ginibre-word", 500, words=w)
    out["5"] = Panel("5", "wishart", 3000, 0.8, 2.0)
    return out


PANELS = _build_panels()


@dataclass
class PanelData:
    panel: Panel
    eigenvalues: list[np.ndarray] = field(default_factory=list)
    empirical: list[SupportCurve] = field(default_factory=list)
    theoretical: SupportCurve | None = None
    droplet: list[np.ndarray] = field(default_factory=list)
    ansatz: SupportCurve | None = None


def droplet_for(kind: str, tau: float, alpha: float) -> theory.Droplet | None:
    """Limiting eigenvalue support; ``None`` where it collapses onto a segment."""
    if tau >= 1.0:
        return None
    if kind in ("elliptic", "ginibre"):
        return theory.Droplet("ellipse", tau)
    if kind == "chiral-elliptic":
        return theory.Droplet("chiral-quartic", tau, alpha)
    if kind == "wishart":
        return theory.Droplet("shifted-ellipse", tau, alpha)
    if kind == "ginibre-word":
        # products of Ginibre factors fill the unit disc
        return theory.Droplet("ellipse", 0.0)
    raise ParameterError(f"no droplet for {kind!r}")


def theory_support(kind: str, tau: float, alpha: float, thetas, word: tuple[str, ...] = ()) -> SupportCurve:
    """Theoretical support curve, for the ensembles that have one."""
    th = np.asarray(thetas, dtype=float)
    if kind == "elliptic":
        return theory.ellipse_support_curve(theory.elliptic_axes(tau), th)
    if kind == "ginibre":
        return theory.ellipse_support_curve(theory.elliptic_axes(0.0), th)
    if kind == "chiral-elliptic":
        return theory.ellipse_support_curve(theory.chiral_axes(tau, alpha), th)
    if kind == "wishart":
        return theory.wishart_support_curve(tau, alpha, th)
    if kind == "ginibre-word" and len(word) == 2:
        r = theory.power_ginibre_radius()
        return theory.ellipse_support_curve(theory.EllipseAxes(r, r), th)
    raise ParameterError(f"no limiting support curve for {kind!r} with word {word!r}")


def panel_data(panel: Panel, seed: int = 1, theta_count: int = 720, N: int | None = None) -> PanelData:
    th = numrange.theta_grid(theta_count)
    data = PanelData(panel if N is None else replace(panel, N=N))
    if panel.kind == "theory-only":
        data.theoretical = theory.wishart_support_curve(panel.tau, panel.alpha, th)
        data.ansatz = theory.ellipse_support_curve(theory.ellipse_ansatz(panel.tau, panel.alpha), th)
        data.droplet = geometry.droplet_boundary_components(droplet_for("wishart", panel.tau, panel.alpha), 720)
        return data
    for spec in panel.specs(seed, N):
        data.eigenvalues.append(np.linalg.eigvals(ensembles.sample(spec)))
        data.empirical.append(numrange.ensemble_sweep(spec, th))
    word = panel.words[0] if panel.words else ()
    try:
        data.theoretical = theory_support(panel.kind, panel.tau, panel.alpha, th, word)
    except ParameterError:
        data.theoretical = None
    d = droplet_for(panel.kind, panel.tau, panel.alpha)
    if d is not None:
        data.droplet = geometry.droplet_boundary_components(d, 720)
    if panel.id == "5":
        data.ansatz = theory.ellipse_support_curve(theory.ellipse_ansatz(panel.tau, panel.alpha), th)
    return data


def _closed(xy: np.ndarray) -> np.ndarray:
    return np.vstack([xy, xy[:1]])


def _region_xy(curve: SupportCurve) -> np.ndarray:
    return _closed(geometry.halfplane_intersection(curve).vertices)


def _supporting_lines(ax, curve: SupportCurve, count: int, reach: float) -> None:
    idx = np.linspace(0, len(curve) - 1, count, dtype=int)
    for k in idx:
        # the line Re(e^{it} z) = h(t) runs along i e^{-it} through its tangency point
        d = 1j * np.exp(-1j * curve.thetas[k])
        seg = curve.points[k] + np.array([-reach, reach]) * d
        ax.plot(seg.real, seg.imag, color="0.75", lw=0.5, zorder=1)


def render(data: PanelData, path: str | Path) -> Path:
    """Draw ``data`` and save it as SVG at ``path``."""
    path = Path(path)
    panel = data.panel
    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    markers = ("o", "s")
    empirical_colors = (_EMPIRICAL_COLOR, "tab:orange")
    for k, eig in enumerate(data.eigenvalues):
        label = "eigenvalues" if len(data.eigenvalues) == 1 else f"eigenvalues {''.join(panel.words[k])}"
        ax.scatter(eig.real, eig.imag, s=2, marker=markers[k % 2], color=_EIG_COLOR if k == 0 else "tab:purple", lw=0, label=label, zorder=2)
    for k, comp in enumerate(data.droplet):
        ax.plot(*_closed(comp).T, color=_DROPLET_COLOR, lw=0.9, ls="--", label="droplet" if k == 0 else None, zorder=3)
    if panel.kind == "theory-only" and data.theoretical is not None:
        xy = _region_xy(data.theoretical)
        reach = 0.3 * float(np.ptp(xy[:, 0]))
        _supporting_lines(ax, data.theoretical, 36, reach)
    if data.theoretical is not None:
        ax.plot(*_region_xy(data.theoretical).T, color=_THEORY_COLOR, lw=1.1, label="theory", zorder=4)
    if data.ansatz is not None:
        ax.plot(*_region_xy(data.ansatz).T, color=_ANSATZ_COLOR, lw=1.0, ls="-.", label="ellipse ansatz", zorder=4)
    for k, curve in enumerate(data.empirical):
        label = "numerical range" if len(data.empirical) == 1 else f"numerical range {''.join(panel.words[k])}"
        ax.plot(*_region_xy(curve).T, color=empirical_colors[k % 2], lw=1.0, ls=":", label=label, zorder=5)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title(f"({panel.id}) {panel.title}")
    ax.legend(loc="upper right", fontsize=6, frameon=False, markerscale=3)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    return path


def scatter_svg(eigenvalues: np.ndarray, path: str | Path, title: str = "") -> Path:
    """Plain eigenvalue scatter, used by the sampling command."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    ax.scatter(eigenvalues.real, eigenvalues.imag, s=2, color=_EIG_COLOR, lw=0)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    return path


def range_svg(curve: SupportCurve, path: str | Path, title: str = "", theoretical: SupportCurve | None = None) -> Path:
    """Empirical numerical range, with the theory boundary when given."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    if theoretical is not None:
        ax.plot(*_region_xy(theoretical).T, color=_THEORY_COLOR, lw=1.1, label="theory")
    pts = curve.points if curve.points is not None else None
    region = geometry.halfplane_intersection(curve)
    ax.plot(*_closed(region.vertices).T, color=_EMPIRICAL_COLOR, ls=":", label="numerical range")
    if pts is not None:
        ax.scatter(pts.real, pts.imag, s=1, color=_EMPIRICAL_COLOR, lw=0)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_title(title)
    ax.legend(loc="upper right", fontsize=6, frameon=False)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    return path
