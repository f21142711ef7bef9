"""Render sweep outputs to image files.

Works from the on-disk artifacts (summary JSON dict, records CSV) rather
than live objects, so figures can be regenerated from any saved run. The
sweep itself never imports this module; rendering is an opt-in report step.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

_HIST_LABELS = {
    "c_sum": "pairwise concurrence sum",
    "c2_sum": "pairwise squared-concurrence sum",
    "e_sum": "pairwise EF sum",
    "e2_sum": "pairwise squared-EF sum",
    "s1": "focus-qubit entropy",
    "j_sum": "pairwise classical-correlation sum",
    "d_sum": "pairwise discord sum",
}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_summary_figures(summary: dict, outdir) -> list[Path]:
    """One histogram figure per histogram in a summary JSON dict."""
    plt = _pyplot()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, hist in sorted(summary["histograms"].items()):
        edges = np.asarray(hist["edges"], dtype=float)
        counts = np.asarray(hist["counts"], dtype=float)
        fig, ax = plt.subplots(figsize=(5.0, 3.2))
        ax.bar(edges[:-1], counts, width=np.diff(edges), align="edge", color="#336699")
        ax.set_xlabel(_HIST_LABELS.get(name, name))
        ax.set_ylabel("samples")
        ax.set_title(f"{name} ({summary['n_samples']} samples, seed {summary['seed']})")
        fig.tight_layout()
        path = outdir / f"hist_{name}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths


def _scatter_panel(ax, x, y, xlabel, ylabel):
    ax.plot(x, y, ".", markersize=1.5, alpha=0.4, color="#336699", rasterized=True)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)


def render_records_figures(records_csv, outdir) -> list[Path]:
    """Pair-share scatter figures from a records CSV file.

    Produces the squared and unsquared distribution scatters (sum of the
    pair measure against one pair's share) and, when the CSV carries
    correlation columns, the classical-correlation-vs-EF-sum scatter.
    """
    plt = _pyplot()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    data = np.genfromtxt(records_csv, delimiter=",", names=True)
    if data.ndim == 0:
        data = data.reshape(1)
    paths = []

    fig, axes = plt.subplots(1, 2, figsize=(8.0, 3.4))
    _scatter_panel(
        axes[0], data["c12"] ** 2 + data["c13"] ** 2, data["c12"] ** 2,
        "C12^2 + C13^2", "C12^2",
    )
    _scatter_panel(
        axes[1], data["e12"] ** 2 + data["e13"] ** 2, data["e12"] ** 2,
        "E12^2 + E13^2", "E12^2",
    )
    fig.tight_layout()
    path = outdir / "scatter_pair_share_squared.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    paths.append(path)

    fig, axes = plt.subplots(1, 2, figsize=(8.0, 3.4))
    _scatter_panel(axes[0], data["c_sum"], data["c12"], "C12 + C13", "C12")
    _scatter_panel(axes[1], data["e_sum"], data["e12"], "E12 + E13", "E12")
    fig.tight_layout()
    path = outdir / "scatter_pair_share_linear.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    paths.append(path)

    if "j_sum" in (data.dtype.names or ()):
        fig, ax = plt.subplots(figsize=(5.0, 3.4))
        _scatter_panel(ax, data["e_sum"], data["j_sum"], "E12 + E13", "J12 + J13")
        fig.tight_layout()
        path = outdir / "scatter_classical_vs_ef.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths
