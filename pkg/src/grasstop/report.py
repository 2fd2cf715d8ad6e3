"""Figure rendering for the CLI reports.

Every command that writes machine output to a directory also drops a
PNG summarizing the run: residual bars for verify, Betti bars for
poincare, value/gradient traces for flow, and the Hessian spectrum for
index.  Rendering is headless (Agg) and timestamp-free so reruns are
reproducible.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save_verify_figure",
    "save_poincare_figure",
    "save_flow_figure",
    "save_index_figure",
]

_FLOOR = 1e-17


def save_verify_figure(checks: list[dict], path) -> None:
    """Horizontal residual bars on a log axis, tolerance ticks overlaid."""
    names = [c["name"] for c in checks]
    residuals = [max(abs(c["max_residual"]), _FLOOR) for c in checks]
    tols = [c["tol"] for c in checks]
    colors = ["#2a7e43" if c["pass"] else "#b3342c" for c in checks]
    height = max(2.0, 0.42 * len(checks) + 1.2)
    fig, ax = plt.subplots(figsize=(8.0, height))
    y = np.arange(len(checks))
    ax.barh(y, residuals, color=colors, alpha=0.85)
    ax.scatter(tols, y, marker="|", s=220, color="black", label="tolerance", zorder=3)
    ax.set_xscale("log")
    ax.set_yticks(y)
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("max residual")
    ax.set_title("invariant residuals vs tolerances")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_poincare_figure(coeffs: list[int], title: str, path) -> None:
    """Betti numbers by degree as a bar chart."""
    degrees = np.arange(len(coeffs))
    fig, ax = plt.subplots(figsize=(7.0, 3.4))
    ax.bar(degrees, coeffs, width=0.8, color="#31629e")
    ax.set_xlabel("degree")
    ax.set_ylabel("Betti number")
    ax.set_title(title)
    ax.set_xticks(degrees[:: max(1, len(degrees) // 16)])
    if coeffs:
        ax.set_yticks(range(0, max(coeffs) + 1))
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_flow_figure(runs: list[dict], path) -> None:
    """Per-run f(t) traces and gradient-norm decay (log scale)."""
    fig, (ax_f, ax_g) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    for run in runs:
        label = f"run {run['run']}" if len(runs) > 1 else None
        ax_f.plot(run["f_history"], lw=1.2, label=label)
        grads = np.maximum(np.asarray(run["grad_history"], dtype=float), _FLOOR)
        ax_g.plot(grads, lw=1.2)
    ax_f.set_xlabel("iteration")
    ax_f.set_ylabel("f")
    ax_f.set_title("height along flow")
    ax_g.set_xlabel("iteration")
    ax_g.set_ylabel("|grad f|")
    ax_g.set_yscale("log")
    ax_g.set_title("gradient norm")
    if len(runs) > 1 and len(runs) <= 8:
        ax_f.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_index_figure(eigenvalues: list[float], zero_threshold: float, path) -> None:
    """Hessian spectrum as a stem plot with the zero band shaded."""
    eigs = np.asarray(eigenvalues, dtype=float)
    fig, ax = plt.subplots(figsize=(7.0, 3.4))
    ax.axhspan(-zero_threshold, zero_threshold, color="#d9c87a", alpha=0.5,
               label="zero band")
    if eigs.size:
        ax.stem(np.arange(eigs.size), eigs, basefmt="k-")
    ax.set_xlabel("eigenvalue rank")
    ax.set_ylabel("eigenvalue")
    ax.set_title("Hessian spectrum at the critical point")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
