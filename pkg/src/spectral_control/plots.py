"""Figure rendering for the CLI report path.

Each function writes one PNG next to the delimited output it illustrates.
matplotlib is imported lazily so data-only runs never pay for it.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .control import Certificate, GramianReport, SteeringPlan
from .evolution import DiagonalSystem
from .orthopoly import LAGUERRE, PolyFamily1D, eval_table


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_basis(families: list[PolyFamily1D], max_degree: int, path) -> Path:
    plt = _pyplot()
    fig, axes = plt.subplots(
        1, len(families), figsize=(5.0 * len(families), 3.4), squeeze=False
    )
    degrees = range(min(max_degree, 6) + 1)
    for i, (fam, ax) in enumerate(zip(families, axes[0])):
        if fam.kind == LAGUERRE:
            x = np.linspace(0.0, 4.0 * (max_degree + 1), 400)
        else:
            x = np.linspace(-1.0, 1.0, 400)
        table = eval_table(fam, max(degrees), x)
        for n in degrees:
            ax.plot(x, table[n], lw=1.0, label=f"n={n}")
        ax.set_xlabel(f"x{i + 1}")
        ax.set_ylabel("p_n(x)")
        title = f"{fam.kind} alpha={fam.alpha:g}"
        if fam.beta is not None:
            title += f" beta={fam.beta:g}"
        ax.set_title(title, fontsize=9)
        ax.grid(alpha=0.3)
        ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_coefficients(system: DiagonalSystem, path, tau: float | None = None) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 3.4))
    mags = np.abs(system.c)
    floor = max(mags.max(), 1e-300) * 1e-18
    ax.semilogy(np.arange(system.size), np.maximum(mags, floor), "o", ms=3.5)
    if tau is not None:
        ax.axhline(tau, color="crimson", lw=1.0, ls="--", label=f"tau={tau:g}")
        ax.legend(fontsize=8)
    ax.set_xlabel("mode")
    ax.set_ylabel("|c|")
    ax.set_title("actuation coefficients", fontsize=9)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_certificate(system: DiagonalSystem, certificate: Certificate, path) -> Path:
    return plot_coefficients(system, path, tau=certificate.threshold)


def plot_control(plan: SteeringPlan, path, max_modes: int = 6) -> Path:
    plt = _pyplot()
    control = plan.control
    peak = np.max(np.abs(control.values), axis=0)
    shown = np.argsort(peak)[::-1][:max_modes]
    fig, ax = plt.subplots(figsize=(6.0, 3.4))
    for j in sorted(int(v) for v in shown):
        ax.step(
            control.grid,
            np.append(control.values[:, j], control.values[-1, j]),
            where="post",
            lw=1.2,
            label=f"mode {j}",
        )
    ax.set_xlabel("t")
    ax.set_ylabel("u(t)")
    ax.set_title(f"steering control, energy={plan.control_energy:g}", fontsize=9)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_gramian(report: GramianReport, path) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 3.4))
    sigma = report.singular_values
    floor = max(float(sigma[0]), 1e-300) * 1e-18
    ax.semilogy(np.arange(len(sigma)), np.maximum(sigma, floor), "o-", ms=3.5, lw=0.8)
    ax.set_xlabel("rank")
    ax.set_ylabel("singular value")
    ax.set_title(
        f"control-operator spectrum, t1={report.t1:g}, "
        f"decay ratio={report.decay_ratio:.3g}",
        fontsize=9,
    )
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)
