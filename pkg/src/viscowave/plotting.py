"""Figure rendering for the CLI report paths.

All functions write a file and return the path; they never show a window.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_FRONT_STYLE = dict(color="0.4", linestyle="--", linewidth=1.0)


def render_eval_figure(omegas, columns: dict, path: str, title: str | None = None) -> str:
    """Four-panel summary of the frequency sweep written by `eval`."""
    omegas = np.asarray(omegas)
    fig, axes = plt.subplots(2, 2, figsize=(9.0, 6.5))

    ax = axes[0, 0]
    ax.loglog(omegas, columns["attenuation"], color="tab:blue")
    ax.set_ylabel("attenuation")

    ax = axes[0, 1]
    ax.loglog(omegas, columns["dispersion"], color="tab:orange")
    ax.set_ylabel("dispersion")

    ax = axes[1, 0]
    ax.semilogx(omegas, columns["phase_speed"], color="tab:green")
    ax.set_ylabel("phase speed")

    ax = axes[1, 1]
    ax.semilogx(omegas, columns["variable_exponent"], color="tab:red")
    ax.set_ylabel("growth exponent")

    for ax in axes.flat:
        ax.set_xlabel("angular frequency")
        ax.grid(True, which="both", alpha=0.25)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_snapshot_figure(positions, values, front: float, path: str,
                           title: str | None = None) -> str:
    """Wave-field snapshot with the nominal front position marked."""
    fig, ax = plt.subplots(figsize=(7.5, 4.5))
    ax.plot(positions, values, color="tab:blue", linewidth=1.5)
    ax.axvline(front, **_FRONT_STYLE)
    ax.annotate("front", xy=(front, ax.get_ylim()[1]), xytext=(3, -12),
                textcoords="offset points", color="0.4", fontsize=9)
    ax.set_xlabel("position")
    ax.set_ylabel("amplitude")
    ax.grid(True, alpha=0.25)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_relaxation_figure(times, values, path: str, title: str | None = None) -> str:
    """Relaxation modulus curve used by the cm-check report."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.semilogx(times, values, color="tab:blue")
    ax.axhline(0.0, color="0.6", linewidth=0.8)
    ax.set_xlabel("time")
    ax.set_ylabel("relaxation modulus")
    ax.grid(True, which="both", alpha=0.25)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_fit_figure(omegas, data, model_values, atoms, path: str,
                      title: str | None = None) -> str:
    """Fitted attenuation curve over the samples, plus the atom spectrum."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.5, 4.2))
    ax1.loglog(omegas, data, "o", ms=3.5, color="0.3", label="samples")
    ax1.loglog(omegas, model_values, color="tab:red", label="fit")
    ax1.set_xlabel("angular frequency")
    ax1.set_ylabel("attenuation")
    ax1.legend()
    ax1.grid(True, which="both", alpha=0.25)

    if atoms:
        locs = [r for r, _ in atoms]
        wts = [c for _, c in atoms]
        ax2.stem(locs, wts)
        ax2.set_xscale("log")
    ax2.set_xlabel("spectral location")
    ax2.set_ylabel("weight")
    ax2.grid(True, which="both", alpha=0.25)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
