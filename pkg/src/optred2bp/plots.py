"""Figure rendering for simulation reports.

All functions write PNG files next to the delimited trajectory output;
they use the non-interactive backend and never open windows.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def plot_full_trajectory(times: np.ndarray, states: np.ndarray, path) -> None:
    """Body paths projected on the x-y and x-z planes."""
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    q1, q2 = states[:, 0:3], states[:, 3:6]
    for ax, (i, j), title in zip(axes, [(0, 1), (0, 2)], ["x-y plane", "x-z plane"]):
        ax.plot(q1[:, i], q1[:, j], "-", lw=1.0, label="body 1")
        ax.plot(q2[:, i], q2[:, j], "-", lw=1.0, label="body 2")
        ax.plot([q1[0, i], q2[0, i]], [q1[0, j], q2[0, j]], "k.", ms=6)
        ax.set_title(title)
        ax.set_aspect("equal", adjustable="datalim")
        ax.grid(alpha=0.3)
    axes[0].legend(loc="best", fontsize=8)
    fig.suptitle(f"positions, t in [{times[0]:.3g}, {times[-1]:.3g}]")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_reduced_trajectory(
    times: np.ndarray, coords: np.ndarray, names, path
) -> None:
    """Each reduced coordinate against time."""
    n = coords.shape[1]
    if n == 0:
        return
    fig, axes = plt.subplots(n, 1, figsize=(7, 1.8 * n), sharex=True, squeeze=False)
    for k in range(n):
        ax = axes[k, 0]
        ax.plot(times, coords[:, k], lw=1.0)
        ax.set_ylabel(names[k])
        ax.grid(alpha=0.3)
    axes[-1, 0].set_xlabel("t")
    fig.suptitle("reduced coordinates")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_conservation(
    times: np.ndarray, dH: np.ndarray, dJ: np.ndarray, path
) -> None:
    """Energy and momentum drift along the trajectory."""
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.plot(times, np.abs(dH), lw=1.0, label="|H - H(0)|")
    ax.plot(times, np.abs(dJ), lw=1.0, label="max |J - J(0)|")
    ax.set_yscale("symlog", linthresh=1e-16)
    ax.set_xlabel("t")
    ax.grid(alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.suptitle("conservation drift")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
