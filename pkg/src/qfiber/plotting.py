"""Figure rendering for run reports.  All figures go straight to files."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_two_mode_figure(traj, path: str, title: str) -> str:
    """Mean photon numbers and low-order joint probabilities along the fiber."""
    z = np.array(traj.z_samples)
    n_s = np.array([r.number_means[0] for r in traj.records])
    n_i = np.array([r.number_means[1] for r in traj.records])

    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    ax0.plot(z, n_s, label=r"$\langle n_s\rangle$")
    ax0.plot(z, n_i, label=r"$\langle n_i\rangle$", linestyle="--")
    ax0.set_xlabel("z (km)")
    ax0.set_ylabel("mean photon number")
    ax0.legend(frameon=False)

    probs = np.array([r.joint_probs for r in traj.records])
    for (a, b) in ((0, 0), (1, 0), (0, 1), (1, 1)):
        if a < probs.shape[1] and b < probs.shape[2]:
            ax1.plot(z, probs[:, a, b], label=f"P({a},{b})")
    ax1.set_xlabel("z (km)")
    ax1.set_ylabel("joint probability")
    ax1.legend(frameon=False, fontsize=8)

    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_multimode_figure(traj, path: str, title: str) -> str:
    """Mean photon number per quantum mode along the fiber."""
    z = np.array(traj.z_samples)
    means = np.array([r.number_means for r in traj.records])

    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    for k in range(means.shape[1]):
        ax.plot(z, means[:, k], label=f"mode {k}")
    ax.set_xlabel("z (km)")
    ax.set_ylabel("mean photon number")
    ax.legend(frameon=False, fontsize=8)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_semiclassical_figure(z, powers, path: str, title: str) -> str:
    """Per-mode optical power along the fiber for a mean-field run."""
    z = np.asarray(z)
    powers = np.asarray(powers)

    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    for k in range(powers.shape[1]):
        ax.plot(z, powers[:, k], label=f"mode {k}")
    ax.set_xlabel("z (km)")
    ax.set_ylabel("power (W)")
    ax.legend(frameon=False, fontsize=8)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
