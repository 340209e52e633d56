"""Figures written next to the CSV plot data (Agg backend, PNG)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_tan_curve(alpha, lhs, rhs, roots, path: Path) -> Path:
    """Both sides of the characteristic equation, with the roots marked."""
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(alpha, lhs, lw=1.0, label=r"$\tan(\pi\alpha)$")
    ax.plot(alpha, rhs, lw=1.5, label=r"$\sqrt{\pi/2}\,\alpha/(\alpha^2-1/4)$")
    roots = [a for a in roots if alpha[0] <= a <= alpha[-1]]
    if roots:
        r = np.asarray(roots)
        ax.plot(r, np.sqrt(np.pi / 2) * r / (r * r - 0.25), "ko", ms=4, label=r"$\alpha_k$")
    ax.set_ylim(-4, 4)
    ax.axhline(0.0, color="0.7", lw=0.5)
    ax.set_xlabel(r"$\alpha$")
    ax.legend(loc="lower right", fontsize=8)
    return _save(fig, path)


def plot_ladder(rhos, S, sigma, ratio, path: Path, title: str = "") -> Path:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax1.loglog(rhos, S, "o-", ms=3, label=r"$S_\rho$")
    sg = np.asarray(sigma, dtype=float)
    if np.any(sg > 0):
        ax1.loglog(np.asarray(rhos)[sg > 0], sg[sg > 0], "s-", ms=3, label=r"$\sigma_\rho$")
    ax1.set_xlabel(r"$\rho$")
    ax1.legend(fontsize=8)
    ax2.semilogx(rhos, ratio, "o-", ms=3)
    ax2.set_xlabel(r"$\rho$")
    ax2.set_ylabel(r"$\sigma_\rho / (\rho^{-1/2} S_\rho)$")
    if title:
        fig.suptitle(title, fontsize=9)
    return _save(fig, path)


def plot_residuals(t, curvature, jump, residual, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6, 3.6))
    ax.plot(t, curvature, "o-", ms=3, label="curvature")
    ax.plot(t, jump, "s-", ms=3, label="gradient jump")
    ax.plot(t, residual, "^-", ms=3, label="residual")
    ax.set_xlabel("t")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_boundary_fit(phi, data, fitted, path: Path) -> Path:
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6, 4.5), sharex=True)
    ax1.plot(phi, data, lw=2, color="0.6", label="data")
    ax1.plot(phi, fitted, lw=1, color="k", label="solution trace")
    ax1.legend(fontsize=8)
    ax2.plot(phi, np.asarray(fitted) - np.asarray(data), lw=1)
    ax2.set_xlabel(r"$\phi$")
    ax2.set_ylabel("misfit")
    return _save(fig, path)
