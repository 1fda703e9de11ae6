"""Figures for the report path of the CLI (`--plot PATH`)."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def plot_spectrum(eigenvalues: Sequence[complex], path: str, title: str = "") -> str:
    ev = np.asarray(eigenvalues, dtype=complex)
    fig, ax = plt.subplots(figsize=(5, 5))
    t = np.linspace(0, 2 * np.pi, 400)
    ax.plot(np.cos(t), np.sin(t), lw=0.6, color="0.6")
    ax.scatter(ev.real, ev.imag, s=14)
    ax.axhline(0, lw=0.4, color="0.8")
    ax.axvline(0, lw=0.4, color="0.8")
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(title or "truncated transfer operator spectrum")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_zeta_sweep(s_values: Sequence[complex], z_values: Sequence[complex], path: str, title: str = "") -> str:
    s = np.asarray(s_values, dtype=complex)
    z = np.asarray(z_values, dtype=complex)
    vary_imag = np.ptp(s.imag) > np.ptp(s.real)
    x = s.imag if vary_imag else s.real
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(x, np.abs(z), marker=".")
    ax.set_yscale("log")
    ax.set_xlabel("Im s" if vary_imag else "Re s")
    ax.set_ylabel("|Z(s)|")
    ax.set_title(title or "det(1 - L_s^2)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
