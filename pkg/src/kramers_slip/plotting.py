"""Figure rendering for the CLI report path.

Figures are written to files only; no interactive backend is ever touched.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_profile(
    x: np.ndarray,
    U: np.ndarray,
    q: float,
    alpha: float,
    out_path: str,
) -> None:
    """Line plot of the velocity profile with its linear asymptote."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(x, U, lw=1.6, label="U(x)/G_v")
    slip = U[-1] - x[-1] if len(x) > 1 else U[0]
    ax.plot(x, slip + x, lw=1.0, ls="--", color="gray", label="slip asymptote")
    ax.set_xlabel("x (mean free paths)")
    ax.set_ylabel("U / G_v")
    ax.set_title(f"Half-space velocity profile, q={q:g}, alpha={alpha:g}")
    ax.legend(frameon=False)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def render_convergence(
    orders: np.ndarray,
    slips: np.ndarray,
    reference: float,
    q: float,
    out_path: str,
) -> None:
    """Semilog plot of |U_sl(N) - reference| against truncation order."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    err = np.abs(slips - reference)
    ax.semilogy(orders, np.maximum(err, 1e-16), marker="o", lw=1.4)
    ax.set_xlabel("truncation order N")
    ax.set_ylabel("|U_sl(N) - reference|")
    ax.set_title(f"Series convergence, q={q:g}")
    ax.grid(alpha=0.3, which="both")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
