"""Figure rendering for the report-emitting commands.

Figures are written next to the delimited output with the same stem. All
rendering uses the non-interactive backend so the CLI works headless.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def spectrum_figure(rows: list[dict], path: str, coupling: float, kappa: float) -> str:
    ms = np.array([r["m"] for r in rows])
    computed = np.array([r["computed"] for r in rows])
    residuals = np.array([r["residual"] for r in rows])

    fig, (ax, ax_res) = plt.subplots(
        2, 1, figsize=(7.0, 6.0), sharex=True, gridspec_kw={"height_ratios": [3, 1]}
    )
    grid = np.linspace(0, ms.max(), 200)
    envelope = coupling * np.sqrt(kappa * grid + 1.0)
    ax.plot(grid, envelope, "-", color="0.65", lw=1.0, label="predicted envelope")
    ax.plot(grid, -envelope, "-", color="0.65", lw=1.0)
    ax.plot(ms, computed, ".", ms=4, color="C0", label="computed")
    ax.set_ylabel("eigenvalue")
    ax.legend(loc="upper left", frameon=False)
    ax.set_title("Dirac spectrum vs closed form")

    ax_res.semilogy(ms, np.maximum(residuals, 1e-18), ".", ms=4, color="C3")
    ax_res.set_xlabel("level m")
    ax_res.set_ylabel("residual")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def sweep_figure(rows: list[dict], path: str) -> str:
    zs = [r["z"] for r in rows]
    vals = np.array([r["value"] for r in rows], dtype=float)
    res = np.array([z.real for z in zs])
    ims = np.array([z.imag for z in zs])
    ok = ~np.isnan(vals)

    fig, ax = plt.subplots(figsize=(6.5, 5.0))
    if len(set(np.round(ims, 12))) == 1:
        order = np.argsort(res[ok])
        ax.plot(res[ok][order], vals[ok][order], "o-", ms=4, color="C0")
        ax.set_xlabel("Re z")
        ax.set_ylabel("distance")
    else:
        sc = ax.scatter(res[ok], ims[ok], c=vals[ok], s=60, cmap="viridis")
        fig.colorbar(sc, ax=ax, label="distance")
        ax.set_xlabel("Re z")
        ax.set_ylabel("Im z")
        ax.set_aspect("equal", adjustable="box")
    bad = np.where(~ok)[0]
    if bad.size:
        ax.plot(res[bad], ims[bad] if len(set(np.round(ims, 12))) > 1 else np.zeros(bad.size),
                "x", ms=8, color="C3", label="restriction failed")
        ax.legend(frameon=False)
    ax.set_title("transverse distance across the plane")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
