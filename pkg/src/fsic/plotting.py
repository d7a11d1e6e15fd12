"""Figures for sweep reports."""

from __future__ import annotations

import math
import os
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .sweep import SweepRow  # noqa: E402

AXIS_LABELS = {"b": "block size $b$", "k": "clusters $k$", "psi": r"minimum support $\psi$"}


def _xvalues(rows: Sequence[SweepRow]) -> list[float]:
    return [float(r.value.rstrip("%")) for r in rows]


def plot_sweep(rows: Sequence[SweepRow], path: str | os.PathLike, title: str | None = None) -> None:
    """Compression ratio and PSNR against the swept parameter, side by side."""
    good = [r for r in rows if r.ok]
    if not good:
        raise ValueError("no successful sweep points to plot")
    axis = good[0].param
    x = _xvalues(good)
    xlabel = AXIS_LABELS.get(axis, axis)
    if axis == "psi" and good[0].value.endswith("%"):
        xlabel += " (%)"

    fig, (ax_cr, ax_q) = plt.subplots(1, 2, figsize=(8, 3.2), constrained_layout=True)
    ax_cr.plot(x, [r.cr for r in good], "o-", color="C0")
    ax_cr.set_xlabel(xlabel)
    ax_cr.set_ylabel("compression ratio $C_r$")
    ax_cr.grid(alpha=0.3)

    psnr = [r.psnr_db if math.isfinite(r.psnr_db) else float("nan") for r in good]
    ax_q.plot(x, psnr, "s-", color="C1")
    ax_q.set_xlabel(xlabel)
    ax_q.set_ylabel("PSNR (dB)")
    ax_q.grid(alpha=0.3)
    ax_s = ax_q.twinx()
    ax_s.plot(x, [r.ssim for r in good], "^--", color="C2")
    ax_s.set_ylabel("SSIM", color="C2")

    if axis in ("b", "k"):
        ax_cr.set_xscale("log", base=2)
        ax_q.set_xscale("log", base=2)
    if title:
        fig.suptitle(title)
    fig.savefig(path, dpi=120)
    plt.close(fig)
