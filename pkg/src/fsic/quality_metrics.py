"""Compression ratio, MSE/PSNR and SSIM."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import GeometryError
from .pixel_grid import as_grid

KB = 1000
SSIM_WINDOW = 8
C1 = (0.01 * 255) ** 2
C2 = (0.03 * 255) ** 2


def compression_ratio(uncompressed: float, compressed: float) -> float:
    if compressed <= 0:
        raise ValueError("compressed size must be positive")
    return uncompressed / compressed


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    x, y = as_grid(a), as_grid(b)
    if x.shape != y.shape:
        raise GeometryError(f"shape mismatch {x.shape} vs {y.shape}")
    return x.astype(np.float64), y.astype(np.float64)


def channel_mse(a, b) -> list[float]:
    x, y = _pair(a, b)
    d = (x - y) ** 2
    return [float(d[:, :, i].mean()) for i in range(d.shape[2])]


def mse(a, b) -> float:
    x, y = _pair(a, b)
    return float(((x - y) ** 2).mean())


def psnr_from_mse(err: float) -> float:
    """PSNR in dB; ``inf`` when the error is zero."""
    if err == 0:
        return math.inf
    return 10.0 * math.log10(255.0**2 / err)


def psnr(a, b) -> float:
    return psnr_from_mse(mse(a, b))


def ssim(a, b, window: int = SSIM_WINDOW) -> float:
    """Mean SSIM over all ``window x window`` windows (stride 1) and channels.

    Window statistics use population (biased) variances.
    """
    x, y = _pair(a, b)
    h, w, c = x.shape
    if h < window or w < window:
        raise GeometryError(f"image {w}x{h} smaller than the {window}x{window} SSIM window")
    scores = []
    for i in range(c):
        wx = sliding_window_view(x[:, :, i], (window, window))
        wy = sliding_window_view(y[:, :, i], (window, window))
        mx = wx.mean(axis=(-2, -1))
        my = wy.mean(axis=(-2, -1))
        vx = ((wx - mx[..., None, None]) ** 2).mean(axis=(-2, -1))
        vy = ((wy - my[..., None, None]) ** 2).mean(axis=(-2, -1))
        cov = ((wx - mx[..., None, None]) * (wy - my[..., None, None])).mean(axis=(-2, -1))
        num = (2 * mx * my + C1) * (2 * cov + C2)
        den = (mx**2 + my**2 + C1) * (vx + vy + C2)
        scores.append(float((num / den).mean()))
    return float(np.mean(scores))


@dataclass
class MetricsReport:
    uncompressed_bytes: int
    compressed_bytes: int
    cr: float
    channel_mse: list[float]
    mse: float
    psnr_db: float
    ssim: float

    @property
    def lossless(self) -> bool:
        return math.isinf(self.psnr_db)

    def format(self) -> str:
        psnr_txt = "inf" if self.lossless else f"{self.psnr_db:.2f} dB"
        return (
            f"uncompressed {self.uncompressed_bytes / KB:.1f} kB, "
            f"compressed {self.compressed_bytes / KB:.2f} kB, Cr {self.cr:.3f}, "
            f"MSE {self.mse:.3f}, PSNR {psnr_txt}, SSIM {self.ssim:.4f}"
        )


def evaluate(original, reconstructed, compressed_bytes: int) -> MetricsReport:
    """Full report for one compression run. Uncompressed size is the raw sample count."""
    g = as_grid(original)
    raw = g.size
    per = channel_mse(g, reconstructed)
    err = mse(g, reconstructed)
    return MetricsReport(
        uncompressed_bytes=raw,
        compressed_bytes=compressed_bytes,
        cr=compression_ratio(raw, compressed_bytes),
        channel_mse=per,
        mse=err,
        psnr_db=psnr_from_mse(err),
        ssim=ssim(g, reconstructed),
    )
