"""Lossy image codec built on per-block k-means and closed frequent sequence mining."""

__version__ = "0.1.0"

from .codec import (
    ChannelPayload,
    CodecParams,
    CompressedImage,
    compress,
    decompress,
    deserialize,
    serialize,
    size_breakdown,
)
from .pixel_grid import load_image, save_image
from .quality_metrics import compression_ratio, evaluate, psnr, ssim

__all__ = [
    "ChannelPayload",
    "CodecParams",
    "CompressedImage",
    "compress",
    "compression_ratio",
    "decompress",
    "deserialize",
    "evaluate",
    "load_image",
    "psnr",
    "save_image",
    "serialize",
    "size_breakdown",
    "ssim",
]
