"""Image I/O and the geometric transforms used by the codec.

A pixel grid is a ``uint8`` array of shape ``(height, width, channels)``
with ``channels`` equal to 1 or 3 (R, G, B order). Blocks are returned as a
single ``(n_blocks, b, b)`` array in row-major block order.
"""

from __future__ import annotations

import os
import re
import struct
from pathlib import Path
from typing import BinaryIO, Union

import numpy as np

from .errors import (
    GeometryError,
    ImageFormatError,
    MalformedHeaderError,
    TruncatedPayloadError,
    UnsupportedBitDepthError,
)

Source = Union[bytes, bytearray, memoryview, str, os.PathLike, BinaryIO]

_PNM_HEADER = re.compile(rb"(P[56])((?:\s+|#[^\n]*\n)+)")
_PNM_TOKEN = re.compile(rb"(?:\s|#[^\n]*\n)*(\d+)")


def as_grid(arr) -> np.ndarray:
    """Validate ``arr`` and return it as a 3-D ``uint8`` pixel grid."""
    a = np.asarray(arr)
    if a.ndim == 2:
        a = a[:, :, None]
    if a.ndim != 3 or a.shape[2] not in (1, 3):
        raise GeometryError(f"expected (h, w), (h, w, 1) or (h, w, 3), got shape {a.shape}")
    if a.shape[0] == 0 or a.shape[1] == 0:
        raise GeometryError("empty image")
    if a.dtype != np.uint8:
        if a.size and (a.min() < 0 or a.max() > 255):
            raise GeometryError("samples must lie in [0, 255]")
        a = a.astype(np.uint8)
    return a


def _read_source(source: Source) -> bytes:
    if isinstance(source, (bytes, bytearray, memoryview)):
        return bytes(source)
    if isinstance(source, (str, os.PathLike)):
        return Path(source).read_bytes()
    return source.read()


def load_image(source: Source, fmt: str | None = None) -> np.ndarray:
    """Decode an uncompressed 24-bit BMP or a binary PPM/PGM.

    ``fmt`` is ``"bmp"``, ``"ppm"`` or ``"pgm"``; when omitted it is sniffed
    from the leading magic bytes.
    """
    data = _read_source(source)
    if fmt is None:
        if data[:2] == b"BM":
            fmt = "bmp"
        elif data[:2] in (b"P5", b"P6"):
            fmt = "pnm"
        else:
            raise MalformedHeaderError("unrecognised image signature")
    fmt = fmt.lower()
    if fmt == "bmp":
        return _load_bmp(data)
    if fmt in ("ppm", "pgm", "pnm"):
        return _load_pnm(data)
    raise ImageFormatError(f"unsupported format {fmt!r}")


def _load_pnm(data: bytes) -> np.ndarray:
    m = _PNM_HEADER.match(data)
    if not m:
        raise MalformedHeaderError("missing P5/P6 magic")
    channels = 3 if m.group(1) == b"P6" else 1
    pos = m.end(1)
    values = []
    for _ in range(3):
        t = _PNM_TOKEN.match(data, pos)
        if not t:
            raise MalformedHeaderError("bad PNM header field")
        values.append(int(t.group(1)))
        pos = t.end()
    width, height, maxval = values
    if pos >= len(data) or data[pos : pos + 1] not in (b" ", b"\t", b"\n", b"\r"):
        raise MalformedHeaderError("PNM header must end with one whitespace byte")
    pos += 1
    if width == 0 or height == 0:
        raise MalformedHeaderError("zero image dimension")
    if maxval != 255:
        raise UnsupportedBitDepthError(f"maxval {maxval} not supported (need 255)")
    n = width * height * channels
    payload = data[pos : pos + n]
    if len(payload) < n:
        raise TruncatedPayloadError(f"expected {n} sample bytes, got {len(payload)}")
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width, channels).copy()


def _load_bmp(data: bytes) -> np.ndarray:
    if len(data) < 26 or data[:2] != b"BM":
        raise MalformedHeaderError("BMP file header too short or bad signature")
    (offset,) = struct.unpack_from("<I", data, 10)
    (dib_size,) = struct.unpack_from("<I", data, 14)
    if dib_size < 40 or len(data) < 14 + 40:
        raise MalformedHeaderError(f"unsupported DIB header size {dib_size}")
    width, height, planes, bpp, compression = struct.unpack_from("<iiHHI", data, 18)
    if planes != 1 or width <= 0 or height == 0:
        raise MalformedHeaderError("invalid BMP geometry")
    if bpp != 24:
        raise UnsupportedBitDepthError(f"{bpp}-bit BMP not supported (need 24)")
    if compression != 0:
        raise ImageFormatError(f"compressed BMP (method {compression}) not supported")
    top_down = height < 0
    height = abs(height)
    stride = (width * 3 + 3) & ~3
    end = offset + stride * height
    if offset < 54 or len(data) < end:
        raise TruncatedPayloadError(f"pixel array needs {end} bytes, file has {len(data)}")
    rows = np.frombuffer(data, dtype=np.uint8, count=stride * height, offset=offset)
    rows = rows.reshape(height, stride)[:, : width * 3].reshape(height, width, 3)
    if not top_down:
        rows = rows[::-1]
    return rows[:, :, ::-1].copy()


def encode_image(grid, fmt: str) -> bytes:
    """Serialize a pixel grid as ``bmp``, ``ppm`` or ``pgm`` bytes."""
    g = as_grid(grid)
    h, w, c = g.shape
    fmt = fmt.lower()
    if fmt in ("ppm", "pgm", "pnm"):
        if fmt == "ppm" and c == 1:
            g = np.repeat(g, 3, axis=2)
        elif fmt == "pgm" and c == 3:
            raise GeometryError("PGM output needs a single-channel grid")
        magic = b"P6" if g.shape[2] == 3 else b"P5"
        return b"%s\n%d %d\n255\n" % (magic, w, h) + g.tobytes()
    if fmt == "bmp":
        if c == 1:
            g = np.repeat(g, 3, axis=2)
        stride = (w * 3 + 3) & ~3
        body = np.zeros((h, stride), dtype=np.uint8)
        body[:, : w * 3] = g[::-1, :, ::-1].reshape(h, w * 3)
        size = 54 + body.size
        head = struct.pack("<2sIHHI", b"BM", size, 0, 0, 54)
        dib = struct.pack("<IiiHHIIiiII", 40, w, h, 1, 24, 0, body.size, 2835, 2835, 0, 0)
        return head + dib + body.tobytes()
    raise ImageFormatError(f"unsupported format {fmt!r}")


def save_image(grid, path: str | os.PathLike) -> None:
    """Write ``grid`` to ``path``; the format follows the file extension."""
    fmt = Path(path).suffix.lstrip(".").lower()
    Path(path).write_bytes(encode_image(grid, fmt))


def split_channels(img) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    g = as_grid(img)
    if g.shape[2] != 3:
        raise GeometryError(f"split_channels needs 3 channels, got {g.shape[2]}")
    return g[:, :, 0:1].copy(), g[:, :, 1:2].copy(), g[:, :, 2:3].copy()


def merge_channels(channels) -> np.ndarray:
    parts = [as_grid(c) for c in channels]
    if any(p.shape[2] != 1 for p in parts):
        raise GeometryError("merge_channels expects single-channel grids")
    if len({p.shape for p in parts}) != 1:
        raise GeometryError("channel grids differ in size")
    return np.concatenate(parts, axis=2)


def _plane(chan) -> np.ndarray:
    a = np.asarray(chan)
    if a.ndim == 3:
        if a.shape[2] != 1:
            raise GeometryError("expected a single-channel grid")
        a = a[:, :, 0]
    if a.ndim != 2:
        raise GeometryError(f"expected a 2-D channel, got shape {a.shape}")
    return a


def partition_blocks(chan, b: int) -> np.ndarray:
    """Tile a single channel into ``b x b`` blocks in row-major block order."""
    a = _plane(chan)
    h, w = a.shape
    if b < 1 or h % b or w % b:
        raise GeometryError(f"block size {b} does not divide {w}x{h}")
    return a.reshape(h // b, b, w // b, b).swapaxes(1, 2).reshape(-1, b, b).copy()


def merge_blocks(blocks, width: int, height: int) -> np.ndarray:
    """Inverse of :func:`partition_blocks`; returns an ``(h, w, 1)`` grid."""
    blk = np.asarray(blocks)
    if blk.ndim != 3 or blk.shape[1] != blk.shape[2]:
        raise GeometryError(f"blocks must have shape (n, b, b), got {blk.shape}")
    n, b, _ = blk.shape
    if b == 0 or width % b or height % b or n * b * b != width * height:
        raise GeometryError(f"{n} blocks of side {b} cannot tile {width}x{height}")
    rows, cols = height // b, width // b
    plane = blk.reshape(rows, cols, b, b).swapaxes(1, 2).reshape(height, width)
    return plane[:, :, None].copy()
