"""Compressor, decompressor and the ``.fsic`` container.

Container layout, little-endian::

    "FSIC"  u8 version  u16 width  u16 height  u8 channels
    u16 block_size  u16 k  u32 min_support
    per channel:
        n_b * k bytes of cluster means (block-major)
        u32 pattern count
        per pattern: u16 length, length * u8 symbols, u8 code length, u32 psi_mod
        u64 bit count, ceil(bits / 8) payload bytes, u32 CRC-32 of payload

A code length of 0 marks a pattern whose modified support is zero; it is
kept for inspection but has no codeword.
"""

from __future__ import annotations

import math
import struct
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .block_cluster import cluster_all_blocks, reconstruct_blocks
from .entropy_code import BitStream, CodeTable, build_code_table, decode, encode
from .errors import (
    BadMagicError,
    ChecksumError,
    ContainerError,
    GeometryError,
    ParameterError,
    TruncatedContainerError,
    VersionMismatchError,
)
from .pixel_grid import as_grid, merge_blocks, merge_channels, partition_blocks
from .seq_mine import Symbols, mine_closed_frequent
from .support_adjust import compute_modified_support, tokens_in_order

MAGIC = b"FSIC"
VERSION = 1
_HEADER = struct.Struct("<4sBHHBHHI")


def resolve_support(support: int | str, rows: int) -> int:
    """Turn ``"58%"`` or ``2`` into an absolute row count (percent rounds up)."""
    if isinstance(support, str):
        s = support.strip()
        if s.endswith("%"):
            pct = Fraction(s[:-1])
            if not 0 < pct <= 100:
                raise ParameterError(f"support percent must be in (0, 100], got {s}")
            return max(1, math.ceil(pct * rows / 100))
        support = int(s)
    if support < 1:
        raise ParameterError(f"support must be >= 1, got {support}")
    return int(support)


@dataclass(frozen=True)
class CodecParams:
    block_size: int
    clusters: int
    support: int | str

    def __post_init__(self):
        if self.block_size < 1 or self.block_size > 0xFFFF:
            raise ParameterError(f"block size must be in [1, 65535], got {self.block_size}")
        if not 1 <= self.clusters <= 256:
            raise ParameterError(f"k must be in [1, 256], got {self.clusters}")
        resolve_support(self.support, 1)


@dataclass(eq=False)
class ChannelPayload:
    means: np.ndarray  # (n_b, k) uint8
    patterns: list[tuple[Symbols, int, int]]  # (symbols, code length, psi_mod)
    stream: BitStream

    def code_table(self) -> CodeTable:
        return CodeTable({s: n for s, n, _ in self.patterns})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ChannelPayload)
            and np.array_equal(self.means, other.means)
            and self.patterns == other.patterns
            and self.stream == other.stream
        )


@dataclass(eq=False)
class CompressedImage:
    width: int
    height: int
    block_size: int
    clusters: int
    min_support: int
    channels: list[ChannelPayload] = field(default_factory=list)

    @property
    def n_blocks(self) -> int:
        return (self.width * self.height) // (self.block_size**2)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CompressedImage)
            and (self.width, self.height, self.block_size, self.clusters, self.min_support)
            == (other.width, other.height, other.block_size, other.clusters, other.min_support)
            and self.channels == other.channels
        )


def encode_identifiers(ident, means, psi: int, clusters: int | None = None) -> ChannelPayload:
    """Mine, parse and entropy-code one channel's identifier grid."""
    grid = np.asarray(ident, dtype=np.uint8)
    rows = [r.tobytes() for r in grid]
    mined = mine_closed_frequent(rows, psi, clusters)
    adjusted, parse = compute_modified_support(mined, rows)
    table = build_code_table(adjusted)
    stream = encode(tokens_in_order(parse), table)
    patterns = [(p.symbols, table.lengths.get(p.symbols, 0), p.psi_mod) for p in adjusted]
    return ChannelPayload(np.asarray(means, dtype=np.uint8), patterns, stream)


def _encode_job(args):
    return encode_identifiers(*args)


def compress(img, params: CodecParams, workers: int = 1, timings: dict | None = None) -> CompressedImage:
    """Compress a pixel grid; ``workers > 1`` fans blocks and channels out to processes.

    The output does not depend on ``workers``. When ``timings`` is given it
    receives per-phase wall-clock seconds.
    """
    g = as_grid(img)
    h, w, c = g.shape
    b, k = params.block_size, params.clusters
    if h % b or w % b:
        raise GeometryError(f"block size {b} does not divide {w}x{h}")
    if w > 0xFFFF or h > 0xFFFF:
        raise GeometryError("image dimensions exceed 65535")
    psi = resolve_support(params.support, h)
    timings = {} if timings is None else timings

    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    with pool or nullcontext():
        t0 = time.perf_counter()
        clustered = []
        for ch in range(c):
            tables, ident = cluster_all_blocks(
                partition_blocks(g[:, :, ch], b), k, w, h, executor=pool, chunks=workers
            )
            clustered.append((ident, np.array([t.means for t in tables], dtype=np.uint8)))
        t1 = time.perf_counter()
        jobs = [(ident, means, psi, k) for ident, means in clustered]
        if pool is not None and c > 1:
            payloads = list(pool.map(_encode_job, jobs))
        else:
            payloads = [_encode_job(j) for j in jobs]
        t2 = time.perf_counter()

    timings["cluster_s"] = t1 - t0
    timings["encode_s"] = t2 - t1
    return CompressedImage(w, h, b, k, psi, payloads)


def decode_channel(payload: ChannelPayload, width: int, height: int, block_size: int) -> np.ndarray:
    """Rebuild one channel as an ``(h, w)`` array."""
    ident = decode(payload.stream, payload.code_table(), width * height, width)
    tiles = partition_blocks(ident, block_size)
    if payload.means.shape[0] != tiles.shape[0]:
        raise ContainerError(f"{payload.means.shape[0]} cluster tables for {tiles.shape[0]} blocks")
    return merge_blocks(reconstruct_blocks(tiles, payload.means), width, height)[:, :, 0]


def decompress(c: CompressedImage) -> np.ndarray:
    planes = [decode_channel(p, c.width, c.height, c.block_size) for p in c.channels]
    if len(planes) == 1:
        return planes[0][:, :, None]
    return merge_channels([p[:, :, None] for p in planes])


# serialization

def serialize(c: CompressedImage) -> bytes:
    out = bytearray(
        _HEADER.pack(MAGIC, VERSION, c.width, c.height, len(c.channels), c.block_size, c.clusters, c.min_support)
    )
    for ch in c.channels:
        out += np.ascontiguousarray(ch.means, dtype=np.uint8).tobytes()
        out += struct.pack("<I", len(ch.patterns))
        for symbols, length, psi_mod in ch.patterns:
            out += struct.pack("<H", len(symbols)) + bytes(symbols)
            out += struct.pack("<BI", length, psi_mod)
        out += struct.pack("<Q", ch.stream.bit_count)
        out += ch.stream.data
        out += struct.pack("<I", zlib.crc32(ch.stream.data))
    return bytes(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedContainerError(f"need {n} bytes at offset {self.pos}, {len(self.data) - self.pos} left")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        s = struct.calcsize(fmt)
        return struct.unpack(fmt, self.take(s))


def deserialize(data: bytes) -> CompressedImage:
    if data[:4] != MAGIC:
        raise BadMagicError("not an FSIC container")
    r = _Reader(bytes(data))
    _, version, width, height, channels, b, k, psi = r.unpack(_HEADER.format)
    if version != VERSION:
        raise VersionMismatchError(f"container version {version}, expected {VERSION}")
    if b == 0 or k == 0 or width % b or height % b or channels not in (1, 3):
        raise ContainerError("inconsistent container header")
    n_b = (width * height) // (b * b)
    payloads = []
    for _ in range(channels):
        means = np.frombuffer(r.take(n_b * k), dtype=np.uint8).reshape(n_b, k).copy()
        (count,) = r.unpack("<I")
        patterns = []
        for _ in range(count):
            (n,) = r.unpack("<H")
            symbols = tuple(r.take(n))
            length, psi_mod = r.unpack("<BI")
            patterns.append((symbols, length, psi_mod))
        (bits,) = r.unpack("<Q")
        payload = r.take((bits + 7) // 8)
        (crc,) = r.unpack("<I")
        if zlib.crc32(payload) != crc:
            raise ChecksumError("payload CRC mismatch")
        payloads.append(ChannelPayload(means, patterns, BitStream(bits, payload)))
    if r.pos != len(r.data):
        raise ContainerError(f"{len(r.data) - r.pos} trailing bytes after container")
    return CompressedImage(width, height, b, k, psi, payloads)


def size_breakdown(c: CompressedImage) -> dict[str, int]:
    """Byte counts per container section; ``total`` equals ``len(serialize(c))``.

    ``encoded`` includes each channel's bit count and CRC framing.
    """
    cluster = sum(ch.means.size for ch in c.channels)
    code = sum(4 + sum(2 + len(s) + 5 for s, _, _ in ch.patterns) for ch in c.channels)
    encoded = sum(8 + len(ch.stream.data) + 4 for ch in c.channels)
    sizes = {"header": _HEADER.size, "cluster_tables": cluster, "code_tables": code, "encoded": encoded}
    sizes["total"] = sum(sizes.values())
    return sizes
