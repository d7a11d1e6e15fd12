"""Parameter sweeps over block size, cluster count or minimum support."""

from __future__ import annotations

import csv
import logging
import math
import time
from dataclasses import astuple, dataclass
from typing import Iterable, Sequence, TextIO

from .codec import CodecParams, compress, decompress, serialize
from .quality_metrics import compression_ratio, psnr, ssim

log = logging.getLogger(__name__)

CSV_HEADER = ("param", "value", "compressed_bytes", "cr", "psnr_db", "ssim", "compress_s")
AXES = ("b", "k", "psi")


@dataclass
class SweepRow:
    param: str
    value: str
    compressed_bytes: float
    cr: float
    psnr_db: float
    ssim: float
    compress_s: float

    @property
    def ok(self) -> bool:
        return not math.isnan(self.compressed_bytes)


@dataclass
class SweepSpec:
    axis: str
    values: Sequence[str]
    block_size: int = 8
    clusters: int = 8
    support: str = "50%"

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if not self.values:
            raise ValueError("sweep needs at least one value")

    def params_for(self, value: str) -> CodecParams:
        b, k, s = self.block_size, self.clusters, self.support
        if self.axis == "b":
            b = int(value)
        elif self.axis == "k":
            k = int(value)
        else:
            s = value
        return CodecParams(b, k, s)


def run_sweep(img, spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """One row per value; a failing point is logged and recorded as NaNs."""
    rows = []
    raw = img.size
    for value in spec.values:
        value = str(value)
        try:
            params = spec.params_for(value)
            t0 = time.perf_counter()
            c = compress(img, params, workers=workers)
            data = serialize(c)
            elapsed = time.perf_counter() - t0
            out = decompress(c)
            rows.append(SweepRow(spec.axis, value, len(data), compression_ratio(raw, len(data)),
                                 psnr(img, out), ssim(img, out), elapsed))
        except Exception as exc:  # noqa: BLE001 - keep sweeping
            log.error("sweep %s=%s failed: %s", spec.axis, value, exc)
            nan = math.nan
            rows.append(SweepRow(spec.axis, value, nan, nan, nan, nan, nan))
    return rows


def _fmt(v) -> str:
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf"
        if v.is_integer():
            return str(int(v))
        return f"{v:.6f}"
    return str(v)


def write_csv(rows: Iterable[SweepRow], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_fmt(v) for v in astuple(r)])


def read_csv(fh: TextIO) -> list[SweepRow]:
    reader = csv.DictReader(fh)
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return [
        SweepRow(r["param"], r["value"], *(float(r[k]) for k in CSV_HEADER[2:]))
        for r in reader
    ]


def is_unimodal(values: Sequence[float]) -> bool:
    """True if the sequence strictly rises to an interior peak, then never rises again.

    Plateaus are allowed on either side of the peak.
    """
    if len(values) < 3:
        return False
    peak = max(range(len(values)), key=lambda i: values[i])
    if peak in (0, len(values) - 1):
        return False
    rising = all(values[i] <= values[i + 1] for i in range(peak))
    falling = all(values[i] >= values[i + 1] for i in range(peak, len(values) - 1))
    return rising and falling and values[0] < values[peak] > values[-1]
