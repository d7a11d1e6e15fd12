"""Command-line front end: ``fsic compress|decompress|inspect|metrics|sweep``."""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
import time
from pathlib import Path

from . import __version__
from .codec import CodecParams, compress, decompress, deserialize, serialize, size_breakdown
from .errors import FsicError
from .pixel_grid import load_image, save_image
from .quality_metrics import KB, compression_ratio, evaluate
from .seq_mine import Pattern

log = logging.getLogger("fsic")


def _threads(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("--threads must be >= 1")
    return n


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("-b", "--block-size", type=int, default=8, help="block side in pixels (default 8)")
    p.add_argument("-k", "--clusters", type=int, default=8, help="clusters per block (default 8)")
    p.add_argument("-s", "--support", default="50%", help="minimum support, absolute rows or percent like 58%% (default 50%%)")
    p.add_argument("--threads", type=_threads, default=os.cpu_count() or 1, help="worker processes (default: all cores)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fsic", description="Frequent-sequence image codec.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", help="compress a BMP/PPM/PGM image to .fsic")
    p.add_argument("input")
    p.add_argument("output")
    _add_params(p)

    p = sub.add_parser("decompress", help="decode a .fsic container to BMP/PPM/PGM")
    p.add_argument("input")
    p.add_argument("output", help="output image; format from the extension")

    p = sub.add_parser("inspect", help="dump container header and pattern tables")
    p.add_argument("input")
    p.add_argument("--channel", type=int, default=None, help="only this channel")

    p = sub.add_parser("metrics", help="compare two images, optionally with a container size")
    p.add_argument("original")
    p.add_argument("reconstructed")
    p.add_argument("--compressed", help="container whose size gives Cr")

    p = sub.add_parser("sweep", help="sweep one parameter and write CSV (and optionally a figure)")
    p.add_argument("input")
    p.add_argument("--axis", choices=("b", "k", "psi"), required=True)
    p.add_argument("--values", required=True, help="comma-separated values, e.g. 30%%,40%%,50%%")
    p.add_argument("--csv", required=True, help="output CSV path ('-' for stdout)")
    p.add_argument("--plot", help="also render the sweep to this image file (png, pdf, svg)")
    _add_params(p)
    return parser


def run_compress(args) -> int:
    img = load_image(args.input)
    params = CodecParams(args.block_size, args.clusters, args.support)
    timings: dict = {}
    t0 = time.perf_counter()
    c = compress(img, params, workers=args.threads, timings=timings)
    data = serialize(c)
    timings["serialize_s"] = time.perf_counter() - t0 - timings["cluster_s"] - timings["encode_s"]
    Path(args.output).write_bytes(data)
    sizes = size_breakdown(c)
    print(f"{args.input}: {img.shape[1]}x{img.shape[0]}x{img.shape[2]}, b={c.block_size} k={c.clusters} psi={c.min_support} rows")
    print(f"compressed {len(data)} bytes ({len(data) / KB:.2f} kB), Cr {compression_ratio(img.size, len(data)):.3f}")
    print("sections: " + ", ".join(f"{k} {v}" for k, v in sizes.items() if k != "total"))
    print("time: " + ", ".join(f"{k[:-2]} {v:.3f}s" for k, v in timings.items()))
    return 0


def run_decompress(args) -> int:
    t0 = time.perf_counter()
    c = deserialize(Path(args.input).read_bytes())
    img = decompress(c)
    save_image(img, args.output)
    print(f"{args.output}: {c.width}x{c.height}x{len(c.channels)} in {time.perf_counter() - t0:.3f}s")
    return 0


def format_container(c, channel: int | None = None) -> str:
    sizes = size_breakdown(c)
    lines = [
        f"FSIC v1 {c.width}x{c.height}, {len(c.channels)} channel(s)",
        f"block size {c.block_size}, k {c.clusters}, min support {c.min_support} rows, {c.n_blocks} blocks/channel",
        "bytes: " + ", ".join(f"{k} {v}" for k, v in sizes.items()),
    ]
    for i, ch in enumerate(c.channels):
        if channel is not None and i != channel:
            continue
        used = sum(1 for _, n, _ in ch.patterns if n)
        lines.append("")
        lines.append(f"channel {i}: {len(ch.patterns)} patterns ({used} coded), {ch.stream.bit_count} bits")
        lines.append(f"  {'sequence':<24} {'psi_mod':>7} {'bits':>4}  code")
        codes = ch.code_table().codes
        for symbols, length, psi_mod in ch.patterns:
            label = Pattern(symbols, 0, 0).label
            lines.append(f"  {label:<24} {psi_mod:>7} {length:>4}  {codes.get(symbols, '-')}")
    return "\n".join(lines)


def run_inspect(args) -> int:
    c = deserialize(Path(args.input).read_bytes())
    print(format_container(c, args.channel))
    return 0


def run_metrics(args) -> int:
    a = load_image(args.original)
    b = load_image(args.reconstructed)
    size = Path(args.compressed).stat().st_size if args.compressed else a.size
    rep = evaluate(a, b, size)
    print(rep.format())
    if len(rep.channel_mse) > 1:
        print("per-channel MSE: " + ", ".join(f"{m:.3f}" for m in rep.channel_mse))
    return 0


def run_sweep(args) -> int:
    from .sweep import SweepSpec, run_sweep as sweep, write_csv

    img = load_image(args.input)
    spec = SweepSpec(args.axis, [v.strip() for v in args.values.split(",") if v.strip()],
                     args.block_size, args.clusters, args.support)
    rows = sweep(img, spec, workers=args.threads)
    if args.csv == "-":
        write_csv(rows, sys.stdout)
    else:
        with open(args.csv, "w", newline="") as fh:
            write_csv(rows, fh)
    if args.plot:
        from .plotting import plot_sweep

        plot_sweep(rows, args.plot, title=Path(args.input).name)
    failed = [r for r in rows if not r.ok]
    for r in rows:
        if r.ok:
            psnr = "inf" if math.isinf(r.psnr_db) else f"{r.psnr_db:.2f}"
            log.info("%s=%s: %d bytes, Cr %.3f, PSNR %s", r.param, r.value, r.compressed_bytes, r.cr, psnr)
    return 1 if failed and len(failed) == len(rows) else 0


COMMANDS = {
    "compress": run_compress,
    "decompress": run_decompress,
    "inspect": run_inspect,
    "metrics": run_metrics,
    "sweep": run_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (OSError, ValueError, FsicError) as exc:
        print(f"fsic {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
