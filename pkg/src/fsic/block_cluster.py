"""Per-block 1-D k-means and the identifier grid it produces.

Clustering is fully deterministic: centroids are seeded at evenly spaced
quantiles of the block's distinct values, stored means are rounded half-up
to integers, and pixels are assigned to the nearest *rounded* mean (lowest
identifier on ties). The decoder therefore only needs the rounded means.
"""

from __future__ import annotations

from concurrent.futures import Executor
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, ParameterError, SymbolRangeError
from .pixel_grid import merge_blocks

MAX_ITER = 100


@dataclass(frozen=True)
class ClusterTable:
    """Cluster identifier -> mean intensity for one block."""

    block_index: int
    means: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.means)


def _seed(values: np.ndarray, k: int) -> np.ndarray:
    distinct = np.unique(values)
    # round half up on the quantile positions
    pos = np.floor(np.linspace(0, len(distinct) - 1, k) + 0.5).astype(np.intp)
    return distinct[pos].astype(np.int64)


def _assign(x: np.ndarray, means: np.ndarray) -> np.ndarray:
    # argmin returns the first minimum, i.e. the lowest identifier on ties
    return np.abs(x[:, None] - means[None, :]).argmin(axis=1)


def _update(x: np.ndarray, labels: np.ndarray, means: np.ndarray) -> np.ndarray:
    k = len(means)
    counts = np.bincount(labels, minlength=k)
    sums = np.bincount(labels, weights=x, minlength=k).astype(np.int64)
    new = means.copy()
    nz = counts > 0
    new[nz] = (2 * sums[nz] + counts[nz]) // (2 * counts[nz])

    # reseed empty clusters at the pixel farthest from every current mean
    for c in np.flatnonzero(~nz):
        dist = np.abs(x[:, None] - new[None, :]).min(axis=1)
        far = int(dist.argmax())
        if dist[far] == 0:
            break
        new[c] = x[far]
    return new


def kmeans_block(block, k: int, block_index: int = 0) -> tuple[ClusterTable, np.ndarray]:
    """Cluster one block's intensities into ``k`` groups.

    Returns the cluster table and a tile of identifiers with the block's
    shape (``uint8``).
    """
    if k < 1 or k > 256:
        raise ParameterError(f"k must be in [1, 256], got {k}")
    blk = np.asarray(block)
    if blk.size == 0:
        raise GeometryError("empty block")
    x = blk.reshape(-1).astype(np.int64)

    means = _seed(x, k)
    labels = _assign(x, means)
    for _ in range(MAX_ITER):
        means = _update(x, labels, means)
        new_labels = _assign(x, means)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    else:
        labels = _assign(x, means)

    table = ClusterTable(block_index, tuple(int(m) for m in means))
    return table, labels.reshape(blk.shape).astype(np.uint8)


def _cluster_chunk(args):
    blocks, k, start = args
    return [kmeans_block(blk, k, start + i) for i, blk in enumerate(blocks)]


def cluster_all_blocks(
    blocks,
    k: int,
    width: int | None = None,
    height: int | None = None,
    executor: Executor | None = None,
    chunks: int = 1,
) -> tuple[list[ClusterTable], np.ndarray]:
    """Cluster every block and merge the identifier tiles into one grid.

    ``blocks`` is an ``(n_b, b, b)`` array. When ``width``/``height`` are
    omitted the blocks are assumed to tile a square image. With an
    ``executor`` the blocks are fanned out in ``chunks`` contiguous slices;
    results are gathered in block order, so the output is identical to the
    sequential path.

    The identifier grid is returned as an ``(h, w)`` ``uint8`` array.
    """
    blk = np.asarray(blocks)
    if blk.ndim != 3 or blk.shape[1] != blk.shape[2]:
        raise GeometryError(f"blocks must have shape (n, b, b), got {blk.shape}")
    n, b, _ = blk.shape
    if width is None or height is None:
        side = int(round(np.sqrt(n))) * b
        width = height = side

    if executor is None or chunks <= 1 or n < 2:
        results = _cluster_chunk((blk, k, 0))
    else:
        bounds = np.linspace(0, n, min(chunks, n) + 1).astype(int)
        jobs = [(blk[lo:hi], k, int(lo)) for lo, hi in zip(bounds[:-1], bounds[1:])]
        results = [r for part in executor.map(_cluster_chunk, jobs) for r in part]

    tables = [t for t, _ in results]
    tiles = np.stack([tile for _, tile in results])
    grid = merge_blocks(tiles, width, height)[:, :, 0]
    return tables, grid


def reconstruct_block(tile, table: ClusterTable) -> np.ndarray:
    """Replace each identifier in ``tile`` by its cluster mean."""
    t = np.asarray(tile)
    if t.size and int(t.max()) >= table.k:
        raise SymbolRangeError(f"identifier {int(t.max())} >= k={table.k}")
    lut = np.asarray(table.means, dtype=np.uint8)
    return lut[t]


def reconstruct_blocks(tiles, means: np.ndarray) -> np.ndarray:
    """Vectorised :func:`reconstruct_block` over ``(n_b, b, b)`` tiles and ``(n_b, k)`` means."""
    t = np.asarray(tiles).astype(np.intp)
    m = np.asarray(means, dtype=np.uint8)
    if t.size and int(t.max()) >= m.shape[1]:
        raise SymbolRangeError(f"identifier {int(t.max())} >= k={m.shape[1]}")
    n = t.shape[0]
    return m[np.arange(n)[:, None, None], t]
