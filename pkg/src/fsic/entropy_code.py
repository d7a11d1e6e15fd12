"""Canonical Huffman coding of pattern tokens.

Code lengths come from a two-queue Huffman construction over the modified
supports; codes are then reassigned canonically (shorter lengths first,
ascending symbol tuples within a length), so a table is fully described by
its lengths. Bits are packed most-significant first.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BitsExhaustedError,
    CorruptDataError,
    OvershootError,
    RowStraddleError,
    TrailingBitsError,
    UnknownTokenError,
)
from .seq_mine import PatternSet, Symbols, priority_key

MAX_CODE_LENGTH = 255


@dataclass(frozen=True)
class BitStream:
    bit_count: int
    data: bytes

    @classmethod
    def from_bits(cls, bits: str) -> "BitStream":
        n = len(bits)
        if n == 0:
            return cls(0, b"")
        pad = -n % 8
        value = int(bits + "0" * pad, 2)
        return cls(n, value.to_bytes((n + pad) // 8, "big"))

    def bits(self) -> str:
        """Available bits, capped at ``bit_count`` (shorter if the data is truncated)."""
        if not self.data:
            return ""
        s = bin(int.from_bytes(self.data, "big"))[2:].zfill(len(self.data) * 8)
        return s[: self.bit_count]

    def pad_bits(self) -> str:
        s = bin(int.from_bytes(self.data, "big"))[2:].zfill(len(self.data) * 8) if self.data else ""
        return s[self.bit_count :]


def huffman_lengths(weights: Sequence[int]) -> list[int]:
    """Optimal prefix-code lengths for positive ``weights`` (input order breaks ties).

    Uses the two-queue method: leaves sorted by weight in one queue, merged
    nodes appended to a second; on equal weights a leaf is taken first. A
    single weight gets a 1-bit code.
    """
    n = len(weights)
    if n == 0:
        return []
    if n == 1:
        return [1]
    order = sorted(range(n), key=lambda i: (weights[i], i))
    leaves = deque((weights[i], i) for i in order)
    merged: deque = deque()
    parent = [0] * (2 * n - 1)

    def pop():
        if merged and (not leaves or merged[0][0] < leaves[0][0]):
            return merged.popleft()
        return leaves.popleft()

    node = n
    while len(leaves) + len(merged) > 1:
        wa, a = pop()
        wb, b = pop()
        parent[a] = parent[b] = node
        merged.append((wa + wb, node))
        node += 1

    root = node - 1
    depth = [0] * (2 * n - 1)
    for v in range(root - 1, -1, -1):
        depth[v] = depth[parent[v]] + 1
    return depth[:n]


def canonical_codes(lengths: Mapping[Symbols, int]) -> dict[Symbols, str]:
    """Assign canonical codewords from code lengths (zero length = absent)."""
    items = sorted(((n, s) for s, n in lengths.items() if n > 0))
    codes: dict[Symbols, str] = {}
    code = 0
    prev = 0
    for n, s in items:
        code <<= n - prev
        codes[s] = format(code, f"0{n}b")
        code += 1
        prev = n
    if code > (1 << prev):
        raise ValueError("code lengths violate the Kraft inequality")
    return codes


class CodeTable:
    """Prefix-free mapping from pattern symbols to bit strings."""

    def __init__(self, lengths: Mapping[Symbols, int]):
        self.lengths = {tuple(s): n for s, n in lengths.items() if n > 0}
        if any(n > MAX_CODE_LENGTH for n in self.lengths.values()):
            raise ValueError(f"code length exceeds {MAX_CODE_LENGTH}")
        self.codes = canonical_codes(self.lengths)
        self._decode = {c: s for s, c in self.codes.items()}

    def __len__(self) -> int:
        return len(self.codes)

    def __contains__(self, symbols) -> bool:
        return tuple(symbols) in self.codes

    def __eq__(self, other) -> bool:
        return isinstance(other, CodeTable) and self.codes == other.codes

    def __repr__(self) -> str:
        return f"CodeTable({len(self)} entries)"

    def kraft_sum(self) -> float:
        return sum(2.0 ** -n for n in self.lengths.values())

    def weighted_length(self, weights: Mapping[Symbols, int]) -> int:
        return sum(w * self.lengths[s] for s, w in weights.items() if w > 0)


def build_code_table(patterns: PatternSet) -> CodeTable:
    """Huffman-code the patterns with positive modified support."""
    used = [p for p in sorted(patterns, key=priority_key) if p.psi_mod > 0]
    if not used:
        raise ValueError("no pattern has positive modified support")
    lengths = huffman_lengths([p.psi_mod for p in used])
    return CodeTable({p.symbols: n for p, n in zip(used, lengths)})


def encode(tokens: Iterable[Symbols], table: CodeTable) -> BitStream:
    codes = table.codes
    try:
        bits = "".join(codes[tuple(t)] for t in tokens)
    except KeyError as exc:
        raise UnknownTokenError(f"token {exc.args[0]} not in code table") from None
    return BitStream.from_bits(bits)


def decode(stream: BitStream, table: CodeTable, expected_cells: int, row_width: int) -> np.ndarray:
    """Decode ``stream`` into an ``(expected_cells // row_width, row_width)`` identifier grid."""
    if row_width < 1 or expected_cells % row_width:
        raise ValueError("expected_cells must be a positive multiple of row_width")
    lookup = table._decode
    max_len = max(table.lengths.values(), default=0)
    bits = stream.bits()
    nbits = len(bits)
    out = np.empty(expected_cells, dtype=np.uint8)
    filled = 0
    pos = 0
    while filled < expected_cells:
        if pos >= nbits:
            raise BitsExhaustedError(f"stream ended after {filled} of {expected_cells} cells")
        end = pos + 1
        while True:
            sym = lookup.get(bits[pos:end])
            if sym is not None:
                break
            if end - pos >= max_len:
                raise CorruptDataError(f"invalid code at bit {pos}")
            if end >= nbits:
                raise BitsExhaustedError(f"stream ended mid-code at bit {pos}")
            end += 1
        n = len(sym)
        if filled + n > expected_cells:
            raise OvershootError(f"pattern at bit {pos} overruns {expected_cells} cells")
        if filled // row_width != (filled + n - 1) // row_width:
            raise RowStraddleError(f"pattern at bit {pos} crosses a row boundary")
        out[filled : filled + n] = sym
        filled += n
        pos = end
    if pos != stream.bit_count or "1" in stream.pad_bits():
        raise TrailingBitsError(f"{stream.bit_count - pos} bits left after decoding")
    return out.reshape(-1, row_width)
