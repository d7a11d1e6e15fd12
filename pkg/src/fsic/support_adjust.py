"""Greedy longest-first parse of the identifier grid into mined patterns.

Patterns are taken in priority order (longest first, then higher support,
then lexicographically smaller). For each pattern every row is scanned left
to right and non-overlapping matches lying wholly on unclaimed cells are
claimed. The number of claims is the pattern's modified support, which is
what the entropy coder uses as its weight. Single-symbol patterns come last
and sweep up whatever remains.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvariantViolation
from .seq_mine import PatternSet, Symbols, _as_bytes, priority_key


class Token(NamedTuple):
    start: int
    symbols: Symbols


@dataclass
class ParsedGrid:
    rows: list[list[Token]]
    counts: dict[Symbols, int]

    @property
    def width(self) -> int:
        return sum(len(t.symbols) for t in self.rows[0]) if self.rows else 0

    def expand(self) -> list[list[int]]:
        return [[s for t in row for s in t.symbols] for row in self.rows]


def _claim(row: bytes, mask: bytearray, needle: bytes, out: list[Token], symbols: Symbols) -> int:
    n = len(needle)
    claimed = 0
    i = row.find(needle)
    while i != -1:
        if 1 in mask[i : i + n]:
            i = row.find(needle, i + 1)
            continue
        mask[i : i + n] = b"\x01" * n
        out.append(Token(i, symbols))
        claimed += 1
        i = row.find(needle, i + n)
    return claimed


def compute_modified_support(patterns: PatternSet, rows: Sequence[Sequence[int]]) -> tuple[PatternSet, ParsedGrid]:
    """Return the patterns with ``psi_mod`` filled in, and the token parse."""
    db = [_as_bytes(r) for r in rows]
    masks = [bytearray(len(r)) for r in db]
    parsed: list[list[Token]] = [[] for _ in db]
    counts: dict[Symbols, int] = {}

    for p in sorted(patterns, key=priority_key):
        needle = bytes(p.symbols)
        counts[p.symbols] = sum(
            _claim(row, mask, needle, out, p.symbols) for row, mask, out in zip(db, masks, parsed)
        )

    for r, mask in enumerate(masks):
        if 0 in mask:
            col = mask.index(0)
            raise InvariantViolation(f"cell ({r}, {col}) not covered by any pattern (symbol {db[r][col]})")
        parsed[r].sort()

    adjusted = [replace(p, psi_mod=counts[p.symbols]) for p in patterns]
    return PatternSet(adjusted, patterns.min_support, patterns.alphabet_size), ParsedGrid(parsed, counts)


def tokens_in_order(parse: ParsedGrid) -> list[Symbols]:
    """Flatten the parse row by row, left to right."""
    return [t.symbols for row in parse.rows for t in row]


def expand_tokens(tokens: Sequence[Symbols]) -> np.ndarray:
    return np.fromiter((s for t in tokens for s in t), dtype=np.uint8)
