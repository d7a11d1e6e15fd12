"""Level-wise closed frequent mining of contiguous symbol runs.

Each row of the identifier grid is one sequence. A pattern is contained in a
row when it appears as a contiguous run, and its support is the number of
rows that contain it (a row counts once). Mining follows a GSP-style scheme:

* level 1 keeps every occurring symbol, regardless of support, so the greedy
  parse can always fall back to single symbols;
* level 2 is the full cross product of level 1;
* level ``l`` joins level ``l-1`` patterns whose ``l-2`` suffix/prefix agree;
* after level ``l`` is counted, any level ``l-1`` pattern with an equal-support
  super-pattern in level ``l`` is dropped as non-closed.

Rows are held as ``bytes`` so containment is a substring test.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ParameterError

Symbols = tuple[int, ...]


@dataclass(frozen=True)
class Pattern:
    symbols: Symbols
    support: int
    psi_mod: int

    @classmethod
    def mined(cls, symbols: Iterable[int], support: int) -> "Pattern":
        s = tuple(symbols)
        return cls(s, support, support)

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def label(self) -> str:
        if all(0 <= s < 10 for s in self.symbols):
            return "".join(map(str, self.symbols))
        return ".".join(map(str, self.symbols))


def priority_key(p: Pattern):
    """Descending length, descending support, then ascending symbols."""
    return (-len(p.symbols), -p.support, p.symbols)


@dataclass
class PatternSet:
    patterns: list[Pattern]
    min_support: int
    alphabet_size: int
    _index: dict[Symbols, Pattern] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.patterns = sorted(self.patterns, key=priority_key)
        self._index = {p.symbols: p for p in self.patterns}
        if len(self._index) != len(self.patterns):
            raise ValueError("duplicate pattern in PatternSet")

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self):
        return iter(self.patterns)

    def __contains__(self, symbols) -> bool:
        return tuple(symbols) in self._index

    def __getitem__(self, symbols) -> Pattern:
        return self._index[tuple(symbols)]

    def supports(self) -> dict[Symbols, int]:
        return {p.symbols: p.support for p in self.patterns}

    def modified_supports(self) -> dict[Symbols, int]:
        return {p.symbols: p.psi_mod for p in self.patterns}


def _as_bytes(seq: Sequence[int]) -> bytes:
    if isinstance(seq, bytes):
        return seq
    if isinstance(seq, np.ndarray):
        return seq.astype(np.uint8).tobytes()
    return bytes(seq)


def contains_contiguous(needle: Sequence[int], row: Sequence[int]) -> bool:
    """True iff ``needle`` occurs as a contiguous run inside ``row``."""
    if len(needle) == 0:
        raise ValueError("needle must be nonempty")
    return _as_bytes(needle) in _as_bytes(row)


def count_support(needle: Sequence[int], rows: Iterable[Sequence[int]]) -> int:
    """Number of rows containing ``needle`` at least once."""
    n = _as_bytes(needle)
    return sum(1 for r in rows if n in _as_bytes(r))


def join_candidates(prev: Iterable[Sequence[int]]) -> list[Symbols]:
    """Extend each pattern by the last symbol of every pattern whose prefix matches its suffix."""
    prev = [tuple(p) for p in prev]
    if not prev:
        return []
    by_prefix: dict[Symbols, list[Symbols]] = defaultdict(list)
    for g in prev:
        by_prefix[g[:-1]].append(g)
    seen: dict[Symbols, None] = {}
    for s in prev:
        for g in by_prefix.get(s[1:], ()):
            seen.setdefault(s + g[-1:], None)
    return list(seen)


def mine_closed_frequent(rows: Iterable[Sequence[int]], psi: int, alphabet_size: int | None = None) -> PatternSet:
    """Mine closed frequent contiguous patterns with absolute row support ``psi``."""
    if psi < 1:
        raise ParameterError(f"minimum support must be >= 1, got {psi}")
    db = [_as_bytes(r) for r in rows]
    if not db:
        raise ParameterError("no rows to mine")

    def support(sym: Symbols) -> int:
        needle = bytes(sym)
        return sum(1 for r in db if needle in r)

    c1 = sorted({s for r in db for s in r})
    result = [Pattern.mined((s,), support((s,))) for s in c1]

    f_prev = {}
    for a in c1:
        for b in c1:
            sup = support((a, b))
            if sup >= psi:
                f_prev[(a, b)] = sup

    while f_prev:
        f_cur = {}
        for cand in join_candidates(f_prev):
            sup = support(cand)
            if sup >= psi:
                f_cur[cand] = sup
        # a length l-1 pattern inside a length l one is its prefix or suffix
        for g, sup in f_cur.items():
            for s in (g[:-1], g[1:]):
                if f_prev.get(s) == sup:
                    del f_prev[s]
        result.extend(Pattern.mined(s, sup) for s, sup in f_prev.items())
        f_prev = f_cur

    if alphabet_size is None:
        alphabet_size = (max(c1) + 1) if c1 else 0
    return PatternSet(result, psi, alphabet_size)
