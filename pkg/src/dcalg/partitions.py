"""Integer partitions and the labels built from them.

Partitions are stored as weakly decreasing tuples of positive parts.  A
*proper* partition has no part equal to 1; proper partitions index the class
families that are stable in ``n`` once they are padded with parts equal to 1.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import factorial
from typing import Iterator

__all__ = [
    "EMPTY_SYMBOL",
    "Partition",
    "PairPartition",
    "IndexedPair",
    "SizeError",
    "z",
    "union",
    "strip_ones",
    "pad_to",
    "pair_uparrow",
    "partitions",
    "proper_partitions",
    "pair_partitions",
    "parse_partition",
    "parse_pair",
    "parse_indexed_pair",
]

EMPTY_SYMBOL = "∅"


class SizeError(ValueError):
    """A partition cannot be padded or indexed at the requested size."""


@dataclass(frozen=True, order=True)
class Partition:
    """A partition, kept as a weakly decreasing tuple of positive parts.

    The constructor sorts its input, so ``Partition((1, 2))`` and
    ``Partition((2, 1))`` are the same value.
    """

    parts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        parts = tuple(sorted((int(p) for p in self.parts), reverse=True))
        if parts and parts[-1] < 1:
            raise ValueError(f"partition parts must be positive, got {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def multiplicity(self, i: int) -> int:
        """Number of parts equal to ``i``."""
        return self.parts.count(i)

    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.parts))

    @property
    def is_proper(self) -> bool:
        return all(p >= 2 for p in self.parts)

    def doubled(self) -> "Partition":
        """The partition with every part multiplied by 2."""
        return Partition(tuple(2 * p for p in self.parts))

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return ",".join(map(str, self.parts)) if self.parts else EMPTY_SYMBOL

    def __repr__(self) -> str:
        return f"Partition({self})"


@dataclass(frozen=True, order=True)
class PairPartition:
    """A pair of partitions ``(lam, delta)``; proper when ``lam`` is proper."""

    lam: Partition
    delta: Partition

    @property
    def size(self) -> int:
        return self.lam.size + self.delta.size

    @property
    def is_proper(self) -> bool:
        return self.lam.is_proper

    def __str__(self) -> str:
        return f"{self.lam}|{self.delta}"


@dataclass(frozen=True, order=True)
class IndexedPair:
    """A pair ``(i, lam)``: ``i`` is the length of the cycle through the point 1."""

    i: int
    lam: Partition

    def __post_init__(self) -> None:
        if self.i < 1:
            raise ValueError(f"cycle length i must be positive, got {self.i}")

    @property
    def size(self) -> int:
        return self.i + self.lam.size

    @property
    def is_proper(self) -> bool:
        return self.lam.is_proper

    def __str__(self) -> str:
        return f"{self.i}:({self.lam})"


def z(lam: Partition) -> int:
    """Centralizer order ``prod_i i^{m_i} m_i!`` of a permutation of type ``lam``."""
    out = 1
    for part, mult in Counter(lam.parts).items():
        out *= part**mult * factorial(mult)
    return out


def union(lam: Partition, delta: Partition) -> Partition:
    """Multiset union of the parts."""
    return Partition(lam.parts + delta.parts)


def strip_ones(lam: Partition) -> Partition:
    return Partition(tuple(p for p in lam.parts if p != 1))


def pad_to(lam: Partition, n: int) -> Partition:
    """Append parts equal to 1 until the size is ``n``."""
    if n < lam.size:
        raise SizeError(f"cannot pad {lam} (size {lam.size}) to {n}")
    return Partition(lam.parts + (1,) * (n - lam.size))


def pair_uparrow(p: PairPartition, n: int) -> PairPartition:
    """Pad the first component of a pair with ones up to total size ``n``."""
    if n < p.size:
        raise SizeError(f"cannot pad pair {p} (size {p.size}) to {n}")
    return PairPartition(Partition(p.lam.parts + (1,) * (n - p.size)), p.delta)


def partitions(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""
    if max_part is None:
        max_part = n

    def rec(rest: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    for parts in rec(n, max_part):
        yield Partition(parts)


def proper_partitions(max_size: int, min_size: int = 0) -> list[Partition]:
    """Proper partitions with ``min_size <= size <= max_size``, by size then parts."""
    out = []
    for s in range(min_size, max_size + 1):
        out.extend(p for p in partitions(s) if p.is_proper)
    return out


def pair_partitions(n: int) -> Iterator[PairPartition]:
    """All pairs ``(lam, delta)`` with ``|lam| + |delta| = n``."""
    for a in range(n, -1, -1):
        for lam in partitions(a):
            for delta in partitions(n - a):
                yield PairPartition(lam, delta)


def _parse_parts(text: str) -> Partition:
    text = text.strip()
    if text in ("", "0", EMPTY_SYMBOL):
        return Partition(())
    try:
        parts = tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise ValueError(f"malformed partition {text!r}") from exc
    return Partition(parts)


def parse_partition(text: str) -> Partition:
    """Parse ``"3,2,2"``; the empty partition is ``""``, ``"0"`` or ``"∅"``."""
    return _parse_parts(text)


def parse_pair(text: str) -> PairPartition:
    """Parse ``"3,2|1,1"`` into a pair of partitions."""
    if text.count("|") != 1:
        raise ValueError(f"pair partition needs exactly one '|': {text!r}")
    left, right = text.split("|")
    return PairPartition(_parse_parts(left), _parse_parts(right))


def parse_indexed_pair(text: str) -> IndexedPair:
    """Parse ``"2:(1,1)"``; parentheses around the partition are optional."""
    head, sep, tail = text.partition(":")
    if not sep:
        raise ValueError(f"indexed pair needs 'i:(parts)': {text!r}")
    tail = tail.strip()
    if tail.startswith("(") and tail.endswith(")"):
        tail = tail[1:-1]
    try:
        i = int(head)
    except ValueError as exc:
        raise ValueError(f"malformed cycle length in {text!r}") from exc
    return IndexedPair(i, _parse_parts(tail))
