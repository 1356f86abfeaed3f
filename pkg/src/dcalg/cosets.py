"""Double cosets ``K_n^{k1} \\ K_n / K_n^{k2}``, the level function and minimality.

Double cosets are found by orbit closure under left multiplication by the
generators of ``K_n^{k1}`` and right multiplication by those of ``K_n^{k2}``.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import Any, Callable, Iterable, Sequence

from .families import Family, Tower

__all__ = [
    "EmptySetError",
    "DoubleCosetTable",
    "coset_table",
    "k_min",
    "m_value",
    "is_minimal",
    "orbit",
    "double_class",
]


class EmptySetError(ValueError):
    """The level of an empty set is undefined."""


def k_min(elements: Iterable[Any], level: Callable[[Any], int]) -> int:
    """``min k`` with the set meeting the ``k``-th group of the chain."""
    best = None
    for g in elements:
        v = level(g)
        if best is None or v < best:
            best = v
            if best == 0:
                break
    if best is None:
        raise EmptySetError("k_min of an empty set")
    return best


def orbit(start: Any, moves: Sequence[Callable[[Any], Any]]) -> set[Any]:
    """Closure of ``{start}`` under the given maps (each a bijection of a finite set)."""
    seen = {start}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        for mv in moves:
            h = mv(g)
            if h not in seen:
                seen.add(h)
                queue.append(h)
    return seen


class DoubleCosetTable:
    """Partition of ``K_n`` into ``K_n^{k1} x K_n^{k2}`` with levels and minimal parts."""

    def __init__(self, tower: Tower, k1: int, k2: int) -> None:
        self.tower, self.k1, self.k2 = tower, k1, k2
        mul = tower.mul
        left = tower.sub_gens(k1)
        right = tower.sub_gens(k2)
        moves = [(lambda g, s=s: mul(s, g)) for s in left] + [(lambda g, t=t: mul(g, t)) for t in right]
        self.coset_of: dict[Any, int] = {}
        self.cosets: list[list[Any]] = []
        for g in tower.elements():
            if g in self.coset_of:
                continue
            members = sorted(orbit(g, moves))
            idx = len(self.cosets)
            for h in members:
                self.coset_of[h] = idx
            self.cosets.append(members)
        level = tower.level
        self.levels = [min(level(h) for h in c) for c in self.cosets]
        self.minimal = [[h for h in c if level(h) == m] for c, m in zip(self.cosets, self.levels)]

    def index(self, y: Any) -> int:
        try:
            return self.coset_of[y]
        except KeyError:
            raise ValueError(f"element is not in {self.tower.describe()}") from None

    def coset(self, y: Any) -> list[Any]:
        return self.cosets[self.index(y)]

    def m_value(self, y: Any) -> int:
        return self.levels[self.index(y)]

    def is_minimal(self, y: Any) -> bool:
        return self.tower.level(y) == self.m_value(y)

    def minimal_part(self, y: Any) -> list[Any]:
        """``K_n^{k1} y K_n^{k2} ∩ K_m`` with ``m = m_{k1,k2}(y)``."""
        return self.minimal[self.index(y)]


@lru_cache(maxsize=None)
def coset_table(tower: Tower, k1: int, k2: int) -> DoubleCosetTable:
    return DoubleCosetTable(tower, k1, k2)


def m_value(tower: Tower, x: Any, k1: int, k2: int) -> int:
    """``m_{k1,k2}(x) = k(K_n^{k1} x K_n^{k2})``."""
    return coset_table(tower, k1, k2).m_value(x)


def is_minimal(tower: Tower, y: Any, k1: int, k2: int) -> bool:
    """``y`` is ``(k1,k2)``-minimal when ``y ∈ K_m`` for ``m = m_{k1,k2}(y)``."""
    return coset_table(tower, k1, k2).is_minimal(y)


def double_class(family: Family, g: Any) -> set[Any]:
    """``K_n g K_n`` inside ``G_n`` (conjugacy class for centre families)."""
    gens = [family.from_k(s) for s in family.tower.sub_gens(0)]
    mul, inv = family.mul, family.inv
    if family.is_center:
        moves = [(lambda x, s=s, si=inv(s): mul(mul(s, x), si)) for s in gens]
    else:
        moves = [(lambda x, s=s: mul(s, x)) for s in gens] + [(lambda x, s=s: mul(x, s)) for s in gens]
    return orbit(g, moves)
