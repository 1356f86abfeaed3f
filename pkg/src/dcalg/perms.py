"""Permutations of ``{1..n}`` in one-line notation.

A :class:`Permutation` is a tuple whose entry ``i`` (0-based) is the image of
the point ``i + 1``.  Products compose right to left: ``(p * q)(i) = p(q(i))``.
"""

from __future__ import annotations

import re
from enum import Enum
from itertools import permutations as _itertools_permutations
from typing import Iterable, Iterator, Sequence

from .partitions import Partition

__all__ = [
    "Permutation",
    "EmbedMode",
    "DegreeError",
    "compose",
    "inverse",
    "cycles",
    "cycle_type",
    "embed",
    "restrict",
    "top_moved",
    "identity",
    "symmetric_group",
    "from_cycles",
    "parse_cycles",
    "format_cycles",
    "iter_cycle_type",
]


class DegreeError(ValueError):
    """Two permutations (or a permutation and a target degree) do not fit."""


class Permutation(tuple):
    """A bijection of ``{1..degree}`` stored as its one-line notation."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int] = ()) -> "Permutation":
        return tuple.__new__(cls, images)

    @classmethod
    def checked(cls, images: Iterable[int]) -> "Permutation":
        p = cls(images)
        if sorted(p) != list(range(1, len(p) + 1)):
            raise ValueError(f"not a permutation of 1..{len(p)}: {tuple(p)}")
        return p

    @property
    def degree(self) -> int:
        return len(self)

    def __call__(self, point: int) -> int:
        return self[point - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":  # type: ignore[override]
        return compose(self, other)

    def inverse(self) -> "Permutation":
        return inverse(self)

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self, 1))

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)}, degree={len(self)})"

    def __str__(self) -> str:
        return format_cycles(self)


def compose(p: Sequence[int], q: Sequence[int]) -> Permutation:
    """``p ∘ q``: apply ``q`` first."""
    if len(p) != len(q):
        raise DegreeError(f"degree mismatch: {len(p)} vs {len(q)}")
    return Permutation([p[i - 1] for i in q])


def inverse(p: Sequence[int]) -> Permutation:
    out = [0] * len(p)
    for i, v in enumerate(p, 1):
        out[v - 1] = i
    return Permutation(out)


def identity(n: int) -> Permutation:
    return Permutation(range(1, n + 1))


def cycles(p: Sequence[int], include_fixed: bool = True) -> list[list[int]]:
    """Cycles with the minimum first, sorted by their minimum."""
    seen = [False] * (len(p) + 1)
    out = []
    for start in range(1, len(p) + 1):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        nxt = p[start - 1]
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = p[nxt - 1]
        if include_fixed or len(cyc) > 1:
            out.append(cyc)
    return out


def cycle_type(p: Sequence[int]) -> Partition:
    return Partition(tuple(len(c) for c in cycles(p)))


def top_moved(p: Sequence[int]) -> int:
    """Largest moved point, 0 for the identity."""
    for i in range(len(p), 0, -1):
        if p[i - 1] != i:
            return i
    return 0


class EmbedMode(str, Enum):
    FIX_TOP = "fix-top"
    FIX_BOTTOM = "fix-bottom"


def embed(p: Sequence[int], m: int, mode: EmbedMode | str = EmbedMode.FIX_TOP) -> Permutation:
    """Embed a permutation of degree ``d`` into degree ``m``.

    ``fix-top`` appends the fixed points ``d+1..m``; ``fix-bottom`` moves the
    permutation onto the points ``m-d+1..m`` and fixes ``1..m-d``.
    """
    d = len(p)
    if m < d:
        raise DegreeError(f"cannot embed degree {d} into degree {m}")
    mode = EmbedMode(mode)
    if mode is EmbedMode.FIX_TOP:
        return Permutation(tuple(p) + tuple(range(d + 1, m + 1)))
    shift = m - d
    return Permutation(tuple(range(1, shift + 1)) + tuple(v + shift for v in p))


def restrict(p: Sequence[int], m: int) -> Permutation:
    """Inverse of the fix-top embedding; requires ``p`` to fix ``m+1..degree``."""
    if top_moved(p) > m:
        raise DegreeError(f"{format_cycles(p)} moves points above {m}")
    return Permutation(p[:m])


def symmetric_group(n: int) -> Iterator[Permutation]:
    """All of ``S_n`` in lexicographic order of one-line notation."""
    for images in _itertools_permutations(range(1, n + 1)):
        yield Permutation(images)


def from_cycles(cycle_list: Iterable[Sequence[int]], degree: int) -> Permutation:
    images = list(range(1, degree + 1))
    seen: set[int] = set()
    for cyc in cycle_list:
        for a in cyc:
            if not 1 <= a <= degree:
                raise DegreeError(f"point {a} outside 1..{degree}")
            if a in seen:
                raise ValueError(f"point {a} repeated in cycle notation")
            seen.add(a)
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            images[a - 1] = b
    return Permutation(images)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse ``"(1 2)(3 4)"``; fixed points may be omitted, ``"()"`` is the identity."""
    stripped = text.strip()
    if stripped in ("", "e", "id"):
        return identity(degree)
    if _CYCLE_RE.sub("", stripped).strip():
        raise ValueError(f"malformed cycle notation {text!r}")
    cyc_list = []
    for body in _CYCLE_RE.findall(stripped):
        toks = body.replace(",", " ").split()
        if toks:
            cyc_list.append([int(t) for t in toks])
    return from_cycles(cyc_list, degree)


def format_cycles(p: Sequence[int]) -> str:
    nontrivial = cycles(p, include_fixed=False)
    if not nontrivial:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in nontrivial)


def iter_cycle_type(points: Sequence[int], parts: Sequence[int], degree: int) -> Iterator[Permutation]:
    """Every permutation of ``degree`` moving only ``points`` with cycle type ``parts`` on them.

    ``parts`` must sum to ``len(points)``; points outside ``points`` are fixed.
    Each permutation is produced exactly once.
    """
    if sum(parts) != len(points):
        raise ValueError("cycle type does not match the number of points")
    base = list(range(1, degree + 1))

    def rec(remaining: tuple[int, ...], budget: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
        if not remaining:
            yield []
            return
        head, rest = remaining[0], remaining[1:]
        for length in sorted(set(budget)):
            left = list(budget)
            left.remove(length)
            for tail in _itertools_permutations(rest, length - 1):
                others = tuple(x for x in rest if x not in tail)
                for more in rec(others, tuple(left)):
                    yield [(head,) + tail] + more

    for cyc_list in rec(tuple(sorted(points)), tuple(parts)):
        images = base[:]
        for cyc in cyc_list:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a - 1] = b
        yield Permutation(images)
