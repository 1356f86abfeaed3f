"""Formal sums in group algebras and brute-force structure coefficients.

The coefficient of the class of ``z0`` in ``C1 · C2`` is the number of pairs
``(x, y) ∈ C1 × C2`` with ``xy = z0``, i.e. the number of ``x ∈ C1`` with
``x⁻¹ z0 ∈ C2`` (the representative trick).  For double classes both
conditions are invariant under ``x ↦ xk`` with ``k ∈ K``, so it suffices to
count over a transversal of ``C1 / K`` and multiply by ``|K|``.
"""

from __future__ import annotations

import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Iterator, Mapping

from .families import (
    ClassLabel,
    Family,
    HeckeFamily,
    PairFamily,
    PermPair,
    coset_type,
    make_family,
    matching_representative,
    matchings,
)
from .perms import Permutation

__all__ = [
    "FormalSum",
    "AmbientMismatch",
    "StructureError",
    "class_sum",
    "multiply",
    "decompose",
    "structure_coefficient_bruteforce",
    "product_decomposition",
    "transversal",
    "hecke_matchings_by_type",
    "resolve_threads",
]


class AmbientMismatch(ValueError):
    """Two formal sums live in different group algebras."""


class StructureError(ValueError):
    """A formal sum expected to be constant on classes is not."""


class FormalSum:
    """A finite ``Q``-linear combination of elements of ``G_n``; zero terms are dropped."""

    __slots__ = ("family", "terms")

    def __init__(self, family: Family, terms: Mapping[Any, Fraction | int] | None = None) -> None:
        self.family = family
        clean: dict[Any, Fraction] = {}
        for g, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[g] = c
        self.terms = clean

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, g: Any) -> Fraction:
        return self.terms.get(g, Fraction(0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self.family is other.family and self.terms == other.terms

    def __hash__(self) -> int:  # pragma: no cover - sums are not used as keys
        raise TypeError("FormalSum is unhashable")

    def _check(self, other: "FormalSum") -> None:
        if self.family is not other.family:
            raise AmbientMismatch(f"{self.family.describe()} vs {other.family.describe()}")

    def __add__(self, other: "FormalSum") -> "FormalSum":
        self._check(other)
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, Fraction(0)) + c
        return FormalSum(self.family, out)

    def scale(self, c: Fraction | int) -> "FormalSum":
        c = Fraction(c)
        return FormalSum(self.family, {g: c * v for g, v in self.terms.items()})

    def __mul__(self, other: "FormalSum") -> "FormalSum":
        return multiply(self, other)

    def support(self) -> set[Any]:
        return set(self.terms)

    def __repr__(self) -> str:
        return f"FormalSum({self.family.describe()}, {len(self.terms)} terms)"


def class_sum(family: Family, label: ClassLabel) -> FormalSum:
    return FormalSum(family, {g: 1 for g in family.class_elements(label)})


def multiply(a: FormalSum, b: FormalSum) -> FormalSum:
    """Convolution ``Σ a_x b_y · xy``."""
    a._check(b)
    out: dict[Any, Fraction] = defaultdict(Fraction)
    mul = a.family.mul
    for x, cx in a.terms.items():
        for y, cy in b.terms.items():
            out[mul(x, y)] += cx * cy
    return FormalSum(a.family, out)


def decompose(s: FormalSum) -> dict[ClassLabel, Fraction]:
    """Coefficients of a class-constant sum in the class-sum basis."""
    fam = s.family
    by_label: dict[ClassLabel, list[Fraction]] = defaultdict(list)
    for g, c in s.terms.items():
        by_label[fam.label(g)].append(c)
    out = {}
    for label, coeffs in by_label.items():
        if len(coeffs) != fam.class_size(label) or len(set(coeffs)) != 1:
            raise StructureError(f"sum is not constant on the class {label}")
        out[label] = coeffs[0]
    return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# representative trick


@lru_cache(maxsize=None)
def hecke_matchings_by_type(n: int) -> dict[Any, list[Permutation]]:
    """Coset representatives ``x_M`` of ``S_2n / B_n`` grouped by coset-type."""
    m = 2 * n
    out: dict[Any, list[Permutation]] = defaultdict(list)
    for blocks in matchings(m):
        x = matching_representative(blocks, m)
        out[coset_type(x)].append(x)
    return dict(out)


def transversal(family: Family, label: ClassLabel) -> tuple[int, list[Any]]:
    """``(|K|, T)`` with ``T`` a transversal of ``C / K`` for the class ``C``.

    For centre families ``T`` is the class itself and the multiplier is 1.
    """
    family.check_label(label)
    if isinstance(family, HeckeFamily):
        return family.tower.order(), list(hecke_matchings_by_type(family.n).get(label.value, []))
    if isinstance(family, PairFamily):
        e = family.L.identity
        reps = [PermPair(w, e) for w in family.classifier().class_elements(label.value)]
        return family.L.order(), reps
    return 1, list(family.class_elements(label))


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("DCALG_THREADS", "1") or 1)
    return max(1, threads)


def _count(family: Family, reps: Iterable[Any], targets: list[Any], right: ClassLabel) -> list[int]:
    inv, mul, label = family.inv, family.mul, family.label
    counts = [0] * len(targets)
    for x in reps:
        xi = inv(x)
        for t, z0 in enumerate(targets):
            if label(mul(xi, z0)) == right:
                counts[t] += 1
    return counts


def _count_shard(kind: str, n: int, q: int | None, pair: bool, max_elements: int,
                 reps: list[Any], targets: list[Any], right: ClassLabel) -> list[int]:
    fam = make_family(kind, n, q, max_elements)
    if pair:
        fam = fam.pair()  # type: ignore[attr-defined]
    return _count(fam, reps, targets, right)


def _sharded_count(family: Family, reps: list[Any], targets: list[Any], right: ClassLabel,
                   threads: int) -> list[int]:
    if threads <= 1 or len(reps) < 2000:
        return _count(family, reps, targets, right)
    pair = isinstance(family, PairFamily) and family.realizes_center
    chunks = [reps[i::threads] for i in range(threads)]
    totals = [0] * len(targets)
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(_count_shard, family.kind.value, family.n, family.q, pair,
                        family.max_elements, chunk, targets, right)
            for chunk in chunks
        ]
        for fut in futures:
            for i, c in enumerate(fut.result()):
                totals[i] += c
    return totals


def structure_coefficient_bruteforce(family: Family, left: ClassLabel, right: ClassLabel,
                                     target: ClassLabel, method: str = "transversal",
                                     threads: int | None = None) -> int:
    """Coefficient of the class ``target`` in ``left · right``.

    ``method="class"`` scans the whole class of ``left``; ``"transversal"``
    scans ``C / K`` and multiplies by ``|K|``.
    """
    return product_decomposition(family, left, right, [target], method, threads)[target]


def product_decomposition(family: Family, left: ClassLabel, right: ClassLabel,
                          targets: list[ClassLabel] | None = None, method: str = "transversal",
                          threads: int | None = None) -> dict[ClassLabel, int]:
    """All coefficients of ``left · right`` (restricted to ``targets`` if given)."""
    for lab in (left, right):
        family.check_label(lab)
    if targets is None:
        targets = family.labels()
    for lab in targets:
        family.check_label(lab)
    if method == "transversal":
        mult, reps = transversal(family, left)
    elif method == "class":
        mult, reps = 1, list(family.class_elements(left))
    else:
        raise ValueError(f"unknown method {method!r}")
    zs = [family.representative(t) for t in targets]
    counts = _sharded_count(family, reps, zs, right, resolve_threads(threads))
    return {t: mult * c for t, c in zip(targets, counts)}


def iter_products(family: Family, labels: Iterable[ClassLabel]) -> Iterator[tuple[ClassLabel, ClassLabel, dict]]:
    """Every ordered pair of labels with its full decomposition."""
    labels = list(labels)
    for a in labels:
        for b in labels:
            yield a, b, product_decomposition(family, a, b)


__all__ += ["iter_products"]
