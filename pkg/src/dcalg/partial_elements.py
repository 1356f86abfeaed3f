"""Partial elements ``(C, (x;k), C')`` and their product.

``C = c K_n^k`` is a left coset and ``C' = K_n^k c'`` a right coset of
``K_n^k`` in ``K_n``; ``x ∈ G_k``.  For ``pe1 = (C1, (x1;k1), C1')`` and
``pe2 = (C2, (x2;k2), C2')`` the product is::

    Σ_{h ∈ H} Σ_{i,j} 1/(n1 n2 |H|) · (C1^i, (x1 h x2; m), C2'^j)

where ``D = C1' C2`` is a ``(k1,k2)`` double coset of ``K_n``, ``H = D ∩ K_{k(D)}``,
``m = max(k1, k2, k(D))``, ``C1 = ⊔ C1^i`` and ``C2' = ⊔ C2'^j`` are the
decompositions into cosets of ``K_n^m`` and ``n_i = |K_n^{k_i}| / |K_n^m|``.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .class_sums import FormalSum, StructureError
from .cosets import coset_table
from .families import Family, Tower, format_element

__all__ = [
    "SideClass",
    "PartialElement",
    "PESum",
    "InstanceMismatch",
    "side_class",
    "partial_element",
    "pe_product",
    "pesum_product",
    "a_element",
    "a_product",
    "regroup",
    "a_product_closed_form",
    "a_product_by_expansion",
    "psi",
    "psi_sum",
    "act",
    "act_sum",
    "check_psi_homomorphism",
    "check_psi_exhaustive",
    "all_partial_elements",
    "count_partial_elements",
    "product_structure",
]


class InstanceMismatch(ValueError):
    """Partial elements from different instances (or of invalid shape)."""


# ---------------------------------------------------------------------------
# cosets of K_n^k in K_n


class _Cosets:
    """Left cosets ``g K^k`` and right cosets ``K^k g``, keyed by their least member."""

    def __init__(self, tower: Tower, k: int) -> None:
        sub = tower.sub_elements(k)
        mul = tower.mul
        self.left_of: dict[Any, Any] = {}
        self.right_of: dict[Any, Any] = {}
        self.left: dict[Any, list[Any]] = {}
        self.right: dict[Any, list[Any]] = {}
        for g in tower.elements():
            if g not in self.left_of:
                members = sorted({mul(g, s) for s in sub})
                for h in members:
                    self.left_of[h] = members[0]
                self.left[members[0]] = members
            if g not in self.right_of:
                members = sorted({mul(s, g) for s in sub})
                for h in members:
                    self.right_of[h] = members[0]
                self.right[members[0]] = members


@lru_cache(maxsize=None)
def _cosets(tower: Tower, k: int) -> _Cosets:
    return _Cosets(tower, k)


class SideClass(NamedTuple):
    """``side="left"``: ``rep·K_n^k``; ``side="right"``: ``K_n^k·rep``; ``rep`` is the least member."""

    side: str
    k: int
    rep: Any

    def to_json(self) -> dict[str, Any]:
        return {"side": self.side, "k": self.k, "rep": format_element(self.rep)}


class PartialElement(NamedTuple):
    C: SideClass
    x: Any
    k: int
    Cp: SideClass

    def to_json(self) -> dict[str, Any]:
        return {"C": self.C.to_json(), "x": format_element(self.x), "k": self.k, "Cp": self.Cp.to_json()}


def side_class(family: Family, side: str, k: int, element: Any) -> SideClass:
    """The coset of ``K_n^k`` containing ``element`` (tower form)."""
    cos = _cosets(family.tower, k)
    if side == "left":
        return SideClass("left", k, cos.left_of[element])
    if side == "right":
        return SideClass("right", k, cos.right_of[element])
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def _members(family: Family, c: SideClass) -> list[Any]:
    cos = _cosets(family.tower, c.k)
    return cos.left[c.rep] if c.side == "left" else cos.right[c.rep]


def partial_element(family: Family, c: Any, x: Any, k: int, cp: Any) -> PartialElement:
    """``(c K^k, (x;k), K^k c')`` with validation."""
    if not 0 <= k <= family.n:
        raise InstanceMismatch(f"k={k} outside 0..{family.n}")
    if not family.contains(x) or family.level(x) > k:
        raise InstanceMismatch(f"{format_element(x)} is not in G_{k}")
    return PartialElement(side_class(family, "left", k, c), x, k, side_class(family, "right", k, cp))


def _check_pe(family: Family, pe: PartialElement) -> None:
    if pe.C.side != "left" or pe.Cp.side != "right" or not pe.C.k == pe.Cp.k == pe.k:
        raise InstanceMismatch(f"malformed partial element {pe}")
    if not 0 <= pe.k <= family.n or not family.contains(pe.x) or family.level(pe.x) > pe.k:
        raise InstanceMismatch(f"partial element {pe} does not belong to {family.describe()}")


class PESum:
    """Finite ``Q``-combination of partial elements; zero terms are dropped."""

    __slots__ = ("family", "terms")

    def __init__(self, family: Family, terms: dict[PartialElement, Fraction] | None = None) -> None:
        self.family = family
        self.terms = {pe: Fraction(c) for pe, c in (terms or {}).items() if c}

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PESum):
            return NotImplemented
        return self.family is other.family and self.terms == other.terms

    def __repr__(self) -> str:
        return f"PESum({self.family.describe()}, {len(self.terms)} terms)"

    def __add__(self, other: "PESum") -> "PESum":
        if self.family is not other.family:
            raise InstanceMismatch("partial sums from different instances")
        out = dict(self.terms)
        for pe, c in other.terms.items():
            out[pe] = out.get(pe, Fraction(0)) + c
        return PESum(self.family, out)

    def to_json(self) -> list[dict[str, Any]]:
        return [
            {**pe.to_json(), "num": str(c.numerator), "den": str(c.denominator)}
            for pe, c in sorted(self.terms.items(), key=lambda t: _pe_key(t[0]))
        ]


def _pe_key(pe: PartialElement) -> tuple:
    return (pe.k, pe.C.rep, pe.x, pe.Cp.rep)


# ---------------------------------------------------------------------------
# the product


@lru_cache(maxsize=None)
def _split(tower: Tower, side: str, k: int, rep: Any, m: int) -> tuple[SideClass, ...]:
    """Decomposition of a coset of ``K^k`` into cosets of ``K^m`` (ascending representatives)."""
    members = _cosets(tower, k).left[rep] if side == "left" else _cosets(tower, k).right[rep]
    target = _cosets(tower, m)
    of = target.left_of if side == "left" else target.right_of
    return tuple(SideClass(side, m, r) for r in sorted({of[g] for g in members}))


def product_structure(tower: Tower, k1: int, cp_rep: Any, c_rep: Any, k2: int) -> tuple[int, list[Any]]:
    """``(k(D), D ∩ K_{k(D)})`` for ``D = K^{k1} cp c K^{k2}``."""
    table = coset_table(tower, k1, k2)
    idx = table.index(tower.mul(cp_rep, c_rep))
    return table.levels[idx], table.minimal[idx]


def _index_ratio(tower: Tower, k: int, m: int) -> int:
    a, b = tower.sub_order(k), tower.sub_order(m)
    if a % b:
        raise ArithmeticError(f"|K^{k}| = {a} is not divisible by |K^{m}| = {b}")
    return a // b


def pe_product(family: Family, pe1: PartialElement, pe2: PartialElement) -> PESum:
    _check_pe(family, pe1)
    _check_pe(family, pe2)
    return PESum(family, _product_terms(family, pe1, pe2))


def _product_terms(family: Family, pe1: PartialElement, pe2: PartialElement) -> dict[PartialElement, Fraction]:
    T = family.tower
    k1, k2 = pe1.k, pe2.k
    mD, H = product_structure(T, k1, pe1.Cp.rep, pe2.C.rep, k2)
    m = max(k1, k2, mD)
    if m > family.n:
        raise InstanceMismatch(f"product level {m} exceeds n={family.n}")
    n1, n2 = _index_ratio(T, k1, m), _index_ratio(T, k2, m)
    coef = Fraction(1, n1 * n2 * len(H))
    left = _split(T, "left", k1, pe1.C.rep, m)
    right = _split(T, "right", k2, pe2.Cp.rep, m)
    mul, from_k = family.mul, family.from_k
    out: dict[PartialElement, Fraction] = {}
    for h in H:
        y = mul(mul(pe1.x, from_k(h)), pe2.x)
        for ci in left:
            for cj in right:
                pe = PartialElement(ci, y, m, cj)
                out[pe] = out.get(pe, Fraction(0)) + coef
    return out


def pesum_product(a: PESum, b: PESum) -> PESum:
    """Bilinear extension of :func:`pe_product`."""
    if a.family is not b.family:
        raise InstanceMismatch("partial sums from different instances")
    out: dict[PartialElement, Fraction] = defaultdict(Fraction)
    for p1, c1 in a.terms.items():
        for p2, c2 in b.terms.items():
            for pe, c in _product_terms(a.family, p1, p2).items():
                out[pe] += c1 * c2 * c
    return PESum(a.family, out)


def a_element(family: Family, x: Any, k: int) -> PESum:
    """``Σ_C Σ_C' (C, (x;k), C')`` over all left and right cosets of ``K_n^k``."""
    if not 0 <= k <= family.n or not family.contains(x) or family.level(x) > k:
        raise InstanceMismatch(f"{format_element(x)} is not in G_{k}")
    cos = _cosets(family.tower, k)
    one = Fraction(1)
    return PESum(family, {
        PartialElement(SideClass("left", k, cl), x, k, SideClass("right", k, cr)): one
        for cl in cos.left for cr in cos.right
    })


def a_product(family: Family, x1: Any, k1: int, x2: Any, k2: int) -> PESum:
    return pesum_product(a_element(family, x1, k1), a_element(family, x2, k2))


def regroup(s: PESum) -> dict[tuple[Any, int], Fraction]:
    """Coefficients of ``s`` in the basis ``a_{(x;k)}``; raises if ``s`` is not in their span."""
    fam = s.family
    by_xk: dict[tuple[Any, int], list[Fraction]] = defaultdict(list)
    for pe, c in s.terms.items():
        by_xk[(pe.x, pe.k)].append(c)
    out = {}
    for (x, k), coeffs in by_xk.items():
        cos = _cosets(fam.tower, k)
        if len(coeffs) != len(cos.left) * len(cos.right) or len(set(coeffs)) != 1:
            raise StructureError(f"the (x;k) = ({format_element(x)};{k}) part is not a multiple of a_(x;k)")
        out[(x, k)] = coeffs[0]
    return out


def a_product_closed_form(family: Family, x1: Any, k1: int, x2: Any, k2: int, x: Any, k: int) -> Fraction:
    """Closed form of the coefficient of ``a_{(x;k)}`` in ``a_{(x1;k1)} · a_{(x2;k2)}``.

    ``|K_n||K_n^k| / (|K_n^{k1}||K_n^{k2}||K^{k1} X K^{k2} ∩ K_m|)`` when
    ``X = x1⁻¹ x x2⁻¹ ∈ K_n`` is ``(k1,k2)``-minimal and ``k = max(k1, k2, m)``;
    otherwise 0.
    """
    for g, kk in ((x1, k1), (x2, k2), (x, k)):
        if not family.contains(g) or family.level(g) > kk:
            raise InstanceMismatch(f"{format_element(g)} is not in G_{kk}")
    T = family.tower
    X = family.mul(family.mul(family.inv(x1), x), family.inv(x2))
    y = _to_tower(family, X)
    if y is None:
        return Fraction(0)
    table = coset_table(T, k1, k2)
    if not table.is_minimal(y):
        return Fraction(0)
    m = table.m_value(y)
    if k != max(k1, k2, m):
        return Fraction(0)
    inter = len(table.minimal_part(y))
    return Fraction(T.order() * T.sub_order(k), T.sub_order(k1) * T.sub_order(k2) * inter)


def _to_tower(family: Family, g: Any) -> Any:
    """The element of ``K_n`` whose image in ``G_n`` is ``g``, or ``None``."""
    left = getattr(g, "left", None)
    if left is not None:
        cand = left
        if family.tower.contains(cand) and family.from_k(cand) == g:
            return cand
        return None
    return g if family.tower.contains(g) else None


def a_product_by_expansion(family: Family, x1: Any, k1: int, x2: Any, k2: int) -> dict[tuple[Any, int], Fraction]:
    """Coefficients of ``a_{(x1;k1)} · a_{(x2;k2)}`` read off its terms at the trivial cosets.

    The product is ``K_n × K_n``-invariant, so the coefficient of ``a_{(x;k)}``
    equals that of ``(K^k, (x;k), K^k)``; only ``pe1`` with ``C1 = K^{k1}`` and
    ``pe2`` with ``C2' = K^{k2}`` contribute to such terms.
    """
    T = family.tower
    e = T.identity
    c1 = side_class(family, "left", k1, e)
    c2p = side_class(family, "right", k2, e)
    cos1, cos2 = _cosets(T, k1), _cosets(T, k2)
    out: dict[tuple[Any, int], Fraction] = defaultdict(Fraction)
    for cp in cos1.right:
        pe1 = PartialElement(c1, x1, k1, SideClass("right", k1, cp))
        for c in cos2.left:
            pe2 = PartialElement(SideClass("left", k2, c), x2, k2, c2p)
            for pe, coef in _product_terms(family, pe1, pe2).items():
                if pe.C.rep == e and pe.Cp.rep == e:
                    out[(pe.x, pe.k)] += coef
    return {key: v for key, v in out.items() if v}


# ---------------------------------------------------------------------------
# ψ and the K_n × K_n action


def psi(family: Family, pe: PartialElement) -> FormalSum:
    """``ψ(C, (x;k), C') = (1/|C||C'|) Σ c x c'``."""
    _check_pe(family, pe)
    C, Cp = _members(family, pe.C), _members(family, pe.Cp)
    mul, from_k = family.mul, family.from_k
    w = Fraction(1, len(C) * len(Cp))
    out: dict[Any, Fraction] = defaultdict(Fraction)
    for c in C:
        cx = mul(from_k(c), pe.x)
        for cp in Cp:
            out[mul(cx, from_k(cp))] += w
    return FormalSum(family, out)


def psi_sum(s: PESum) -> FormalSum:
    total = FormalSum(s.family)
    for pe, c in s.terms.items():
        total = total + psi(s.family, pe).scale(c)
    return total


def act(family: Family, a: Any, b: Any, pe: PartialElement) -> PartialElement:
    """``(a, b)·(C, (x;k), C') = (a C, (x;k), C' b⁻¹)`` for ``a, b ∈ K_n``."""
    T = family.tower
    return PartialElement(
        side_class(family, "left", pe.k, T.mul(a, pe.C.rep)),
        pe.x,
        pe.k,
        side_class(family, "right", pe.k, T.mul(pe.Cp.rep, T.inv(b))),
    )


def act_sum(family: Family, a: Any, b: Any, s: PESum) -> PESum:
    return PESum(family, {act(family, a, b, pe): c for pe, c in s.terms.items()})


# ---------------------------------------------------------------------------
# enumeration and checks


def all_partial_elements(family: Family, ks: Iterable[int] | None = None) -> Iterator[PartialElement]:
    """Every partial element with ``k`` in ``ks`` (default ``1..n``)."""
    T = family.tower
    for k in (range(1, family.n + 1) if ks is None else ks):
        cos = _cosets(T, k)
        xs = list(family.level_elements(k))
        for cl in cos.left:
            for x in xs:
                for cr in cos.right:
                    yield PartialElement(SideClass("left", k, cl), x, k, SideClass("right", k, cr))


def count_partial_elements(family: Family, ks: Iterable[int] | None = None) -> int:
    """``Σ_k [K_n : K_n^k]² |G_k|`` from the orders alone."""
    T = family.tower
    total = 0
    for k in (range(1, family.n + 1) if ks is None else ks):
        idx = T.order() // T.sub_order(k)
        total += idx * idx * sum(1 for _ in family.level_elements(k))
    return total


def check_equivariance(family: Family, pes: Iterable[PartialElement],
                       actors: Iterable[tuple[Any, Any]]) -> tuple[PartialElement, Any, Any] | None:
    """First ``(pe, a, b)`` with ``ψ((a,b)·pe) ≠ a ψ(pe) b⁻¹``, or ``None``."""
    mul, from_k, inv = family.mul, family.from_k, family.inv
    actors = list(actors)
    for pe in pes:
        base = psi(family, pe)
        for a, b in actors:
            ga, gb = from_k(a), inv(from_k(b))
            moved = FormalSum(family, {mul(mul(ga, g), gb): c for g, c in base.terms.items()})
            if psi(family, act(family, a, b, pe)) != moved:
                return pe, a, b
    return None


def check_psi_homomorphism(family: Family, pairs: Sequence[tuple[PartialElement, PartialElement]]) -> bool:
    """``ψ(pe1 · pe2) = ψ(pe1) ψ(pe2)`` as exact formal sums for every given pair."""
    for pe1, pe2 in pairs:
        if psi_sum(pe_product(family, pe1, pe2)) != psi(family, pe1) * psi(family, pe2):
            return False
    return True


def random_pairs(family: Family, count: int, seed: int = 0,
                 ks: Iterable[int] | None = None) -> list[tuple[PartialElement, PartialElement]]:
    pes = list(all_partial_elements(family, ks))
    rng = random.Random(seed)
    return [(rng.choice(pes), rng.choice(pes)) for _ in range(count)]


__all__ += ["random_pairs", "check_equivariance"]


@dataclass
class ExhaustiveResult:
    pairs: int
    failures: int
    witness: tuple[PartialElement, PartialElement] | None


def check_psi_exhaustive(family: Family, ks: Iterable[int] | None = None) -> ExhaustiveResult:
    """``ψ(pe1 · pe2) = ψ(pe1) ψ(pe2)`` for all pairs, in scaled integer arithmetic.

    With ``L = [C1] x1``, ``R = x2 [C2']`` and ``D = C1' C2``, both sides are
    ``L * (·) * R`` in ``Z[G_n]``; after clearing denominators the difference is
    ``L * Δ * R`` with ``Δ = |K^{k1}||K^{k2}|·[H] − |H|·[C1'][C2]`` where ``[H]``
    is assembled from the terms the product produces.  Every ``(L, R)`` is then
    tested against each ``Δ`` by one matrix product.
    """
    T = family.tower
    elems = list(family.elements())
    index = {g: i for i, g in enumerate(elems)}
    N = len(elems)
    mul, inv, from_k = family.mul, family.inv, family.from_k
    ld = np.array([[index[mul(inv(a), g)] for g in elems] for a in elems], dtype=np.int64)

    def conv(u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return u @ v[ld]

    def indicator(members: Iterable[Any]) -> np.ndarray:
        v = np.zeros(N, dtype=np.int64)
        for c in members:
            v[index[from_k(c)]] += 1
        return v

    def delta(g: Any) -> np.ndarray:
        v = np.zeros(N, dtype=np.int64)
        v[index[g]] = 1
        return v

    ks = list(range(1, family.n + 1) if ks is None else ks)
    cos = {k: _cosets(T, k) for k in ks}
    xs = {k: list(family.level_elements(k)) for k in ks}
    left_rows, right_rows = {}, {}
    for k in ks:
        lr, rr = [], []
        for cl, members in cos[k].left.items():
            ind = indicator(members)
            for x in xs[k]:
                lr.append(((cl, x), conv(ind, delta(x))))
        for cr, members in cos[k].right.items():
            ind = indicator(members)
            for x in xs[k]:
                rr.append(((cr, x), conv(delta(x), ind)))
        left_rows[k], right_rows[k] = lr, rr

    pairs = failures = 0
    witness = None
    for k1 in ks:
        Lmat = np.stack([v for _, v in left_rows[k1]])
        for k2 in ks:
            Rmat = np.stack([v for _, v in right_rows[k2]])
            # Rt[a, r, g] = R_r[a⁻¹ g]
            Rt = np.transpose(Rmat[:, ld], (1, 0, 2)).reshape(N, -1)
            for cp, cp_members in cos[k1].right.items():
                ind_cp = indicator(cp_members)
                for c, c_members in cos[k2].left.items():
                    mD, H = product_structure(T, k1, cp, c, k2)
                    m = max(k1, k2, mD)
                    _check_pieces(T, k1, k2, m)
                    hvec = indicator(H)
                    d = T.sub_order(k1) * T.sub_order(k2) * hvec - len(H) * conv(ind_cp, indicator(c_members))
                    res = (Lmat @ d[ld]) @ Rt
                    pairs += res.shape[0] * Rmat.shape[0]
                    bad = np.argwhere(res.reshape(res.shape[0], Rmat.shape[0], N).any(axis=2))
                    failures += len(bad)
                    if len(bad) and witness is None:
                        (cl, x1), (cr, x2) = left_rows[k1][bad[0][0]][0], right_rows[k2][bad[0][1]][0]
                        witness = (
                            PartialElement(SideClass("left", k1, cl), x1, k1, SideClass("right", k1, cp)),
                            PartialElement(SideClass("left", k2, c), x2, k2, SideClass("right", k2, cr)),
                        )
    return ExhaustiveResult(pairs, failures, witness)


@lru_cache(maxsize=None)
def _check_pieces(T: Tower, k1: int, k2: int, m: int) -> None:
    """The coset decompositions used by the product partition their cosets."""
    for k, side in ((k1, "left"), (k2, "right")):
        cos = _cosets(T, k)
        target = _cosets(T, m)
        table = cos.left if side == "left" else cos.right
        pieces_of = target.left if side == "left" else target.right
        ratio = _index_ratio(T, k, m)
        for rep, members in table.items():
            pieces = _split(T, side, k, rep, m)
            got = sorted(g for p in pieces for g in pieces_of[p.rep])
            if got != members or len(pieces) != ratio:
                raise AssertionError(f"coset decomposition of {rep} into K^{m} cosets is not a partition")


__all__ += ["ExhaustiveResult"]
