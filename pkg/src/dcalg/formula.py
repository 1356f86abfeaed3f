"""Structure coefficients through the closed-form sums over minimal elements.

For a double-class family with operands ``x1, x2`` of levels ``k1, k2`` and a
target class ``x̄3``::

    c = |x̄1||x̄2||K_n^{k1}||K_n^{k2}| / (|K_n||x̄3|)
        · Σ 1 / (|K_n^k| · |K_n^{k1} X K_n^{k2} ∩ K_{m(X)}|)

where ``X`` runs over the ``(k1,k2)``-minimal elements of ``K_n`` with
``x1 X x2 ∈ x̄3`` and ``k = max(k1, k2, m(X))``.  Every summand corresponds to
the element ``x = x1 X x2`` of ``G_k``.  The centre version replaces
``x1 X x2`` by the conjugate product ``f t h t⁻¹``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .cosets import coset_table
from .families import ClassLabel, Family, Kind, format_element

__all__ = [
    "UnsupportedFamily",
    "Term",
    "CoefficientBreakdown",
    "coefficient_via_theorem",
    "center_coefficient_via_theorem",
    "theorem_coefficient",
]


class UnsupportedFamily(ValueError):
    """The closed form needs the bound on ``m``, which fails for this family."""


@dataclass(frozen=True)
class Term:
    k: int
    x: Any
    intersection: int
    contribution: Fraction

    def to_json(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "x": format_element(self.x),
            "intersection": self.intersection,
            "num": str(self.contribution.numerator),
            "den": str(self.contribution.denominator),
        }


@dataclass
class CoefficientBreakdown:
    family: str
    left: ClassLabel
    right: ClassLabel
    target: ClassLabel
    levels: tuple[int, int, int]
    prefactor: Fraction
    terms: list[Term] = field(default_factory=list)

    @property
    def total(self) -> Fraction:
        return self.prefactor * sum((t.contribution for t in self.terms), Fraction(0))

    def to_json(self) -> dict[str, Any]:
        tot = self.total
        return {
            "family": self.family,
            "left": str(self.left),
            "right": str(self.right),
            "target": str(self.target),
            "levels": list(self.levels),
            "prefactor": {"num": str(self.prefactor.numerator), "den": str(self.prefactor.denominator)},
            "total": {"num": str(tot.numerator), "den": str(tot.denominator)},
            "terms": [t.to_json() for t in self.terms],
        }


def _minimal_level(family: Family, g: Any) -> tuple[ClassLabel, Any, int]:
    """Label, an element of the class at the least level, and that level."""
    label = family.label(g)
    k = family.label_level(label)
    if family.level(g) > k:
        g = family.representative(label)
    return label, g, k


def _reject(family: Family) -> None:
    if family.kind is Kind.GL:
        raise UnsupportedFamily("gl towers violate the bound m ≤ k1 + k2; the closed form does not apply")


def coefficient_via_theorem(family: Family, x1: Any, x2: Any, x3: Any) -> CoefficientBreakdown:
    """Coefficient of ``x̄3`` in ``x̄1 · x̄2``; centre families use the conjugation form."""
    _reject(family)
    if family.is_center:
        return center_coefficient_via_theorem(family, x1, x2, x3)
    l1, x1, k1 = _minimal_level(family, x1)
    l2, x2, k2 = _minimal_level(family, x2)
    l3, _, k3 = _minimal_level(family, x3)
    T = family.tower
    table = coset_table(T, k1, k2)
    prefactor = Fraction(
        family.class_size(l1) * family.class_size(l2) * T.sub_order(k1) * T.sub_order(k2),
        T.order() * family.class_size(l3),
    )
    mul, from_k, label = family.mul, family.from_k, family.label
    terms = []
    for X in T.elements():
        if not table.is_minimal(X):
            continue
        x = mul(mul(x1, from_k(X)), x2)
        if label(x) != l3:
            continue
        terms.append(_term(T, table, X, x, k1, k2))
    return CoefficientBreakdown(family.describe(), l1, l2, l3, (k1, k2, k3), prefactor, terms)


def center_coefficient_via_theorem(family: Family, f: Any, h: Any, g: Any) -> CoefficientBreakdown:
    """Coefficient of ``C_g`` in ``C_f · C_h`` through the sum over minimal ``t ∈ G_n``."""
    _reject(family)
    if not family.is_center:
        raise UnsupportedFamily(f"{family.kind.value} is not a centre family")
    l1, f, k1 = _minimal_level(family, f)
    l2, h, k2 = _minimal_level(family, h)
    l3, _, k3 = _minimal_level(family, g)
    T = family.tower
    table = coset_table(T, k1, k2)
    prefactor = Fraction(
        family.class_size(l1) * family.class_size(l2) * T.sub_order(k1) * T.sub_order(k2),
        T.order() * family.class_size(l3),
    )
    mul, inv, label = T.mul, T.inv, family.label
    terms = []
    for t in T.elements():
        if not table.is_minimal(t):
            continue
        if label(mul(mul(mul(f, t), h), inv(t))) != l3:
            continue
        terms.append(_term(T, table, t, mul(mul(f, t), h), k1, k2))
    return CoefficientBreakdown(family.describe(), l1, l2, l3, (k1, k2, k3), prefactor, terms)


def _term(T: Any, table: Any, X: Any, x: Any, k1: int, k2: int) -> Term:
    m = table.m_value(X)
    k = max(k1, k2, m)
    inter = len(table.minimal_part(X))
    return Term(k, x, inter, Fraction(1, T.sub_order(k) * inter))


def theorem_coefficient(family: Family, left: ClassLabel, right: ClassLabel,
                        target: ClassLabel) -> CoefficientBreakdown:
    """:func:`coefficient_via_theorem` on the constructed class representatives."""
    return coefficient_via_theorem(
        family, family.representative(left), family.representative(right), family.representative(target)
    )
