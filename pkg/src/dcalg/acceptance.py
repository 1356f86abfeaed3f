"""The acceptance suite: ten exact checks shared by ``dcalg selftest`` and the tests."""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Any, Callable, Iterable

from .class_sums import product_decomposition
from .families import Family, Kind, make_family
from .formula import center_coefficient_via_theorem, theorem_coefficient
from .hypotheses import check_all, check_hypothesis, gl_counterexample
from .matrices import Mat, field as finite_field
from .partial_elements import (
    all_partial_elements,
    check_equivariance,
    check_psi_exhaustive,
    check_psi_homomorphism,
    a_product_closed_form,
    a_product_by_expansion,
    random_pairs,
)
from .partitions import PairPartition, partitions, proper_partitions
from .perms import from_cycles
from .polynomiality import degree_bound, proper_label, verify_polynomiality

__all__ = ["Part", "CriterionResult", "CRITERIA", "run_criterion", "run_all", "format_line"]


@dataclass
class Part:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CriterionResult:
    number: int
    title: str
    parts: list[Part] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.parts)

    def part(self, name: str) -> Part:
        for p in self.parts:
            if p.name == name:
                return p
        raise KeyError(name)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.parts.append(Part(name, bool(passed), detail))

    def to_json(self) -> dict[str, Any]:
        return {
            "criterion": self.number,
            "title": self.title,
            "verdict": "pass" if self.passed else "fail",
            "parts": [{"name": p.name, "verdict": "pass" if p.passed else "fail", "detail": p.detail}
                      for p in self.parts],
        }


def format_line(res: CriterionResult) -> str:
    failed = [p.name for p in res.parts if not p.passed]
    tail = f" (failed: {', '.join(failed)})" if failed else ""
    return f"criterion {res.number:>2} {'PASS' if res.passed else 'FAIL'} {res.title}{tail}"


# ---------------------------------------------------------------------------
# 1-2: worked products


def criterion_1() -> CriterionResult:
    res = CriterionResult(1, "hecke: coset-type (2) squared at n = 4, 5")
    for n in (4, 5):
        fam = make_family(Kind.HECKE, n)
        two = fam.parse_label("coset:2")
        unit = 2**n * factorial(n)
        expected = {"coset:∅": unit * n * (n - 1), "coset:2": unit, "coset:3": 3 * unit, "coset:2,2": 2 * unit}
        got = product_decomposition(fam, two, two)
        bad = [t for t, v in expected.items() if got[fam.parse_label(t)] != v]
        nonzero = {lab for lab, v in got.items() if v}
        extra = nonzero - {fam.parse_label(t) for t in expected}
        res.add(f"n={n}", not bad and not extra, f"mismatch {bad}, unexpected {sorted(map(str, extra))}")
    return res


def criterion_2() -> CriterionResult:
    res = CriterionResult(2, "centre of S_n: transposition class squared at n = 4..7")
    for n in range(4, 8):
        fam = make_family(Kind.CENTER_SYM, n)
        two = fam.parse_label("ct:2")
        expected = {"ct:∅": n * (n - 1) // 2, "ct:3": 3, "ct:2,2": 2}
        got = {lab: v for lab, v in product_decomposition(fam, two, two).items() if v}
        want = {fam.parse_label(t): v for t, v in expected.items()}
        res.add(f"n={n}", got == want, str({str(k): v for k, v in got.items()}))
    return res


# ---------------------------------------------------------------------------
# 3: closed form against brute force


THEOREM_RANGES = ((Kind.CENTER_SYM, 6), (Kind.CENTER_HYP, 3), (Kind.HECKE, 4), (Kind.DIAG_PAIR, 5))


def theorem_sweep(kind: Kind, n_max: int, operand_total: int = 4) -> tuple[int, list[str]]:
    """Compare the closed form with brute force on every admissible triple."""
    checked, bad = 0, []
    for n in range(1, n_max + 1):
        fam = make_family(kind, n)
        labels = fam.labels()
        for left, right in itertools.product(labels, repeat=2):
            if left.proper_size + right.proper_size > operand_total:
                continue
            brute = product_decomposition(fam, left, right)
            for target in labels:
                checked += 1
                if theorem_coefficient(fam, left, right, target).total != brute[target]:
                    bad.append(f"n={n} {left} {right} {target}")
    return checked, bad


def criterion_3() -> CriterionResult:
    res = CriterionResult(3, "closed form equals brute force on all small triples")
    for kind, n_max in THEOREM_RANGES:
        checked, bad = theorem_sweep(kind, n_max)
        res.add(kind.value, not bad and checked > 0, f"{checked} triples, {len(bad)} mismatches {bad[:3]}")
    fam = make_family(Kind.CENTER_SYM, 4)
    f = from_cycles([(1, 2)], 4)
    g = from_cycles([(1, 2), (3, 4)], 4)
    br = center_coefficient_via_theorem(fam, f, f, g)
    inters = sorted({t.intersection for t in br.terms})
    res.add("worked example", br.total == 2 and inters == [4], f"value {br.total}, intersections {inters}")
    return res


# ---------------------------------------------------------------------------
# 4-5: hypotheses


def criterion_4() -> CriterionResult:
    res = CriterionResult(4, "hypotheses on the S-tower and the B-tower")
    for name, kind, n_max in (("S-tower", Kind.CENTER_SYM, 5), ("B-tower", Kind.HECKE, 3)):
        for rep in check_all(kind, range(1, n_max + 1), k_max=3):
            if rep.hypothesis == "H'0":
                continue
            res.add(f"{name} {rep.hypothesis}", rep.verdict, str(rep.witness or ""))
    for kind, n_max in ((Kind.CENTER_SYM, 6), (Kind.CENTER_HYP, 3)):
        rep = check_hypothesis(kind, "H'0", range(1, n_max + 1))
        res.add(f"{kind.value} H'0", rep.verdict, str(rep.witness or ""))
    return res


def criterion_5() -> CriterionResult:
    res = CriterionResult(5, "GL_5(F_2) matrix has no double-class element at level below 4")
    out = gl_counterexample()
    res.add("k_min >= 4", out["k_min"] >= 4 and out["h4_fails"],
            f"k_min {out['k_min']}, orbit {out['orbit_size']}, candidates {out['candidates']}")
    return res


# ---------------------------------------------------------------------------
# 6: GL centre coefficient


def gl_identity_coefficient(n: int, q: int, a: int) -> int:
    """Coefficient of the identity in ``C(diag(a,1,..,1)) · C(diag(a⁻¹,1,..,1))``."""
    fam = make_family(Kind.GL, n, q=q)
    F = finite_field(q)
    left = fam.label(Mat.diag(q, [a] + [1] * (n - 1)))
    right = fam.label(Mat.diag(q, [F.inv[a]] + [1] * (n - 1)))
    unit = fam.label(Mat.identity(q, n))
    return product_decomposition(fam, left, right, [unit])[unit]


def criterion_6() -> CriterionResult:
    res = CriterionResult(6, "GL centre: identity coefficient q^(n-1)(q^n-1)/(q-1)")
    got = gl_identity_coefficient(2, 3, 2)
    res.add("gl2-f3", got == 12, f"value {got}")
    # The class pair needs a != 1 in F_q^*; for prime q the units are 1..q-1.
    q = 2
    candidates = [a for a in range(1, q) if a != 1]
    values = [gl_identity_coefficient(3, q, a) for a in candidates]
    fam = make_family(Kind.GL, 3, q=2)
    sizes = sorted(fam.class_size(lab) for lab in fam.labels())
    res.add("gl3-f2", 28 in values,
            f"no a != 1 in F_2^*; identity coefficients |C| over all classes of GL_3(F_2) are {sizes}")
    return res


# ---------------------------------------------------------------------------
# 7-8: partial elements


def criterion_7() -> CriterionResult:
    res = CriterionResult(7, "psi is multiplicative and equivariant")
    hecke = make_family(Kind.HECKE, 2)
    ex = check_psi_exhaustive(hecke)
    res.add("B-tower n=2 product", ex.failures == 0 and ex.pairs > 0, f"{ex.pairs} pairs, {ex.failures} failures")
    K = list(hecke.tower.elements())
    bad = check_equivariance(hecke, all_partial_elements(hecke), list(itertools.product(K, K)))
    res.add("B-tower n=2 equivariance", bad is None, str(bad or ""))
    sym = make_family(Kind.CENTER_SYM, 3).pair()
    res.add("S-tower n=3 product", check_psi_homomorphism(sym, random_pairs(sym, 120, seed=3)), "120 random pairs")
    pes = list(all_partial_elements(sym))
    sample = random.Random(5).sample(pes, 120)
    Ks = list(sym.tower.elements())
    bad = check_equivariance(sym, sample, list(itertools.product(Ks, Ks)))
    res.add("S-tower n=3 equivariance", bad is None, str(bad or ""))
    return res


def a_product_sweep(family: Family, k_max: int) -> tuple[int, list[str]]:
    """Closed form against the regrouped expansion for all ``x1, x2, x`` and ``k``."""
    checked, bad = 0, []
    targets = [(x, k) for k in range(1, family.n + 1) for x in family.level_elements(k)]
    for k1, k2 in itertools.product(range(1, k_max + 1), repeat=2):
        for x1 in family.level_elements(k1):
            for x2 in family.level_elements(k2):
                got = a_product_by_expansion(family, x1, k1, x2, k2)
                for x, k in targets:
                    checked += 1
                    want = a_product_closed_form(family, x1, k1, x2, k2, x, k)
                    if got.get((x, k), Fraction(0)) != want:
                        bad.append(f"{x1};{k1} {x2};{k2} -> {x};{k}")
    return checked, bad


def criterion_8() -> CriterionResult:
    res = CriterionResult(8, "closed form for products of a-elements")
    checked, bad = a_product_sweep(make_family(Kind.HECKE, 2), 2)
    res.add("B-tower n=2", not bad and checked > 0, f"{checked} comparisons, {len(bad)} mismatches {bad[:3]}")
    return res


# ---------------------------------------------------------------------------
# 9: polynomiality


def _proper_family_labels(kind: Kind, size: int) -> list[str]:
    if kind is Kind.CENTER_SYM:
        return [f"ct:{p}" for p in proper_partitions(size)]
    if kind is Kind.HECKE:
        return [f"coset:{p}" for p in proper_partitions(size)]
    if kind is Kind.CENTER_HYP:
        return [f"btype:{PairPartition(lam, d)}" for s in range(size + 1) for a in range(s + 1)
                for lam in proper_partitions(a, a) for d in partitions(s - a)]
    return [f"ipair:{i}:({lam})" for s in range(1, size + 1) for i in range(1, s + 1)
            for lam in proper_partitions(s - i, s - i)]


@dataclass
class PolySweep:
    checked: int
    skipped: int
    failures: list[str]


def polynomiality_sweep(kind: Kind, operand_total: int, fit_max: int | None = None,
                        n_max: int | None = None, normalization: str = "stated") -> PolySweep:
    """Certify every proper triple whose operand sizes sum to at most ``operand_total``.

    A triple is skipped when its fit would pass ``fit_max`` or any of its
    points would pass ``n_max``.
    """
    labels = _proper_family_labels(kind, operand_total + (1 if kind is Kind.DIAG_PAIR else 0))
    holdouts = 2 if kind is Kind.CENTER_SYM else 1
    shift = 1 if kind is Kind.DIAG_PAIR else 0
    size = {lab: proper_label(kind, lab).proper_size for lab in labels}
    checked = skipped = 0
    failures = []
    for a, b in itertools.product(labels, repeat=2):
        if size[a] + size[b] - 2 * shift > operand_total:
            continue
        for c in labels:
            bound = degree_bound(kind, a, b, c, normalization)
            start = max(size[a], size[b], size[c], 1)
            fit_end = start + max(bound, -1)
            if (fit_max is not None and fit_end > fit_max) or (n_max is not None and fit_end + holdouts > n_max):
                skipped += 1
                continue
            cert = verify_polynomiality(kind, a, b, c, normalization=normalization)
            checked += 1
            if not cert.verdict:
                failures.append(f"{a} {b} {c}: {cert.polynomial} (bound {bound})")
    return PolySweep(checked, skipped, failures)


def criterion_9() -> CriterionResult:
    res = CriterionResult(9, "polynomiality certificates")
    runs = (
        ("center-sym", Kind.CENTER_SYM, dict(operand_total=4)),
        ("hecke", Kind.HECKE, dict(operand_total=4, fit_max=6)),
        ("center-hyp", Kind.CENTER_HYP, dict(operand_total=2, fit_max=4)),
        ("diag-pair", Kind.DIAG_PAIR, dict(operand_total=4, n_max=6)),
    )
    for name, kind, kw in runs:
        sw = polynomiality_sweep(kind, **kw)
        res.add(name, not sw.failures and sw.checked > 0,
                f"{sw.checked} triples, {sw.skipped} out of range, failures {sw.failures[:3]}")
    return res


# ---------------------------------------------------------------------------
# 10: structure


STRUCTURE_RANGES: tuple[tuple[Kind, int, int | None], ...] = (
    (Kind.CENTER_SYM, 6, None), (Kind.CENTER_HYP, 4, None), (Kind.HECKE, 4, None),
    (Kind.DIAG_PAIR, 5, None), (Kind.GL, 2, 2), (Kind.GL, 2, 3), (Kind.GL, 3, 2),
)


def class_size_check(kind: Kind, n: int, q: int | None = None) -> tuple[bool, str]:
    """Formula sizes against a census of the whole group, and their sum against the order."""
    fam = make_family(kind, n, q=q)
    census = Counter(fam.label(g) for g in fam.elements())
    formula = {lab: fam.class_size(lab) for lab in fam.labels()}
    ok = census == Counter(formula) and sum(formula.values()) == fam.order()
    return ok, f"{len(formula)} classes, order {fam.order()}"


def commutes(kind: Kind, n: int) -> tuple[bool, str]:
    fam = make_family(kind, n)
    labels = fam.labels()
    for a, b in itertools.combinations(labels, 2):
        if product_decomposition(fam, a, b) != product_decomposition(fam, b, a):
            return False, f"{a} and {b} do not commute"
    return True, f"{len(labels)} labels"


def criterion_10() -> CriterionResult:
    res = CriterionResult(10, "class sizes, class partitions and commutativity")
    for kind, n_max, q in STRUCTURE_RANGES:
        ns = [n_max] if kind is Kind.GL else range(1, n_max + 1)
        for n in ns:
            ok, detail = class_size_check(kind, n, q)
            res.add(f"sizes {kind.value} n={n}" + ("" if q is None else f" q={q}"), ok, detail)
    for kind, n_max in ((Kind.HECKE, 3), (Kind.DIAG_PAIR, 4)):
        for n in range(1, n_max + 1):
            ok, detail = commutes(kind, n)
            res.add(f"commutes {kind.value} n={n}", ok, detail)
    return res


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}


def run_criterion(number: int) -> CriterionResult:
    return CRITERIA[number]()


def run_all(numbers: Iterable[int] | None = None,
            report: Callable[[CriterionResult], None] | None = None) -> list[CriterionResult]:
    out = []
    for number in (sorted(CRITERIA) if numbers is None else numbers):
        r = run_criterion(number)
        if report is not None:
            report(r)
        out.append(r)
    return out
