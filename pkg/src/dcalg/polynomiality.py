"""Coefficient series in ``n``, their normalizations and exact polynomial certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Any, Iterable, Sequence

from .class_sums import structure_coefficient_bruteforce
from .families import ClassLabel, Kind, LabelError, make_family
from .formula import theorem_coefficient
from .partitions import IndexedPair, SizeError

__all__ = [
    "RationalPolynomial",
    "DuplicateAbscissa",
    "InsufficientPoints",
    "PolyCertificate",
    "interpolate",
    "proper_label",
    "coefficient_series",
    "normalize_series",
    "normalization_tag",
    "NORMALIZATIONS",
    "degree_bound",
    "verify_polynomiality",
]


class DuplicateAbscissa(ValueError):
    """Two interpolation points share the same ``n``."""


class InsufficientPoints(ValueError):
    """The fit range cannot determine a polynomial of the required degree."""


class RationalPolynomial:
    """A polynomial in ``n`` with exact rational coefficients (ascending degree)."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable[Fraction | int] = ()) -> None:
        cs = [Fraction(c) for c in coefficients]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coefficients = tuple(cs)

    @property
    def degree(self) -> int:
        """Degree, ``-1`` for the zero polynomial."""
        return len(self.coefficients) - 1

    def __call__(self, n: Fraction | int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * n + c
        return acc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __add__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        a, b = self.coefficients, other.coefficients
        size = max(len(a), len(b))
        return RationalPolynomial(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(size)
        )

    def __mul__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return RationalPolynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return RationalPolynomial(out)

    def scale(self, c: Fraction | int) -> "RationalPolynomial":
        return RationalPolynomial(c * x for x in self.coefficients)

    def falling_coefficients(self, offset: int = 0) -> list[Fraction]:
        """``b_d`` with ``p(n) = Σ_d b_d (n - offset)(n - offset - 1)⋯(n - offset - d + 1)``."""
        deg = self.degree
        if deg < 0:
            return []
        values = [self(offset + t) for t in range(deg + 1)]
        out = []
        for d in range(deg + 1):
            out.append(values[0] / factorial(d))
            values = [values[i + 1] - values[i] for i in range(len(values) - 1)]
        return out

    def to_json(self) -> list[dict[str, str]]:
        return [{"num": str(c.numerator), "den": str(c.denominator)} for c in self.coefficients]

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        pieces = []
        for d in range(self.degree, -1, -1):
            c = self.coefficients[d]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            mono = "" if d == 0 else ("n" if d == 1 else f"n^{d}")
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            pieces.append((sign, body))
        head_sign, head = pieces[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"RationalPolynomial({self})"


def interpolate(points: Sequence[tuple[int | Fraction, Fraction | int]]) -> RationalPolynomial:
    """Lagrange interpolation: the unique polynomial of degree ``< len(points)`` through ``points``."""
    xs = [Fraction(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa("interpolation points need distinct abscissae")
    total = RationalPolynomial()
    for i, (xi, (_, yi)) in enumerate(zip(xs, points)):
        basis = RationalPolynomial([1])
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * RationalPolynomial([-xj, 1])
                denom *= xi - xj
        total = total + basis.scale(Fraction(yi) / denom)
    return total


# ---------------------------------------------------------------------------
# series


def proper_label(kind: Kind | str, label: ClassLabel | str) -> ClassLabel:
    """A label reduced to its proper (padding-free) form."""
    kind = Kind(kind)
    if isinstance(label, str):
        tag, _, body = label.partition(":")
        fam = make_family(kind, _parse_size_hint(kind, label))
        label = fam.parse_label(label)
    return ClassLabel(label.tag, label.proper)


def _parse_size_hint(kind: Kind, text: str) -> int:
    """A degree large enough to parse ``text`` (the label's own size)."""
    from .partitions import parse_indexed_pair, parse_pair, parse_partition

    tag, _, body = text.partition(":")
    tag = tag.strip()
    try:
        if tag in ("ct", "coset"):
            size = parse_partition(body).size
        elif tag == "btype":
            size = parse_pair(body).size
        elif tag == "ipair":
            size = parse_indexed_pair(body).size
        else:
            raise LabelError(f"no stable labels for {text!r}")
    except ValueError as exc:
        raise LabelError(f"malformed label {text!r}: {exc}") from exc
    return max(size, 1)


def _at(kind: Kind, label: ClassLabel, n: int) -> ClassLabel:
    fam = make_family(kind, n)
    if label.proper_size > n:
        raise SizeError(f"label {label} needs n ≥ {label.proper_size}, got {n}")
    return fam.parse_label(f"{label.tag}:{label.proper}")


def coefficient_series(kind: Kind | str, l1: ClassLabel | str, l2: ClassLabel | str,
                       l3: ClassLabel | str, n_range: Iterable[int],
                       method: str = "bruteforce") -> list[tuple[int, Fraction]]:
    """Coefficient of ``l3`` in ``l1 · l2`` (labels padded to each ``n``)."""
    kind = Kind(kind)
    if kind is Kind.GL:
        raise LabelError("gl labels have no stable padding; series are not defined")
    labels = [proper_label(kind, lab) for lab in (l1, l2, l3)]
    out = []
    for n in n_range:
        fam = make_family(kind, n)
        a, b, c = (_at(kind, lab, n) for lab in labels)
        if method == "theorem":
            value = theorem_coefficient(fam, a, b, c).total
        elif method == "bruteforce":
            if fam.is_center and fam.class_size(a) > fam.class_size(b):
                a, b = b, a
            value = Fraction(structure_coefficient_bruteforce(fam, a, b, c))
        else:
            raise ValueError(f"unknown method {method!r}")
        out.append((n, value))
    return out


NORMALIZATIONS = ("stated", "reduced")


def _check_normalization(kind: Kind, normalization: str) -> None:
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}")
    if normalization == "reduced" and kind is not Kind.DIAG_PAIR:
        raise ValueError("the reduced normalization exists only for diag-pair")


def normalization_tag(kind: Kind | str, normalization: str = "stated") -> str:
    kind = Kind(kind)
    _check_normalization(kind, normalization)
    if kind is Kind.HECKE:
        return "divide by 2^n n!"
    if kind is Kind.DIAG_PAIR:
        if normalization == "reduced":
            return "divide by (n-1)!"
        return "multiply by (n-i-|lam|)...(n-i)(n-j-|delta|)...(n-j), divide by (n-1)!"
    return "identity"


def _falling_window(top: int, count: int) -> int:
    out = 1
    for t in range(top - count + 1, top + 1):
        out *= t
    return out


def normalize_series(kind: Kind | str, series: Sequence[tuple[int, Fraction]],
                     labels: Sequence[ClassLabel | str],
                     normalization: str = "stated") -> list[tuple[int, Fraction]]:
    """Apply the family's normalization.

    ``"reduced"`` (diag-pair only) drops the falling-factorial prefactor and
    divides by ``(n-1)!`` alone.
    """
    kind = Kind(kind)
    _check_normalization(kind, normalization)
    if kind is Kind.HECKE:
        return [(n, Fraction(c) / (2**n * factorial(n))) for n, c in series]
    if kind is Kind.DIAG_PAIR and normalization == "reduced":
        return [(n, Fraction(c) / factorial(n - 1)) for n, c in series]
    if kind is Kind.DIAG_PAIR:
        a, b = (proper_label(kind, lab).value for lab in labels[:2])
        assert isinstance(a, IndexedPair) and isinstance(b, IndexedPair)
        out = []
        for n, c in series:
            pre = _falling_window(n - a.i, a.lam.size + 1) * _falling_window(n - b.i, b.lam.size + 1)
            out.append((n, Fraction(c) * pre / factorial(n - 1)))
        return out
    return [(n, Fraction(c)) for n, c in series]


def degree_bound(kind: Kind | str, l1: ClassLabel | str, l2: ClassLabel | str, l3: ClassLabel | str,
                 normalization: str = "stated") -> int:
    """Degree bound for the normalized coefficient.

    For diag-pair the ``"stated"`` bound ``i+|lam|+j+|delta|-r+1`` belongs to
    the prefactor normalization; the ``"reduced"`` bound
    ``i+|lam|+j+|delta|-r-|rho|`` belongs to ``c/(n-1)!``.
    """
    kind = Kind(kind)
    _check_normalization(kind, normalization)
    a, b, c = (proper_label(kind, lab) for lab in (l1, l2, l3))
    if kind is Kind.DIAG_PAIR and normalization == "reduced":
        return a.proper_size + b.proper_size - c.proper_size
    if kind is Kind.DIAG_PAIR:
        return a.value.i + a.value.lam.size + b.value.i + b.value.lam.size - c.value.i + 1
    return a.proper_size + b.proper_size - c.proper_size


# ---------------------------------------------------------------------------
# certificates


@dataclass
class PolyCertificate:
    family: str
    labels: tuple[str, str, str]
    normalization: str
    polynomial: RationalPolynomial
    fit: list[tuple[int, Fraction]]
    holdout: list[tuple[int, Fraction]]
    degree_bound: int
    verdict: bool
    checks: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        def pts(ps: list[tuple[int, Fraction]]) -> list[dict[str, Any]]:
            return [{"n": n, "num": str(v.numerator), "den": str(v.denominator)} for n, v in ps]

        return {
            "family": self.family,
            "labels": list(self.labels),
            "normalization": self.normalization,
            "polynomial": self.polynomial.to_json(),
            "polynomial_text": str(self.polynomial),
            "degree": self.polynomial.degree,
            "degree_bound": self.degree_bound,
            "fit": pts(self.fit),
            "holdout": pts(self.holdout),
            "checks": self.checks,
            "verdict": "pass" if self.verdict else "fail",
        }


def verify_polynomiality(kind: Kind | str, l1: ClassLabel | str, l2: ClassLabel | str,
                         l3: ClassLabel | str, bound: int | None = None,
                         fit_range: Iterable[int] | None = None,
                         holdout_range: Iterable[int] | None = None,
                         holdouts: int | None = None, method: str = "bruteforce",
                         nonnegative: bool | None = None,
                         normalization: str = "stated") -> PolyCertificate:
    """Fit on ``fit_range``, test exactly on ``holdout_range``, check the degree bound.

    A negative bound means the coefficient vanishes: nothing is fitted and
    the holdout values must be zero.  Defaults: the fit starts at the largest proper label size and has
    ``bound + 1`` points; the holdout is the next ``holdouts`` values (two for
    ``center-sym``, one otherwise).  Centres additionally require non-negative
    coefficients in the falling-factorial basis ``(n - |target|)_d``; zero
    coefficients are reported, not failed.
    """
    kind = Kind(kind)
    labels = [proper_label(kind, lab) for lab in (l1, l2, l3)]
    _check_normalization(kind, normalization)
    if bound is None:
        bound = degree_bound(kind, *labels, normalization=normalization)
    start = max(max(lab.proper_size for lab in labels), 1)
    fit_ns = list(range(start, start + max(bound, -1) + 1)) if fit_range is None else list(fit_range)
    if len(fit_ns) < bound + 1:
        raise InsufficientPoints(f"{len(fit_ns)} fit points cannot fix a polynomial of degree {bound}")
    if holdout_range is None:
        count = holdouts if holdouts is not None else (2 if kind is Kind.CENTER_SYM else 1)
        first = fit_ns[-1] + 1 if fit_ns else start
        hold_ns = list(range(first, first + count))
    else:
        hold_ns = list(holdout_range)
    if nonnegative is None:
        nonnegative = kind in (Kind.CENTER_SYM, Kind.CENTER_HYP)
    raw = coefficient_series(kind, *labels, fit_ns + hold_ns, method=method)
    series = normalize_series(kind, raw, labels, normalization)
    fit, hold = series[: len(fit_ns)], series[len(fit_ns):]
    poly = interpolate(fit) if bound >= 0 else RationalPolynomial()
    mismatches = [n for n, v in hold if poly(n) != v]
    checks: dict[str, Any] = {
        "holdout_exact": not mismatches,
        "degree_within_bound": poly.degree <= max(bound, -1),
    }
    if mismatches:
        checks["holdout_mismatch_at"] = mismatches
    verdict = not mismatches and poly.degree <= max(bound, -1)
    if nonnegative:
        offset = labels[2].proper_size
        falling = poly.falling_coefficients(offset)
        checks["falling_offset"] = offset
        checks["falling_coefficients"] = [str(c) for c in falling]
        checks["nonnegative"] = all(c >= 0 for c in falling)
        checks["zero_coefficients"] = [d for d, c in enumerate(falling) if c == 0]
        verdict = verdict and checks["nonnegative"]
    return PolyCertificate(
        kind.value, tuple(str(lab) for lab in labels), normalization_tag(kind, normalization), poly,
        fit, hold, bound, verdict, checks,
    )
