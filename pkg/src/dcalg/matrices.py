"""Square matrices over small finite fields ``F_q``.

Field elements are the integers ``0..q-1``.  For a prime ``q`` they are residues;
for a prime power ``q = p^e`` an element encodes the coefficient vector (base
``p`` digits) of a polynomial reduced modulo a fixed irreducible polynomial.
All arithmetic is table driven.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterator, NamedTuple, Sequence

__all__ = ["GF", "field", "Mat", "gl_order", "gl_enumerate", "mat_from_hex", "SizeGuardError"]


class SizeGuardError(RuntimeError):
    """An enumeration would exceed the configured element budget."""


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"field size must be a prime power, got {q}")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, rest = 0, q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise ValueError(f"field size must be a prime power, got {q}")
    return p, e


class GF:
    """Addition/multiplication tables of ``F_q``."""

    def __init__(self, q: int) -> None:
        p, e = _prime_power(q)
        self.q, self.p, self.e = q, p, e
        if e == 1:
            self.add = [[(a + b) % q for b in range(q)] for a in range(q)]
            self.mul = [[(a * b) % q for b in range(q)] for a in range(q)]
        else:
            modulus = self._irreducible(p, e)
            self.add = [[self._vec_add(a, b) for b in range(q)] for a in range(q)]
            self.mul = [[self._poly_mul(a, b, modulus) for b in range(q)] for a in range(q)]
        self.neg = [next(b for b in range(q) if self.add[a][b] == 0) for a in range(q)]
        self.inv = [0] + [next(b for b in range(1, q) if self.mul[a][b] == 1) for a in range(1, q)]
        self.sub = [[self.add[a][self.neg[b]] for b in range(q)] for a in range(q)]

    def _digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.e)]

    def _from_digits(self, digits: Sequence[int]) -> int:
        return sum(d * self.p**i for i, d in enumerate(digits))

    def _vec_add(self, a: int, b: int) -> int:
        return self._from_digits([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _poly_mul(self, a: int, b: int, modulus: list[int]) -> int:
        p, e = self.p, self.e
        da, db = self._digits(a), self._digits(b)
        prod_ = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod_[i + j] = (prod_[i + j] + x * y) % p
        # reduce with the monic modulus of degree e
        for deg in range(2 * e - 2, e - 1, -1):
            c = prod_[deg]
            if c:
                for i, m in enumerate(modulus):
                    prod_[deg - e + i] = (prod_[deg - e + i] - c * m) % p
        return self._from_digits(prod_[:e])

    @staticmethod
    def _irreducible(p: int, e: int) -> list[int]:
        """Least monic irreducible polynomial of degree ``e`` over ``F_p`` (coefficients low to high)."""
        for tail in product(range(p), repeat=e):
            poly = list(tail) + [1]
            if poly[0] == 0:
                continue
            if not any(_has_factor(poly, d, p) for d in range(1, e // 2 + 1)):
                return poly
        raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    a = a[:]
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a.pop()
    return a


def _has_factor(poly: list[int], d: int, p: int) -> bool:
    for tail in product(range(p), repeat=d):
        cand = list(tail) + [1]
        rem = _poly_mod(poly, cand, p)
        if not any(rem):
            return True
    return False


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


class Mat(NamedTuple):
    """An ``n x n`` matrix over ``F_q``; rows are tuples of field elements."""

    q: int
    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, q: int, rows: Sequence[Sequence[int]]) -> "Mat":
        F = field(q)
        out = tuple(tuple(int(v) for v in r) for r in rows)
        if any(len(r) != len(out) for r in out):
            raise ValueError("matrix must be square")
        if any(not 0 <= v < F.q for r in out for v in r):
            raise ValueError(f"entries must lie in 0..{q - 1}")
        return cls(q, out)

    @classmethod
    def identity(cls, q: int, n: int) -> "Mat":
        return cls(q, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diag(cls, q: int, entries: Sequence[int]) -> "Mat":
        n = len(entries)
        return cls(q, tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __mul__(self, other: "Mat") -> "Mat":  # type: ignore[override]
        if self.q != other.q or self.n != other.n:
            raise ValueError("matrix product needs equal size and field")
        F = field(self.q)
        add, mul = F.add, F.mul
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = 0
                for a, b in zip(r, c):
                    if a and b:
                        acc = add[acc][mul[a][b]]
                row.append(acc)
            out.append(tuple(row))
        return Mat(self.q, tuple(out))

    def rank(self) -> int:
        return _rank(self.q, [list(r) for r in self.rows])

    def is_invertible(self) -> bool:
        return self.rank() == self.n

    def inverse(self) -> "Mat":
        F = field(self.q)
        n = self.n
        aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if aug[r][col]), None)
            if pivot is None:
                raise ZeroDivisionError("matrix is singular")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            s = F.inv[aug[col][col]]
            aug[col] = [F.mul[s][v] for v in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [F.sub[a][F.mul[f][b]] for a, b in zip(aug[r], aug[col])]
        return Mat(self.q, tuple(tuple(r[n:]) for r in aug))

    def to_hex(self) -> str:
        """Row-major entries, one hexadecimal digit per entry (``q <= 16``)."""
        if self.q > 16:
            raise ValueError("hex packing needs q <= 16")
        return "".join(format(v, "x") for r in self.rows for v in r)

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(map(str, r)) for r in self.rows) + "]"


def mat_from_hex(text: str, q: int) -> Mat:
    text = text.strip().lower()
    n = int(round(len(text) ** 0.5))
    if n * n != len(text) or n == 0:
        raise ValueError(f"hex matrix needs a square number of digits, got {len(text)}")
    try:
        vals = [int(ch, 16) for ch in text]
    except ValueError as exc:
        raise ValueError(f"malformed hex matrix {text!r}") from exc
    return Mat.of(q, [vals[i * n:(i + 1) * n] for i in range(n)])


def _rank(q: int, rows: list[list[int]]) -> int:
    F = field(q)
    rows = [r[:] for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        s = F.inv[rows[rank][col]]
        rows[rank] = [F.mul[s][v] for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [F.sub[a][F.mul[f][b]] for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def gl_enumerate(n: int, q: int, max_elements: int = 10**7) -> Iterator[Mat]:
    """All of ``GL_n(F_q)`` in lexicographic row-major order.

    Rows are chosen one at a time outside the span of the previous rows, so the
    search never visits a singular prefix.
    """
    if gl_order(n, q) > max_elements or q ** (n * n) > 50 * max_elements:
        raise SizeGuardError(f"GL_{n}(F_{q}) exceeds the element budget {max_elements}")
    field(q)
    all_rows = list(product(range(q), repeat=n))

    def rec(prefix: list[tuple[int, ...]]) -> Iterator[list[tuple[int, ...]]]:
        if len(prefix) == n:
            yield prefix
            return
        for r in all_rows:
            cand = prefix + [r]
            if _rank(q, [list(x) for x in cand]) == len(cand):
                yield from rec(cand)

    for rows in rec([]):
        yield Mat(q, tuple(rows))
