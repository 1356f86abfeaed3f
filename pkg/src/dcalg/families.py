"""The concrete towers of groups and the families of class algebras built on them.

A *tower* is a chain ``K_0 ⊂ K_1 ⊂ ... ⊂ K_n`` together with the subgroups
``K_n^k`` that fix the first ``k`` "slots".  Towers double as the groups whose
centres are studied.  A *family* is a group ``G_n`` with a subgroup ``K_n``
whose double classes (or conjugacy classes, for centres) carry the labels.

Five families are provided:

``center-sym``  centre of ``C[S_n]``, labels ``ct:<partition>``
``center-hyp``  centre of ``C[B_n]``, ``B_n ⊂ S_2n``, labels ``btype:<lam>|<delta>``
``hecke``       ``B_n``-double classes in ``S_2n``, labels ``coset:<partition>``
``diag-pair``   ``diag(S_{n-1})``-double classes in ``S_n × S_{n-1}^opp``, labels ``ipair:i:(lam)``
``gl``          centre of ``C[GL_n(F_q)]``, labels ``glrep:<hex>``

Every centre family also has a *pair realization* ``G × G^opp ⊃ diag(G)``
whose double classes are the conjugacy classes of ``G``.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from itertools import permutations as _itertools_permutations
from itertools import product
from math import factorial
from typing import Any, Iterable, Iterator, NamedTuple, Sequence

from .matrices import Mat, SizeGuardError, field, gl_enumerate, gl_order, mat_from_hex
from .partitions import (
    IndexedPair,
    PairPartition,
    Partition,
    SizeError,
    pad_to,
    pair_partitions,
    pair_uparrow,
    parse_indexed_pair,
    parse_pair,
    parse_partition,
    partitions,
    strip_ones,
    z,
)
from .perms import (
    DegreeError,
    Permutation,
    compose,
    cycle_type,
    cycles,
    embed,
    format_cycles,
    from_cycles,
    identity,
    inverse,
    iter_cycle_type,
    parse_cycles,
    symmetric_group,
    top_moved,
)

__all__ = [
    "Kind",
    "PermPair",
    "ClassLabel",
    "LabelError",
    "MembershipError",
    "Tower",
    "SymTower",
    "HypTower",
    "FixOneTower",
    "GLTower",
    "Family",
    "CenterFamily",
    "HeckeFamily",
    "PairFamily",
    "make_family",
    "tower_for",
    "coset_type",
    "bn_type",
    "sn1_class",
    "matchings",
    "matching_coset_type",
    "matching_representative",
    "format_element",
    "parse_element",
    "DEFAULT_MAX_ELEMENTS",
]

DEFAULT_MAX_ELEMENTS = 10**7


class Kind(str, Enum):
    CENTER_SYM = "center-sym"
    CENTER_HYP = "center-hyp"
    HECKE = "hecke"
    DIAG_PAIR = "diag-pair"
    GL = "gl"


class LabelError(ValueError):
    """A class label is malformed or does not fit the family instance."""


class MembershipError(ValueError):
    """An element does not belong to the group it is used in."""


# ---------------------------------------------------------------------------
# elements


class PermPair(NamedTuple):
    """An element ``(a, b)`` of ``S_n × L^opp``; ``(a,b)(c,d) = (ac, db)``."""

    left: Permutation
    right: Permutation

    def __mul__(self, other: "PermPair") -> "PermPair":  # type: ignore[override]
        return PermPair(compose(self.left, other.left), compose(other.right, self.right))

    def inverse(self) -> "PermPair":
        return PermPair(inverse(self.left), inverse(self.right))

    def __str__(self) -> str:
        return f"{format_cycles(self.left)};{format_cycles(self.right)}"


def format_element(g: Any) -> str:
    """Element grammar: cycles ``"(1 2)(3 4)"``, pairs ``"(1 2);(2 3)"``, matrices as hex."""
    if isinstance(g, Mat):
        return g.to_hex()
    if isinstance(g, PermPair):
        return str(g)
    return format_cycles(g)


def parse_element(text: str, family: "Family") -> Any:
    g = family.parse_raw_element(text)
    if not family.contains(g):
        raise MembershipError(f"{text!r} is not an element of {family.describe()}")
    return g


# ---------------------------------------------------------------------------
# labels


@dataclass(frozen=True, order=True)
class ClassLabel:
    """Tagged class label: ``ct``, ``coset``, ``btype``, ``ipair`` or ``glrep``."""

    tag: str
    value: Any

    def __str__(self) -> str:
        if self.tag == "glrep":
            return f"glrep:{self.value.to_hex()}"
        return f"{self.tag}:{self.value}"

    @property
    def proper(self) -> Any:
        """The label with its stable padding removed."""
        v = self.value
        if self.tag in ("ct", "coset"):
            return strip_ones(v)
        if self.tag == "btype":
            return PairPartition(strip_ones(v.lam), v.delta)
        if self.tag == "ipair":
            return IndexedPair(v.i, strip_ones(v.lam))
        return v

    @property
    def proper_size(self) -> int:
        """Size of the proper label (the smallest n where it exists)."""
        p = self.proper
        if isinstance(p, Mat):
            return p.n
        return p.size


def _split_label(text: str) -> tuple[str, str]:
    tag, sep, body = text.strip().partition(":")
    if not sep:
        raise LabelError(f"label needs '<tag>:<value>': {text!r}")
    return tag.strip(), body.strip()


# ---------------------------------------------------------------------------
# permutation helpers used by several families


def _partner(a: int) -> int:
    return a + 1 if a % 2 else a - 1


def coset_type(w: Sequence[int]) -> Partition:
    """Coset-type of a permutation of ``2n``.

    Components of the graph on ``1..2n`` with the edges ``{2i-1, 2i}`` and
    ``{w(2i-1), w(2i)}`` have sizes ``2ρ_1 ≥ 2ρ_2 ≥ ...``; the result is ``ρ``.
    """
    m = len(w)
    if m % 2:
        raise DegreeError(f"coset-type needs an even degree, got {m}")
    parent = list(range(m + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def join(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for i in range(1, m, 2):
        join(i, i + 1)
        join(w[i - 1], w[i])
    sizes: dict[int, int] = defaultdict(int)
    for a in range(1, m + 1):
        sizes[find(a)] += 1
    return Partition(tuple(s // 2 for s in sizes.values()))


def matching_coset_type(blocks: Sequence[tuple[int, int]], m: int) -> Partition:
    """Coset-type of any permutation sending the standard pairs onto ``blocks``."""
    w = matching_representative(blocks, m)
    return coset_type(w)


def matching_representative(blocks: Sequence[tuple[int, int]], m: int) -> Permutation:
    """The permutation with ``w(2i-1), w(2i)`` equal to the ``i``-th block (blocks sorted)."""
    images = [0] * m
    for i, (a, b) in enumerate(sorted(tuple(sorted(bl)) for bl in blocks)):
        images[2 * i] = a
        images[2 * i + 1] = b
    return Permutation(images)


def matchings(m: int) -> Iterator[list[tuple[int, int]]]:
    """All perfect matchings of ``1..m`` (``m`` even), blocks sorted by their minimum."""

    def rec(rest: tuple[int, ...]) -> Iterator[list[tuple[int, int]]]:
        if not rest:
            yield []
            return
        a = rest[0]
        for j in range(1, len(rest)):
            b = rest[j]
            for tail in rec(rest[1:j] + rest[j + 1:]):
                yield [(a, b)] + tail

    yield from rec(tuple(range(1, m + 1)))


def bn_type(w: Sequence[int]) -> PairPartition:
    """Type ``(λ, δ)`` of an element of ``B_n``.

    A cycle containing the partner of each of its points contributes half its
    length to ``δ``; any other cycle comes with its partner cycle and the pair
    contributes one part, its length, to ``λ``.
    """
    if not _preserves_pairs(w):
        raise MembershipError(f"{format_cycles(w)} does not preserve the pairs {{2i-1, 2i}}")
    lam, delta = [], []
    consumed: set[int] = set()
    for cyc in cycles(w):
        if cyc[0] in consumed:
            continue
        members = set(cyc)
        if _partner(cyc[0]) in members:
            delta.append(len(cyc) // 2)
        else:
            lam.append(len(cyc))
            consumed.update(_partner(a) for a in cyc)
    return PairPartition(Partition(tuple(lam)), Partition(tuple(delta)))


def sn1_class(w: Sequence[int]) -> IndexedPair:
    """``(i, λ)``: cycle length through the point 1 and the cycle type of the rest."""
    if len(w) == 0:
        raise DegreeError("sn1_class needs degree at least 1")
    cyc = cycles(w)
    first = next(c for c in cyc if c[0] == 1)
    rest = Partition(tuple(len(c) for c in cyc if c[0] != 1))
    return IndexedPair(len(first), rest)


def _preserves_pairs(w: Sequence[int]) -> bool:
    if len(w) % 2:
        return False
    return all((w[i] + 1) // 2 == (w[i + 1] + 1) // 2 for i in range(0, len(w), 2))


def _consecutive_cycles(parts: Iterable[int], start: int, degree: int) -> Permutation:
    """Cycles of the given lengths on consecutive points from ``start``."""
    cyc_list, p = [], start
    for part in parts:
        cyc_list.append(list(range(p, p + part)))
        p += part
    return from_cycles(cyc_list, degree)


# ---------------------------------------------------------------------------
# towers


class Tower(ABC):
    """``K_n`` with its subgroups ``K_n^k`` and the level function ``k``."""

    name: str = ""

    def __init__(self, n: int) -> None:
        if n < 0:
            raise SizeError(f"tower size must be non-negative, got {n}")
        self.n = n

    # group structure
    @property
    @abstractmethod
    def identity(self) -> Any: ...

    def mul(self, a: Any, b: Any) -> Any:
        return a * b

    def inv(self, a: Any) -> Any:
        return a.inverse()

    @abstractmethod
    def order(self) -> int: ...

    @abstractmethod
    def sub_order(self, k: int) -> int: ...

    @abstractmethod
    def contains(self, g: Any) -> bool: ...

    @abstractmethod
    def _generate(self) -> list[Any]: ...

    @abstractmethod
    def _generate_sub(self, k: int) -> list[Any]: ...

    @abstractmethod
    def sub_gens(self, k: int) -> list[Any]: ...

    @abstractmethod
    def in_sub(self, g: Any, k: int) -> bool: ...

    @abstractmethod
    def level(self, g: Any) -> int:
        """Least ``k`` with ``g ∈ K_k`` (``K_0`` is trivial)."""

    @abstractmethod
    def at(self, m: int) -> "Tower": ...

    @abstractmethod
    def embed_from(self, g: Any, m: int) -> Any:
        """Image of ``g ∈ K_m`` in ``K_n``."""

    @abstractmethod
    def relabel(self, g: Any, k: int) -> Any:
        """The isomorphism candidate ``K_n^k → K_{n-k}`` (shift of the fixed slots)."""

    @abstractmethod
    def parse_raw(self, text: str) -> Any: ...

    def embed_up(self, g: Any) -> Any:
        """``K_n ⊂ K_{n+1}``."""
        return self.at(self.n + 1).embed_from(g, self.n)

    def _check_k(self, k: int) -> None:
        if not 0 <= k <= self.n:
            raise SizeError(f"subgroup index k={k} outside 0..{self.n}")

    def elements(self) -> list[Any]:
        return self._elements

    @cached_property
    def _elements(self) -> list[Any]:
        return self._generate()

    def sub_elements(self, k: int) -> list[Any]:
        self._check_k(k)
        return self._subs(k)

    @lru_cache(maxsize=None)
    def _subs(self, k: int) -> list[Any]:
        return self._generate_sub(k)

    def level_elements(self, k: int) -> list[Any]:
        """``K_k`` embedded in ``K_n``."""
        self._check_k(k)
        return [self.embed_from(g, k) for g in self.at(k).elements()]

    def describe(self) -> str:
        return f"{self.name}({self.n})"


def _adjacent_transpositions(lo: int, hi: int, degree: int) -> list[Permutation]:
    out = []
    for i in range(lo, hi):
        img = list(range(1, degree + 1))
        img[i - 1], img[i] = i + 1, i
        out.append(Permutation(img))
    return out


class SymTower(Tower):
    """``S_n`` acting on ``1..n``; ``S_n^k`` fixes ``1..k``; ``S_n ⊂ S_{n+1}`` fixes ``n+1``."""

    name = "S"

    @property
    def degree(self) -> int:
        return self.n

    @property
    def identity(self) -> Permutation:
        return identity(self.n)

    def order(self) -> int:
        return factorial(self.n)

    def sub_order(self, k: int) -> int:
        self._check_k(k)
        return factorial(self.n - k)

    def contains(self, g: Any) -> bool:
        return isinstance(g, tuple) and not isinstance(g, (PermPair, Mat)) and len(g) == self.n

    def _generate(self) -> list[Permutation]:
        return list(symmetric_group(self.n))

    def _generate_sub(self, k: int) -> list[Permutation]:
        return [embed(p, self.n, "fix-bottom") for p in symmetric_group(self.n - k)]

    def sub_gens(self, k: int) -> list[Permutation]:
        self._check_k(k)
        return _adjacent_transpositions(k + 1, self.n, self.n)

    def in_sub(self, g: Sequence[int], k: int) -> bool:
        return all(g[i] == i + 1 for i in range(k))

    def level(self, g: Sequence[int]) -> int:
        return top_moved(g)

    def at(self, m: int) -> "SymTower":
        return _sym_tower(m)

    def embed_from(self, g: Sequence[int], m: int) -> Permutation:
        return embed(g, self.n, "fix-top")

    def relabel(self, g: Sequence[int], k: int) -> Permutation:
        return Permutation(v - k for v in g[k:])

    def parse_raw(self, text: str) -> Permutation:
        return parse_cycles(text, self.n)


class HypTower(Tower):
    """``B_n ⊂ S_2n`` preserving ``{2i-1, 2i}``; ``B_n^k`` fixes ``1..2k``."""

    name = "B"

    @property
    def degree(self) -> int:
        return 2 * self.n

    @property
    def identity(self) -> Permutation:
        return identity(2 * self.n)

    def order(self) -> int:
        return 2**self.n * factorial(self.n)

    def sub_order(self, k: int) -> int:
        self._check_k(k)
        return 2 ** (self.n - k) * factorial(self.n - k)

    def contains(self, g: Any) -> bool:
        return (
            isinstance(g, tuple)
            and not isinstance(g, (PermPair, Mat))
            and len(g) == 2 * self.n
            and _preserves_pairs(g)
        )

    @staticmethod
    def _signed(m: int) -> list[Permutation]:
        out = []
        for sigma in _itertools_permutations(range(m)):
            for signs in product((0, 1), repeat=m):
                img = [0] * (2 * m)
                for i, (s, e) in enumerate(zip(sigma, signs)):
                    img[2 * i] = 2 * s + 1 + e
                    img[2 * i + 1] = 2 * s + 2 - e
                out.append(Permutation(img))
        out.sort()
        return out

    def _generate(self) -> list[Permutation]:
        return self._signed(self.n)

    def _generate_sub(self, k: int) -> list[Permutation]:
        return [embed(p, 2 * self.n, "fix-bottom") for p in self.at(self.n - k).elements()]

    def sub_gens(self, k: int) -> list[Permutation]:
        self._check_k(k)
        m = 2 * self.n
        out = []
        for i in range(k + 1, self.n + 1):
            out.append(from_cycles([[2 * i - 1, 2 * i]], m))
        for i in range(k + 1, self.n):
            out.append(from_cycles([[2 * i - 1, 2 * i + 1], [2 * i, 2 * i + 2]], m))
        return out

    def in_sub(self, g: Sequence[int], k: int) -> bool:
        return all(g[i] == i + 1 for i in range(2 * k))

    def level(self, g: Sequence[int]) -> int:
        return (top_moved(g) + 1) // 2

    def at(self, m: int) -> "HypTower":
        return _hyp_tower(m)

    def embed_from(self, g: Sequence[int], m: int) -> Permutation:
        return embed(g, 2 * self.n, "fix-top")

    def relabel(self, g: Sequence[int], k: int) -> Permutation:
        return Permutation(v - 2 * k for v in g[2 * k:])

    def parse_raw(self, text: str) -> Permutation:
        return parse_cycles(text, 2 * self.n)


class FixOneTower(Tower):
    """``S_{n-1}`` realized as the permutations of ``1..n`` fixing 1.

    ``K_n^k`` fixes ``1..max(k, 1)`` so that it commutes with
    ``K_k = S_{k-1}`` on ``2..k``; its order is ``(n-k)!`` for ``k ≥ 1``.
    """

    name = "S1"

    @property
    def degree(self) -> int:
        return self.n

    @property
    def identity(self) -> Permutation:
        return identity(self.n)

    def order(self) -> int:
        return factorial(max(self.n - 1, 0))

    def sub_order(self, k: int) -> int:
        self._check_k(k)
        return factorial(self.n - max(k, 1)) if self.n else 1

    def contains(self, g: Any) -> bool:
        return SymTower.contains(self, g) and (self.n == 0 or g[0] == 1)  # type: ignore[arg-type]

    def _generate(self) -> list[Permutation]:
        if self.n == 0:
            return [identity(0)]
        return [embed(p, self.n, "fix-bottom") for p in symmetric_group(self.n - 1)]

    def _generate_sub(self, k: int) -> list[Permutation]:
        if self.n == 0:
            return [identity(0)]
        f = max(k, 1)
        return [embed(p, self.n, "fix-bottom") for p in symmetric_group(self.n - f)]

    def sub_gens(self, k: int) -> list[Permutation]:
        self._check_k(k)
        return _adjacent_transpositions(max(k, 1) + 1, self.n, self.n)

    def in_sub(self, g: Sequence[int], k: int) -> bool:
        return all(g[i] == i + 1 for i in range(min(max(k, 1), self.n)))

    def level(self, g: Sequence[int]) -> int:
        return top_moved(g)

    def at(self, m: int) -> "FixOneTower":
        return _fixone_tower(m)

    def embed_from(self, g: Sequence[int], m: int) -> Permutation:
        return embed(g, self.n, "fix-top")

    def relabel(self, g: Sequence[int], k: int) -> Permutation:
        return Permutation(v - k for v in g[k:])

    def parse_raw(self, text: str) -> Permutation:
        return parse_cycles(text, self.n)


class GLTower(Tower):
    """``GL_n(F_q)``; ``GL_n^k = blockdiag(I_k, *)``; ``GL_k`` sits in the top-left block."""

    name = "GL"

    def __init__(self, n: int, q: int, max_elements: int = DEFAULT_MAX_ELEMENTS) -> None:
        super().__init__(n)
        field(q)
        self.q = q
        self.max_elements = max_elements

    @property
    def identity(self) -> Mat:
        return Mat.identity(self.q, self.n)

    def order(self) -> int:
        return gl_order(self.n, self.q)

    def sub_order(self, k: int) -> int:
        self._check_k(k)
        return gl_order(self.n - k, self.q)

    def contains(self, g: Any) -> bool:
        return isinstance(g, Mat) and g.q == self.q and g.n == self.n and g.is_invertible()

    def _generate(self) -> list[Mat]:
        return list(gl_enumerate(self.n, self.q, self.max_elements))

    def _generate_sub(self, k: int) -> list[Mat]:
        return [self.block(k, a) for a in self.at(self.n - k).elements()]

    def block(self, k: int, a: Mat) -> Mat:
        """``blockdiag(I_k, a)``."""
        n = self.n
        rows = []
        for i in range(n):
            if i < k:
                rows.append(tuple(int(i == j) for j in range(n)))
            else:
                rows.append((0,) * k + a.rows[i - k])
        return Mat(self.q, tuple(rows))

    def sub_gens(self, k: int) -> list[Mat]:
        self._check_k(k)
        m = self.n - k
        F = field(self.q)
        prim = next(
            a for a in range(1, self.q)
            if len({_field_pow(F, a, e) for e in range(self.q - 1)}) == self.q - 1
        )
        gens = []
        for i in range(m):
            for j in range(m):
                if i != j:
                    rows = [[int(r == c) for c in range(m)] for r in range(m)]
                    rows[i][j] = 1
                    gens.append(self.block(k, Mat(self.q, tuple(map(tuple, rows)))))
        if m and self.q > 2:
            gens.append(self.block(k, Mat.diag(self.q, [prim] + [1] * (m - 1))))
        return gens

    def in_sub(self, g: Mat, k: int) -> bool:
        for i in range(k):
            for j in range(self.n):
                if g.rows[i][j] != int(i == j) or g.rows[j][i] != int(i == j):
                    return False
        return True

    def level(self, g: Mat) -> int:
        for i in range(self.n - 1, -1, -1):
            for j in range(self.n):
                if g.rows[i][j] != int(i == j) or g.rows[j][i] != int(i == j):
                    return i + 1
        return 0

    def at(self, m: int) -> "GLTower":
        return _gl_tower(m, self.q, self.max_elements)

    def embed_from(self, g: Mat, m: int) -> Mat:
        n = self.n
        rows = []
        for i in range(n):
            if i < m:
                rows.append(g.rows[i] + (0,) * (n - m))
            else:
                rows.append(tuple(int(i == j) for j in range(n)))
        return Mat(self.q, tuple(rows))

    def relabel(self, g: Mat, k: int) -> Mat:
        return Mat(self.q, tuple(r[k:] for r in g.rows[k:]))

    def parse_raw(self, text: str) -> Mat:
        return mat_from_hex(text, self.q)

    def describe(self) -> str:
        return f"GL({self.n},{self.q})"


def _field_pow(F: Any, a: int, e: int) -> int:
    out = 1
    for _ in range(e):
        out = F.mul[out][a]
    return out


@lru_cache(maxsize=None)
def _sym_tower(n: int) -> SymTower:
    return SymTower(n)


@lru_cache(maxsize=None)
def _hyp_tower(n: int) -> HypTower:
    return HypTower(n)


@lru_cache(maxsize=None)
def _fixone_tower(n: int) -> FixOneTower:
    return FixOneTower(n)


@lru_cache(maxsize=None)
def _gl_tower(n: int, q: int, max_elements: int = DEFAULT_MAX_ELEMENTS) -> GLTower:
    return GLTower(n, q, max_elements)


# ---------------------------------------------------------------------------
# classifiers: conjugacy of a group W under a subgroup L


class _Classifier(ABC):
    """Classes of ``W`` under conjugation by ``L``, with labels and sizes."""

    tag: str

    def __init__(self, W: Tower, L: Tower) -> None:
        self.W, self.L = W, L

    @abstractmethod
    def label_value(self, w: Any) -> Any: ...

    @abstractmethod
    def label_values(self) -> list[Any]: ...

    @abstractmethod
    def conj_size(self, value: Any) -> int: ...

    @abstractmethod
    def representative(self, value: Any) -> Any:
        """Constructed element of the class lying in ``W_k`` for the least possible ``k``."""

    @abstractmethod
    def parse_value(self, body: str) -> Any: ...

    def class_elements(self, value: Any) -> Iterator[Any]:
        yield from self._grouped.get(value, [])

    @cached_property
    def _grouped(self) -> dict[Any, list[Any]]:
        out: dict[Any, list[Any]] = defaultdict(list)
        for w in self.W.elements():
            out[self.label_value(w)].append(w)
        return dict(out)

    def value_is_valid(self, value: Any) -> bool:
        return value in set(self.label_values())


class _CycleTypeClassifier(_Classifier):
    tag = "ct"

    def label_value(self, w: Sequence[int]) -> Partition:
        return cycle_type(w)

    def label_values(self) -> list[Partition]:
        return list(partitions(self.W.n))

    def conj_size(self, value: Partition) -> int:
        return factorial(self.W.n) // z(value)

    def representative(self, value: Partition) -> Permutation:
        return _consecutive_cycles(strip_ones(value).parts, 1, self.W.n)

    def parse_value(self, body: str) -> Partition:
        return _pad_partition(parse_partition(body), self.W.n)

    def class_elements(self, value: Partition) -> Iterator[Permutation]:
        n = self.W.n
        yield from iter_cycle_type(range(1, n + 1), value.parts, n)


class _BTypeClassifier(_Classifier):
    tag = "btype"

    def label_value(self, w: Sequence[int]) -> PairPartition:
        return bn_type(w)

    def label_values(self) -> list[PairPartition]:
        return list(pair_partitions(self.W.n))

    def conj_size(self, value: PairPartition) -> int:
        n = self.W.n
        den = 2 ** (value.lam.length + value.delta.length) * z(value.lam) * z(value.delta)
        return 2**n * factorial(n) // den

    def representative(self, value: PairPartition) -> Permutation:
        m = 2 * self.W.n
        cyc_list: list[list[int]] = []
        pair = 1
        for r in strip_ones(value.lam).parts:
            cyc_list.append([2 * (pair + j) - 1 for j in range(r)])
            cyc_list.append([2 * (pair + j) for j in range(r)])
            pair += r
        for d in value.delta.parts:
            cyc_list.append([2 * (pair + j) - 1 for j in range(d)] + [2 * (pair + j) for j in range(d)])
            pair += d
        return from_cycles([c for c in cyc_list if len(c) > 1], m)

    def parse_value(self, body: str) -> PairPartition:
        p = parse_pair(body)
        if p.size > self.W.n:
            raise SizeError(f"pair {p} does not fit n={self.W.n}")
        return pair_uparrow(p, self.W.n)


class _SnOneClassifier(_Classifier):
    """``S_n`` under conjugation by the stabilizer of 1."""

    tag = "ipair"

    def label_value(self, w: Sequence[int]) -> IndexedPair:
        return sn1_class(w)

    def label_values(self) -> list[IndexedPair]:
        n = self.W.n
        return [IndexedPair(i, lam) for i in range(1, n + 1) for lam in partitions(n - i)]

    def conj_size(self, value: IndexedPair) -> int:
        return factorial(self.W.n - 1) // z(value.lam)

    def representative(self, value: IndexedPair) -> Permutation:
        n = self.W.n
        parts = [value.i] + list(strip_ones(value.lam).parts)
        return _consecutive_cycles(parts, 1, n)

    def parse_value(self, body: str) -> IndexedPair:
        p = parse_indexed_pair(body)
        n = self.W.n
        if p.i > n or p.size > n:
            raise SizeError(f"indexed pair {p} does not fit n={n}")
        return IndexedPair(p.i, pad_to(p.lam, n - p.i))


class _GLClassifier(_Classifier):
    """Conjugacy classes of ``GL_n(F_q)``; the label is the lexicographically least conjugate."""

    tag = "glrep"

    @cached_property
    def _canon(self) -> dict[Mat, Mat]:
        elems = self.W.elements()
        invs = [g.inverse() for g in elems]
        canon: dict[Mat, Mat] = {}
        for x in elems:
            if x in canon:
                continue
            orbit = {g * x * gi for g, gi in zip(elems, invs)}
            rep = min(orbit)
            for y in orbit:
                canon[y] = rep
        return canon

    def label_value(self, w: Mat) -> Mat:
        return self._canon[w]

    def label_values(self) -> list[Mat]:
        return sorted(set(self._canon.values()))

    def conj_size(self, value: Mat) -> int:
        return len(self._grouped[value])

    def representative(self, value: Mat) -> Mat:
        return value

    def parse_value(self, body: str) -> Mat:
        m = mat_from_hex(body, self.W.q)  # type: ignore[attr-defined]
        if m.n != self.W.n:
            raise SizeError(f"matrix of size {m.n} does not fit n={self.W.n}")
        if not m.is_invertible():
            raise LabelError(f"matrix {m} is singular")
        return self._canon[m]


def _pad_partition(p: Partition, n: int) -> Partition:
    if p.size > n:
        raise SizeError(f"partition {p} does not fit n={n}")
    return pad_to(p, n)


# ---------------------------------------------------------------------------
# families


class Family(ABC):
    """A group ``G_n`` with a subgroup ``K_n``; labels index the class basis."""

    kind: Kind
    is_center: bool = False

    def __init__(self, n: int, q: int | None = None, max_elements: int = DEFAULT_MAX_ELEMENTS) -> None:
        self.n, self.q, self.max_elements = n, q, max_elements

    # group structure of G
    @property
    @abstractmethod
    def identity(self) -> Any: ...

    def mul(self, a: Any, b: Any) -> Any:
        return a * b

    def inv(self, a: Any) -> Any:
        return a.inverse()

    @abstractmethod
    def order(self) -> int: ...

    @abstractmethod
    def contains(self, g: Any) -> bool: ...

    @abstractmethod
    def elements(self) -> Iterator[Any]: ...

    @abstractmethod
    def level(self, g: Any) -> int:
        """Least ``k`` with ``g ∈ G_k``."""

    @abstractmethod
    def level_elements(self, k: int) -> Iterator[Any]:
        """``G_k`` embedded in ``G_n``."""

    @abstractmethod
    def at(self, m: int) -> "Family": ...

    @abstractmethod
    def embed_up(self, g: Any) -> Any:
        """``G_n ⊂ G_{n+1}``."""

    @abstractmethod
    def parse_raw_element(self, text: str) -> Any: ...

    # the subgroup K
    @property
    @abstractmethod
    def tower(self) -> Tower: ...

    @abstractmethod
    def from_k(self, y: Any) -> Any:
        """An element of ``K_n`` (tower form) as an element of ``G_n``."""

    # labels
    tag: str

    @abstractmethod
    def label_value(self, g: Any) -> Any: ...

    @abstractmethod
    def label_values(self) -> list[Any]: ...

    @abstractmethod
    def size_of(self, value: Any) -> int: ...

    @abstractmethod
    def elements_of(self, value: Any) -> Iterator[Any]: ...

    @abstractmethod
    def representative_of(self, value: Any) -> Any: ...

    @abstractmethod
    def parse_value(self, body: str) -> Any: ...

    def label(self, g: Any) -> ClassLabel:
        if not self.contains(g):
            raise MembershipError(f"{format_element(g)} is not in {self.describe()}")
        return ClassLabel(self.tag, self.label_value(g))

    def labels(self) -> list[ClassLabel]:
        return sorted(ClassLabel(self.tag, v) for v in self.label_values())

    def check_label(self, label: ClassLabel) -> None:
        if label.tag != self.tag:
            raise LabelError(f"label {label} does not belong to family {self.kind.value}")
        if label.value not in self._value_set:
            raise LabelError(f"label {label} is not a class of {self.describe()}")

    @cached_property
    def _value_set(self) -> frozenset:
        return frozenset(self.label_values())

    def class_size(self, label: ClassLabel) -> int:
        self.check_label(label)
        return self.size_of(label.value)

    def class_elements(self, label: ClassLabel) -> Iterator[Any]:
        self.check_label(label)
        self.guard(self.size_of(label.value))
        return self.elements_of(label.value)

    def representative(self, label: ClassLabel) -> Any:
        self.check_label(label)
        return self.representative_of(label.value)

    def label_level(self, label: ClassLabel) -> int:
        """``k`` of the class: least ``k`` with the class meeting ``G_k``."""
        return self.level(self.representative(label))

    def parse_label(self, text: str) -> ClassLabel:
        tag, body = _split_label(text)
        if tag != self.tag:
            raise LabelError(f"family {self.kind.value} expects '{self.tag}:' labels, got {text!r}")
        try:
            value = self.parse_value(body)
        except SizeError:
            raise
        except (ValueError, KeyError) as exc:
            raise LabelError(f"malformed label {text!r}: {exc}") from exc
        label = ClassLabel(tag, value)
        self.check_label(label)
        return label

    def guard(self, count: int) -> None:
        if count > self.max_elements:
            raise SizeGuardError(
                f"{self.describe()}: {count} elements exceed the budget {self.max_elements}"
            )

    def describe(self) -> str:
        return f"{self.kind.value}(n={self.n}{'' if self.q is None else f', q={self.q}'})"

    # shared helpers
    def conjugation_invariant(self) -> bool:
        return self.is_center


class CenterFamily(Family):
    """Centre of ``C[W]`` for a tower group ``W``; ``G = K = W``."""

    is_center = True

    def __init__(self, kind: Kind, n: int, q: int | None = None,
                 max_elements: int = DEFAULT_MAX_ELEMENTS) -> None:
        super().__init__(n, q, max_elements)
        self.kind = kind
        self._tower = tower_for(kind, n, q, max_elements)
        self._cls = _classifier_for(kind, self._tower)
        self.tag = self._cls.tag

    @property
    def tower(self) -> Tower:
        return self._tower

    @property
    def identity(self) -> Any:
        return self._tower.identity

    def order(self) -> int:
        return self._tower.order()

    def contains(self, g: Any) -> bool:
        return self._tower.contains(g)

    def elements(self) -> Iterator[Any]:
        self.guard(self.order())
        return iter(self._tower.elements())

    def level(self, g: Any) -> int:
        return self._tower.level(g)

    def level_elements(self, k: int) -> Iterator[Any]:
        return iter(self._tower.level_elements(k))

    def at(self, m: int) -> "CenterFamily":
        return make_family(self.kind, m, self.q, self.max_elements)  # type: ignore[return-value]

    def embed_up(self, g: Any) -> Any:
        return self._tower.embed_up(g)

    def parse_raw_element(self, text: str) -> Any:
        return self._tower.parse_raw(text)

    def from_k(self, y: Any) -> Any:
        return y

    def label_value(self, g: Any) -> Any:
        return self._cls.label_value(g)

    def label_values(self) -> list[Any]:
        return self._cls.label_values()

    def size_of(self, value: Any) -> int:
        return self._cls.conj_size(value)

    def elements_of(self, value: Any) -> Iterator[Any]:
        return self._cls.class_elements(value)

    def representative_of(self, value: Any) -> Any:
        return self._cls.representative(value)

    def parse_value(self, body: str) -> Any:
        return self._cls.parse_value(body)

    def pair(self) -> "PairFamily":
        """The realization ``W × W^opp ⊃ diag(W)``."""
        return _pair_family(self.kind, self.n, self.q, self.max_elements)


class HeckeFamily(Family):
    """``B_n``-double classes in ``S_2n``."""

    kind = Kind.HECKE
    tag = "coset"

    def __init__(self, n: int, max_elements: int = DEFAULT_MAX_ELEMENTS) -> None:
        super().__init__(n, None, max_elements)
        self._tower = _hyp_tower(n)
        self._sym = _sym_tower(2 * n)

    @property
    def tower(self) -> HypTower:
        return self._tower

    @property
    def identity(self) -> Permutation:
        return identity(2 * self.n)

    def order(self) -> int:
        return factorial(2 * self.n)

    def contains(self, g: Any) -> bool:
        return self._sym.contains(g)

    def elements(self) -> Iterator[Permutation]:
        self.guard(self.order())
        return iter(self._sym.elements())

    def level(self, g: Sequence[int]) -> int:
        return (top_moved(g) + 1) // 2

    def level_elements(self, k: int) -> Iterator[Permutation]:
        if not 0 <= k <= self.n:
            raise SizeError(f"level {k} outside 0..{self.n}")
        self.guard(factorial(2 * k))
        m = 2 * self.n
        return (embed(p, m, "fix-top") for p in symmetric_group(2 * k))

    def at(self, m: int) -> "HeckeFamily":
        return make_family(Kind.HECKE, m, None, self.max_elements)  # type: ignore[return-value]

    def embed_up(self, g: Sequence[int]) -> Permutation:
        return embed(g, 2 * self.n + 2, "fix-top")

    def parse_raw_element(self, text: str) -> Permutation:
        return parse_cycles(text, 2 * self.n)

    def from_k(self, y: Any) -> Any:
        return y

    def label_value(self, g: Sequence[int]) -> Partition:
        return coset_type(g)

    def label_values(self) -> list[Partition]:
        return list(partitions(self.n))

    def size_of(self, value: Partition) -> int:
        b = self._tower.order()
        return b * b // z(value.doubled())

    def elements_of(self, value: Partition) -> Iterator[Permutation]:
        m = 2 * self.n
        bn = self._tower.elements()
        for blocks in matchings(m):
            x = matching_representative(blocks, m)
            if coset_type(x) == value:
                for b in bn:
                    yield compose(x, b)

    def representative_of(self, value: Partition) -> Permutation:
        m = 2 * self.n
        cyc_list, pair = [], 1
        for r in strip_ones(value).parts:
            cyc_list.append([2 * (pair + j) for j in range(r)])
            pair += r
        return from_cycles(cyc_list, m)

    def parse_value(self, body: str) -> Partition:
        return _pad_partition(parse_partition(body), self.n)


class PairFamily(Family):
    """``W × L^opp`` with ``K = diag(L)``; the label of ``(a, b)`` is the ``L``-class of ``ab``.

    ``diag-pair`` uses ``W = S_n`` and ``L`` the stabilizer of 1; the pair
    realization of a centre family uses ``W = L``.
    """

    def __init__(self, kind: Kind, n: int, q: int | None = None,
                 max_elements: int = DEFAULT_MAX_ELEMENTS, realizes_center: bool = False) -> None:
        super().__init__(n, q, max_elements)
        self.kind = kind
        self.realizes_center = realizes_center
        if kind is Kind.DIAG_PAIR:
            self.W: Tower = _sym_tower(n)
            self.L: Tower = _fixone_tower(n)
            self._cls: _Classifier = _SnOneClassifier(self.W, self.L)
        else:
            self.W = self.L = tower_for(kind, n, q, max_elements)
            self._cls = _classifier_for(kind, self.W)
        self.tag = self._cls.tag

    @property
    def tower(self) -> Tower:
        return self.L

    @property
    def identity(self) -> PermPair:
        return PermPair(self.W.identity, self.L.identity)

    def order(self) -> int:
        return self.W.order() * self.L.order()

    def contains(self, g: Any) -> bool:
        return isinstance(g, PermPair) and self.W.contains(g.left) and self.L.contains(g.right)

    def elements(self) -> Iterator[PermPair]:
        self.guard(self.order())
        return (PermPair(a, b) for a in self.W.elements() for b in self.L.elements())

    def level(self, g: PermPair) -> int:
        return max(self.W.level(g.left), self.L.level(g.right))

    def level_elements(self, k: int) -> Iterator[PermPair]:
        left = self.W.level_elements(k)
        right = self.L.level_elements(k)
        self.guard(len(left) * len(right))
        return (PermPair(a, b) for a in left for b in right)

    def at(self, m: int) -> "PairFamily":
        if self.kind is Kind.DIAG_PAIR:
            return make_family(Kind.DIAG_PAIR, m, None, self.max_elements)  # type: ignore[return-value]
        return _pair_family(self.kind, m, self.q, self.max_elements)

    def embed_up(self, g: PermPair) -> PermPair:
        return PermPair(self.W.embed_up(g.left), self.L.embed_up(g.right))  # type: ignore[arg-type]

    def parse_raw_element(self, text: str) -> PermPair:
        left, sep, right = text.partition(";")
        if not sep:
            raise ValueError(f"pair element needs '<left>;<right>': {text!r}")
        return PermPair(self.W.parse_raw(left), self.L.parse_raw(right))

    def from_k(self, y: Any) -> PermPair:
        return PermPair(y, self.L.inv(y))

    def label_value(self, g: PermPair) -> Any:
        return self._cls.label_value(self.W.mul(g.left, g.right))

    def label_values(self) -> list[Any]:
        return self._cls.label_values()

    def size_of(self, value: Any) -> int:
        return self.L.order() * self._cls.conj_size(value)

    def elements_of(self, value: Any) -> Iterator[PermPair]:
        for w in self._cls.class_elements(value):
            for b in self.L.elements():
                yield PermPair(self.W.mul(w, self.L.inv(b)), b)

    def representative_of(self, value: Any) -> PermPair:
        return PermPair(self._cls.representative(value), self.L.identity)

    def parse_value(self, body: str) -> Any:
        return self._cls.parse_value(body)

    def classifier(self) -> _Classifier:
        return self._cls

    def describe(self) -> str:
        base = super().describe()
        return f"pair[{base}]" if self.realizes_center else base


def _classifier_for(kind: Kind, W: Tower) -> _Classifier:
    if kind is Kind.CENTER_SYM:
        return _CycleTypeClassifier(W, W)
    if kind is Kind.CENTER_HYP:
        return _BTypeClassifier(W, W)
    if kind is Kind.GL:
        return _GLClassifier(W, W)
    raise LabelError(f"no conjugacy classifier for family {kind.value}")


def tower_for(kind: Kind | str, n: int, q: int | None = None,
              max_elements: int = DEFAULT_MAX_ELEMENTS) -> Tower:
    """The ``K``-tower of a family kind."""
    kind = Kind(kind)
    if kind is Kind.CENTER_SYM:
        return _sym_tower(n)
    if kind in (Kind.CENTER_HYP, Kind.HECKE):
        return _hyp_tower(n)
    if kind is Kind.DIAG_PAIR:
        return _fixone_tower(n)
    if q is None:
        raise LabelError("the gl family needs q")
    return _gl_tower(n, q, max_elements)


@lru_cache(maxsize=None)
def _pair_family(kind: Kind, n: int, q: int | None, max_elements: int) -> PairFamily:
    return PairFamily(kind, n, q, max_elements, realizes_center=True)


@lru_cache(maxsize=None)
def _make_family(kind: Kind, n: int, q: int | None, max_elements: int) -> Family:
    if kind is Kind.HECKE:
        return HeckeFamily(n, max_elements)
    if kind is Kind.DIAG_PAIR:
        if n < 1:
            raise SizeError("diag-pair needs n ≥ 1")
        return PairFamily(Kind.DIAG_PAIR, n, None, max_elements)
    if kind is Kind.GL:
        if q is None:
            raise LabelError("the gl family needs --q")
        return CenterFamily(kind, n, q, max_elements)
    return CenterFamily(kind, n, None, max_elements)


def make_family(kind: Kind | str, n: int, q: int | None = None,
                max_elements: int = DEFAULT_MAX_ELEMENTS) -> Family:
    """Family instance ``(kind, n, q)``; instances are cached and immutable."""
    kind = Kind(kind)
    if n < 0:
        raise SizeError(f"n must be non-negative, got {n}")
    if kind is not Kind.GL:
        q = None
    return _make_family(kind, n, q, max_elements)


def is_in_K(family: Family, g: Any, k: int | None = None) -> bool:
    """Membership of ``g`` (in tower form) in ``K_n`` or ``K_n^k``."""
    tower = family.tower
    if not tower.contains(g):
        return False
    return True if k is None else tower.in_sub(g, k)


def enumerate_K(family: Family, k: int | None = None) -> list[Any]:
    """``K_n`` (``k=None``) or ``K_n^k`` in deterministic order."""
    tower = family.tower
    return tower.elements() if k is None else tower.sub_elements(k)


__all__ += ["is_in_K", "enumerate_K"]
