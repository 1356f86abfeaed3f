"""Independent brute-force oracles.

Nothing here imports the package: groups are tuples, classes are orbits found
by search, and coefficients are plain pair counts.
"""

from __future__ import annotations

import itertools
from collections import Counter
from math import factorial
from typing import Any, Callable, Iterable, Sequence

Perm = tuple[int, ...]


# ---------------------------------------------------------------------------
# permutations


def compose(p: Perm, q: Perm) -> Perm:
    """``(p q)(i) = p(q(i))``, one-line notation on ``1..n``."""
    return tuple(p[q[i] - 1] for i in range(len(q)))


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p, start=1):
        out[v - 1] = i
    return tuple(out)


def sym(n: int) -> list[Perm]:
    return list(itertools.permutations(range(1, n + 1)))


def cycle_lengths(p: Perm) -> tuple[int, ...]:
    seen, out = set(), []
    for s in range(1, len(p) + 1):
        if s in seen:
            continue
        length, x = 0, s
        while x not in seen:
            seen.add(x)
            x = p[x - 1]
            length += 1
        out.append(length)
    return tuple(sorted(out, reverse=True))


def cycle_through_one(p: Perm) -> int:
    length, x = 1, p[0]
    while x != 1:
        x = p[x - 1]
        length += 1
    return length


def hyperoctahedral(n: int) -> list[Perm]:
    """Permutations of ``1..2n`` mapping every pair ``{2i-1, 2i}`` to a pair."""
    pairs = {frozenset((2 * i + 1, 2 * i + 2)) for i in range(n)}
    return [w for w in sym(2 * n)
            if all(frozenset((w[2 * i], w[2 * i + 1])) in pairs for i in range(n))]


def coset_type(w: Perm) -> tuple[int, ...]:
    """Half the component sizes of the graph with edges ``{2i-1,2i}`` and ``{w(2i-1), w(2i)}``."""
    m = len(w)
    adj: dict[int, set[int]] = {v: set() for v in range(1, m + 1)}
    for i in range(0, m, 2):
        a, b = i + 1, i + 2
        adj[a].add(b)
        adj[b].add(a)
        c, d = w[i], w[i + 1]
        adj[c].add(d)
        adj[d].add(c)
    seen, sizes = set(), []
    for v in adj:
        if v in seen:
            continue
        stack, comp = [v], 0
        seen.add(v)
        while stack:
            x = stack.pop()
            comp += 1
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        sizes.append(comp // 2)
    return tuple(sorted(sizes, reverse=True))


# ---------------------------------------------------------------------------
# general class algebras


def orbits(elements: Iterable[Any], moves: Callable[[Any], Iterable[Any]]) -> list[frozenset]:
    """Partition ``elements`` into the orbits generated by ``moves``."""
    remaining = set(elements)
    out = []
    while remaining:
        start = min(remaining)
        orb, frontier = {start}, [start]
        while frontier:
            x = frontier.pop()
            for y in moves(x):
                if y not in orb:
                    orb.add(y)
                    frontier.append(y)
        out.append(frozenset(orb))
        remaining -= orb
    return sorted(out, key=min)


def conjugacy_classes(group: Sequence[Any], mul: Callable, inv: Callable) -> list[frozenset]:
    gens = list(group)
    return orbits(group, lambda x: (mul(mul(g, x), inv(g)) for g in gens))


def double_classes(group: Sequence[Any], subgroup: Sequence[Any], mul: Callable) -> list[frozenset]:
    sub = list(subgroup)
    return orbits(group, lambda x: itertools.chain((mul(k, x) for k in sub), (mul(x, k) for k in sub)))


def coefficient(c1: Iterable[Any], c2: frozenset, c3: frozenset, mul: Callable, inv: Callable) -> int:
    """``#{(x, y) ∈ c1 × c2 : x y = z}`` for the least ``z`` of ``c3``."""
    z = min(c3)
    return sum(1 for x in c1 if mul(inv(x), z) in c2)


def class_algebra(classes: Sequence[frozenset], mul: Callable, inv: Callable,
                  pairs: Iterable[tuple[int, int]] | None = None) -> dict[tuple[int, int, int], int]:
    """Every structure constant ``(i, j) -> k`` for the listed class pairs."""
    n = len(classes)
    out = {}
    for i, j in (itertools.product(range(n), repeat=2) if pairs is None else pairs):
        for k in range(n):
            out[(i, j, k)] = coefficient(classes[i], classes[j], classes[k], mul, inv)
    return out


# ---------------------------------------------------------------------------
# the double-class realization of S_n × S_{n-1}^opp


def diag_pair_group(n: int) -> list[tuple[Perm, Perm]]:
    """Pairs ``(a, b)`` with ``a ∈ S_n`` and ``b ∈ S_n`` fixing the point 1."""
    fix1 = [w for w in sym(n) if n == 0 or w[0] == 1]
    return [(a, b) for a in sym(n) for b in fix1]


def diag_pair_mul(x: tuple[Perm, Perm], y: tuple[Perm, Perm]) -> tuple[Perm, Perm]:
    """``(a, b)(c, d) = (ac, db)``."""
    return compose(x[0], y[0]), compose(y[1], x[1])


def diag_pair_inv(x: tuple[Perm, Perm]) -> tuple[Perm, Perm]:
    return inverse(x[0]), inverse(x[1])


def diag_pair_subgroup(n: int) -> list[tuple[Perm, Perm]]:
    return [(y, inverse(y)) for y in sym(n) if y[0] == 1]


# ---------------------------------------------------------------------------
# matrices over a prime field


def gl(n: int, p: int) -> list[tuple[tuple[int, ...], ...]]:
    rows = list(itertools.product(range(p), repeat=n))
    out = []
    for m in itertools.product(rows, repeat=n):
        if det(m, p) % p:
            out.append(m)
    return out


def det(m: Sequence[Sequence[int]], p: int) -> int:
    if len(m) == 1:
        return m[0][0] % p
    total = 0
    for j, a in enumerate(m[0]):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * a * det(minor, p)
    return total % p


def mat_mul(p: int) -> Callable:
    def mul(a, b):
        n = len(a)
        return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(n)) % p for j in range(n)) for i in range(n))
    return mul


def mat_inv_table(group: Sequence[Any], mul: Callable) -> dict[Any, Any]:
    n = len(group[0])
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return {a: next(b for b in group if mul(a, b) == ident) for a in group}


# ---------------------------------------------------------------------------
# counting formulas


def partition_count(n: int) -> int:
    """Number of partitions of ``n`` by the pentagonal recurrence."""
    p = [1] + [0] * n
    for m in range(1, n + 1):
        k, total = 1, 0
        while True:
            g1, g2 = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p[n]


def centralizer_order(parts: Sequence[int]) -> int:
    """``|{g ∈ S_n : g x g⁻¹ = x}|`` for ``x`` of the given cycle type, by search."""
    n = sum(parts)
    x, start = [0] * n, 1
    for part in parts:
        for i in range(part):
            x[start + i - 1] = start + (i + 1) % part
        start += part
    x = tuple(x)
    return sum(1 for g in sym(n) if compose(compose(g, x), inverse(g)) == x)


def census(values: Iterable[Any]) -> Counter:
    return Counter(values)


def falling(n: int, d: int) -> int:
    return factorial(n) // factorial(n - d) if d <= n else 0
