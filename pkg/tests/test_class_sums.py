"""Class sums, products and brute-force structure coefficients."""

import itertools

import pytest

from dcalg.class_sums import (
    AmbientMismatch,
    FormalSum,
    StructureError,
    class_sum,
    decompose,
    multiply,
    product_decomposition,
    structure_coefficient_bruteforce,
)
from dcalg.families import make_family
from dcalg.matrices import Mat
from dcalg.perms import Permutation

import oracles
from test_families import _oracle_classes


def test_class_sum_examples():
    sym = make_family("center-sym", 3)
    s = class_sum(sym, sym.parse_label("ct:2,1"))
    assert len(s) == 3 and set(s.terms.values()) == {1}
    hecke = make_family("hecke", 2)
    assert len(class_sum(hecke, hecke.parse_label("coset:1,1"))) == 8
    hyp = make_family("center-hyp", 2)
    assert class_sum(hyp, hyp.label(hyp.identity)).support() == {hyp.identity}


def test_products_and_decomposition():
    sym = make_family("center-sym", 3)
    t = class_sum(sym, sym.parse_label("ct:2,1"))
    e = class_sum(sym, sym.parse_label("ct:1,1,1"))
    assert multiply(e, t) == t
    sq = multiply(t, t)
    assert sq[Permutation((2, 3, 1))] == 3
    assert decompose(sq) == {sym.parse_label("ct:1,1,1"): 3, sym.parse_label("ct:3"): 3}
    assert decompose(t) == {sym.parse_label("ct:2,1"): 1}
    assert decompose(FormalSum(sym)) == {}


def test_decompose_rejects_non_class_sums():
    sym = make_family("center-sym", 3)
    with pytest.raises(StructureError):
        decompose(FormalSum(sym, {Permutation((2, 1, 3)): 1}))


def test_mixed_instances_are_rejected():
    a, b = make_family("center-sym", 3), make_family("center-sym", 4)
    with pytest.raises(AmbientMismatch):
        multiply(class_sum(a, a.labels()[0]), class_sum(b, b.labels()[0]))


@pytest.mark.parametrize("left, right, target, expected", [
    ("ct:2,1,1", "ct:2,1,1", "ct:1,1,1,1", 6),
    ("ct:2,1,1", "ct:2,1,1", "ct:2,2", 2),
    ("ct:2,1,1", "ct:2,1,1", "ct:3,1", 3),
])
def test_center_coefficients(left, right, target, expected):
    fam = make_family("center-sym", 4)
    labs = [fam.parse_label(x) for x in (left, right, target)]
    assert structure_coefficient_bruteforce(fam, *labs) == expected
    assert structure_coefficient_bruteforce(fam, *labs, method="class") == expected


def test_hecke_coefficient_example():
    fam = make_family("hecke", 4)
    two, empty = fam.parse_label("coset:2"), fam.parse_label("coset:∅")
    assert structure_coefficient_bruteforce(fam, two, two, empty) == 2**4 * 24 * 4 * 3


ORACLE_CASES = (
    [("center-sym", n, None) for n in range(1, 6)]
    + [("center-hyp", n, None) for n in range(1, 4)]
    + [("hecke", n, None) for n in range(1, 4)]
    + [("diag-pair", n, None) for n in range(1, 5)]
    + [("gl", 2, 2), ("gl", 2, 3)]
)


def _oracle_mul(kind, q):
    if kind == "diag-pair":
        def mul(x, y):
            a, b = oracles.diag_pair_mul((tuple(x.left), tuple(x.right)), (tuple(y.left), tuple(y.right)))
            return type(x)(Permutation(a), Permutation(b))

        def inv(x):
            return type(x)(x.left.inverse(), x.right.inverse())
        return mul, inv
    if kind == "gl":
        m = oracles.mat_mul(q)
        return (lambda a, b: Mat(q, m(a.rows, b.rows))), (lambda a: a.inverse())
    return (lambda a, b: Permutation(oracles.compose(a, b))), (lambda a: Permutation(oracles.inverse(a)))


@pytest.mark.parametrize("kind, n, q", ORACLE_CASES)
def test_coefficients_match_pair_counts(kind, n, q):
    fam = make_family(kind, n, q=q)
    classes = [frozenset(c) for c in _oracle_classes(kind, n, q)]
    mul, inv = _oracle_mul(kind, q)
    label_of = [fam.label(next(iter(c))) for c in classes]
    for i, j in itertools.product(range(len(classes)), repeat=2):
        got = product_decomposition(fam, label_of[i], label_of[j])
        for k, ck in enumerate(classes):
            assert got[label_of[k]] == oracles.coefficient(classes[i], classes[j], ck, mul, inv)


@pytest.mark.parametrize("kind, n", [("center-sym", 4), ("hecke", 2), ("diag-pair", 3), ("center-hyp", 2)])
def test_class_and_transversal_methods_agree(kind, n):
    fam = make_family(kind, n)
    for a, b in itertools.product(fam.labels(), repeat=2):
        assert product_decomposition(fam, a, b) == product_decomposition(fam, a, b, method="class")


@pytest.mark.parametrize("kind, n", [("center-sym", 4), ("hecke", 3), ("diag-pair", 4)])
def test_products_of_class_sums_are_class_constant(kind, n):
    fam = make_family(kind, n)
    for a, b in itertools.product(fam.labels(), repeat=2):
        d = decompose(multiply(class_sum(fam, a), class_sum(fam, b)))
        assert {k: v for k, v in product_decomposition(fam, a, b).items() if v} == d


def test_threads_do_not_change_results(monkeypatch):
    fam = make_family("center-sym", 5)
    a = fam.parse_label("ct:2")
    serial = product_decomposition(fam, a, a, threads=1)
    assert product_decomposition(fam, a, a, threads=3) == serial
    monkeypatch.setenv("DCALG_THREADS", "2")
    assert product_decomposition(fam, a, a) == serial
