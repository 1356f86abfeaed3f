"""The closed-form sums over minimal elements."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dcalg.class_sums import structure_coefficient_bruteforce
from dcalg.families import make_family
from dcalg.formula import (
    UnsupportedFamily,
    center_coefficient_via_theorem,
    coefficient_via_theorem,
    theorem_coefficient,
)
from dcalg.matrices import Mat
from dcalg.perms import from_cycles, identity, parse_cycles


def test_centre_worked_example():
    fam = make_family("center-sym", 4)
    t = from_cycles([(1, 2)], 4)
    br = center_coefficient_via_theorem(fam, t, t, parse_cycles("(1 2)(3 4)", 4))
    assert br.total == 2
    assert br.prefactor == 2
    assert len(br.terms) == 4
    assert all(term.k == 4 and term.intersection == 4 and term.contribution == Fraction(1, 4)
               for term in br.terms)


@pytest.mark.parametrize("n, g, expected", [
    (4, "()", 6),
    (5, "(1 2 3)", 3),
    (6, "(1 2)(3 4)", 2),
])
def test_centre_displayed_coefficients(n, g, expected):
    fam = make_family("center-sym", n)
    t = from_cycles([(1, 2)], n)
    assert coefficient_via_theorem(fam, t, t, parse_cycles(g, n)).total == expected


@pytest.mark.parametrize("target, multiple", [((3,), 3), ((2, 2), 2)])
def test_hecke_worked_example(target, multiple):
    fam = make_family("hecke", 4)
    x1, x2 = parse_cycles("(1 2 4 3)", 8), parse_cycles("(1 4 2)", 8)
    assert str(fam.label(x1)) == str(fam.label(x2)) == "coset:2,1,1"
    x3 = fam.representative(fam.parse_label("coset:" + ",".join(map(str, target))))
    assert coefficient_via_theorem(fam, x1, x2, x3).total == multiple * 2**4 * 24


def test_identity_target_counts_the_class():
    fam = make_family("center-sym", 5)
    for lab in fam.labels():
        e = fam.parse_label("ct:∅")
        assert theorem_coefficient(fam, lab, lab, e).total == fam.class_size(lab)


def test_gl_is_rejected():
    fam = make_family("gl", 2, q=2)
    e = Mat.identity(2, 2)
    with pytest.raises(UnsupportedFamily):
        coefficient_via_theorem(fam, e, e, e)
    with pytest.raises(UnsupportedFamily):
        center_coefficient_via_theorem(make_family("hecke", 2), identity(4), identity(4), identity(4))


def test_breakdown_serializes():
    fam = make_family("diag-pair", 4)
    a = fam.parse_label("ipair:2:(∅)")
    doc = theorem_coefficient(fam, a, a, fam.parse_label("ipair:1:(∅)")).to_json()
    assert doc["family"] == "diag-pair(n=4)"
    assert Fraction(int(doc["total"]["num"]), int(doc["total"]["den"])) == structure_coefficient_bruteforce(
        fam, a, a, fam.parse_label("ipair:1:(∅)"))


FAMILIES = [("center-sym", 5), ("center-hyp", 3), ("hecke", 3), ("diag-pair", 4)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FAMILIES), st.randoms(use_true_random=False))
def test_arbitrary_class_members_give_the_same_value(case, rng):
    kind, n = case
    fam = make_family(kind, n)
    elements = list(fam.elements())
    x1, x2, x3 = (rng.choice(elements) for _ in range(3))
    want = structure_coefficient_bruteforce(fam, fam.label(x1), fam.label(x2), fam.label(x3))
    assert coefficient_via_theorem(fam, x1, x2, x3).total == want
