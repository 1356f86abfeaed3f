"""k-functions, minimality and the hypothesis checkers."""

import pytest

from dcalg.cosets import EmptySetError, coset_table, double_class, is_minimal, k_min, m_value
from dcalg.families import make_family, tower_for
from dcalg.hypotheses import (
    GL_COUNTEREXAMPLE_MATRIX,
    check_all,
    check_hypothesis,
    gl_counterexample,
    k_min_double_class,
)
from dcalg.perms import Permutation, compose, from_cycles, identity, parse_cycles

import oracles


def test_k_min_examples():
    T = tower_for("center-sym", 4)
    t12 = from_cycles([(1, 2)], 4)
    X = double_class_in_tower(T, 1, t12, 1)
    assert k_min(X, T.level) == 2
    assert k_min([identity(4)], T.level) == 0
    with pytest.raises(EmptySetError):
        k_min([], T.level)


def double_class_in_tower(T, k1, x, k2):
    return {compose(compose(a, x), b) for a in T.sub_elements(k1) for b in T.sub_elements(k2)}


def test_hecke_classes_meet_small_groups():
    for n in (2, 3):
        fam = make_family("hecke", n)
        for lab in fam.labels():
            cls = double_class(fam, fam.representative(lab))
            assert k_min(cls, fam.level) == lab.proper_size


def test_m_value_examples():
    S4 = tower_for("center-sym", 4)
    assert m_value(S4, identity(4), 1, 1) == 0
    assert m_value(S4, from_cycles([(1, 2)], 4), 1, 1) == 2
    y = parse_cycles("(1 2)(3 4)", 4)
    X = double_class_in_tower(S4, 1, y, 1)
    m = k_min(X, S4.level)
    assert m_value(S4, y, 1, 1) == m == 2
    assert not is_minimal(S4, y, 1, 1)
    B2 = tower_for("hecke", 2)
    assert all(m_value(B2, x, 2, 2) <= 2 and is_minimal(B2, x, 2, 2) for x in B2.elements())


def test_block_swap_is_minimal():
    B4 = tower_for("hecke", 4)
    y = Permutation((5, 6, 7, 8, 1, 2, 3, 4))
    assert B4.contains(y)
    assert is_minimal(B4, y, 2, 2)
    assert m_value(B4, y, 2, 2) == 4


@pytest.mark.parametrize("kind, n", [("center-sym", 4), ("hecke", 2), ("diag-pair", 4)])
def test_coset_tables_partition_the_tower(kind, n):
    T = tower_for(kind, n)
    for k1 in range(n + 1):
        for k2 in range(n + 1):
            table = coset_table(T, k1, k2)
            assert sum(len(c) for c in table.cosets) == T.order()
            for c in table.cosets:
                assert set(c) == double_class_in_tower(T, k1, c[0], k2)


@pytest.mark.parametrize("kind, n_max", [("center-sym", 5), ("hecke", 3), ("center-hyp", 3)])
def test_hypotheses_hold(kind, n_max):
    for rep in check_all(kind, range(1, n_max + 1), k_max=3):
        assert rep.verdict, rep.to_json()


def test_conjugation_stability_for_centres():
    assert check_hypothesis("center-sym", "H'0", range(1, 7)).verdict
    assert check_hypothesis("center-hyp", "H'0", range(1, 4)).verdict
    with pytest.raises(ValueError):
        check_hypothesis("hecke", "H'0", range(1, 3))


@pytest.mark.parametrize("kind, n_max, checked, displayed, direction", [
    ("center-sym", 5, 340, 83, 20),
    ("hecke", 3, 305, 79, 16),
    ("diag-pair", 4, 61, 24, 0),
])
def test_stabilizer_hypothesis_tallies(kind, n_max, checked, displayed, direction):
    rep = check_hypothesis(kind, "H5", range(1, n_max + 1))
    assert rep.verdict
    assert rep.notes == {
        "minimal_elements_checked": checked,
        "displayed_form_failures": displayed,
        "displayed_direction_failures": direction,
    }


def test_conjugate_form_fails_on_s4():
    """``y K^1 y⁻¹ ∩ K^2`` for ``y = (1 2 3)`` in ``S_4`` is ``Sym{3,4}``, not ``K^3``."""
    T = tower_for("center-sym", 4)
    y = from_cycles([(1, 2, 3)], 4)
    conj = {compose(compose(y, a), y.inverse()) for a in T.sub_elements(1)}
    inter = conj & set(T.sub_elements(2))
    assert m_value(T, y, 1, 2) == 3
    assert inter == {identity(4), from_cycles([(3, 4)], 4)}
    assert inter != set(T.sub_elements(3))


def test_fix_one_tower_breaks_subgroup_isomorphism():
    rep = check_hypothesis("diag-pair", "H1", range(1, 5))
    assert not rep.verdict
    assert rep.witness == {"n": 3, "k": 1, "reason": "order mismatch", "sub_order": 2, "target_order": 1}
    for which in ("H0", "H2", "H3", "H4", "H5"):
        assert check_hypothesis("diag-pair", which, range(1, 5)).verdict, which


def test_k_min_double_class_matches_oracle():
    T = tower_for("center-sym", 4)
    for x in T.elements():
        X = double_class_in_tower(T, 1, x, 2)
        assert k_min_double_class(T, 1, x, 2) == min(max([0] + [i + 1 for i in range(4) if g[i] != i + 1])
                                                     for g in map(tuple, X))


@pytest.mark.slow
def test_gl_counterexample():
    out = gl_counterexample()
    assert out["k_min"] == 4
    assert out["h4_fails"]
    assert out["orbit_size"] == 423360
    assert out["candidates"] == 20160 * 168


@pytest.mark.slow
def test_gl_hypothesis_report_carries_the_witness():
    rep = check_hypothesis("gl", "H4", [5], q=2)
    assert not rep.verdict
    assert rep.witness["m"] == 4 and rep.witness["k1"] == 2 and rep.witness["k2"] == 1


def test_gl_counterexample_other_orientation():
    """Left ``GL^2`` and right ``GL^1`` factors leave the matrix reducible to level 2."""
    out = gl_counterexample(GL_COUNTEREXAMPLE_MATRIX, column_k=1, row_k=2)
    assert out["k_min"] == 2
    assert out["orbit_size"] == 20160
    assert not out["h4_fails"]


def test_gl_bound_already_fails_in_degree_three():
    rep = check_hypothesis("gl", "H4", range(1, 4), q=2)
    assert not rep.verdict
    assert rep.witness == {"n": 3, "k1": 1, "k2": 1, "x": "101001110", "m": 3}
    assert check_hypothesis("gl", "H4", range(1, 3), q=2).verdict


def test_gl_degree_three_witness_by_oracle():
    G = oracles.gl(3, 2)
    mul = oracles.mat_mul(2)
    x = ((1, 0, 1), (0, 0, 1), (1, 1, 0))
    K1 = [g for g in G if g[0] == (1, 0, 0) and g[1][0] == g[2][0] == 0]

    def level(m):
        return max([0] + [max(i, j) + 1 for i in range(3) for j in range(3) if m[i][j] != int(i == j)])

    X = {mul(mul(a, x), b) for a in K1 for b in K1}
    assert len(K1) == 6 and len(X) == 18
    assert min(level(m) for m in X) == 3
