from fractions import Fraction as F
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cosetva.exactnum import ELL, ScalarError
from cosetva.heis import (
    HeisenbergSpace,
    L_h_act,
    check_exchange,
    check_highest_weight,
    check_lh_commutation,
    e_minus_terms,
    e_plus_terms,
    fock_key_from_json,
    fock_key_json,
    heisenberg_virasoro,
    inverse_gram,
    mode_act,
    omega_h,
)

VAC = {(): F(1)}


def colored_partition_count(n, d):
    """Coefficient of q^n in prod_k (1 - q^k)^-d, by repeated convolution."""
    series = [1] + [0] * n
    for k in range(1, n + 1):
        for _ in range(d):
            for m in range(k, n + 1):
                series[m] += series[m - k]
    return series[n]


def test_mode_act_examples():
    s = HeisenbergSpace.standard(1, 1, 6)
    b1 = mode_act(s, 0, -1, VAC)
    assert mode_act(s, 0, 1, b1) == {(): 1}
    s2 = HeisenbergSpace.standard(1, 2, 6)
    bb = mode_act(s2, 0, -1, mode_act(s2, 0, -1, VAC))
    assert mode_act(s2, 0, 1, bb) == {((1, 0),): 4}
    assert mode_act(s2, 0, 0, bb) == {}
    assert mode_act(s2, 0, 3, VAC) == {}


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 1), st.integers(0, 1),
       st.sampled_from([F(1), F(2), F(-1, 3)]))
def test_bracket_relation(m, n, i, j, level):
    gram = [[2, 1], [1, 2]]
    s = HeisenbergSpace(gram, level, 9)
    v = mode_act(s, 1, -2, mode_act(s, 0, -1, VAC))
    lhs = dict(mode_act(s, i, m, mode_act(s, j, n, v)))
    for k, c in mode_act(s, j, n, mode_act(s, i, m, v)).items():
        lhs[k] = lhs.get(k, 0) - c
    lhs = {k: c for k, c in lhs.items() if c}
    want = {k: m * level * gram[i][j] * c for k, c in v.items()} if m + n == 0 and m else {}
    assert lhs == want


@pytest.mark.parametrize("d", [1, 2, 3])
def test_dimensions_are_colored_partitions(d):
    s = HeisenbergSpace.standard(d, 1, 6)
    for n in range(7):
        assert len(s.basis(n, s.zero)) == colored_partition_count(n, d)
    assert s.basis(7, s.zero) == []
    # weight 2 for d directions: d beta(-2) plus the degree-two monomials in beta(-1)
    assert colored_partition_count(2, d) == d + comb(d + 1, 2)


def test_inverse_gram_and_singular():
    g = ((F(2), F(1)), (F(1), F(2)))
    inv = inverse_gram(g)
    for i in range(2):
        for j in range(2):
            assert sum(g[i][k] * inv[k][j] for k in range(2)) == int(i == j)
    with pytest.raises(ScalarError):
        HeisenbergSpace([[1, 1], [1, 1]], 1, 3)
    with pytest.raises(ScalarError):
        HeisenbergSpace.standard(1, 0, 3)


def test_e_minus_order_two():
    s = HeisenbergSpace.standard(1, 2, 6)
    t = e_minus_terms(s, (F(1),), VAC, 2)
    # exp(-h(-1) z - h(-2) z^2 / 2) = 1 - h(-1) z + (h(-1)^2 - h(-2)) z^2 / 2
    assert t[0] == VAC
    assert t[1] == {((1, 0),): -1}
    assert t[2] == {((1, 0), (1, 0)): F(1, 2), ((2, 0),): F(-1, 2)}


def test_e_plus_single_contraction():
    s = HeisenbergSpace.standard(1, 2, 6)
    v = dict(mode_act(s, 0, -1, VAC))
    # E^+ v = v + z^-1 h(1) v = v + 2 z^-1 1 at level 2
    assert e_plus_terms(s, (F(1),), v) == [v, {(): 2}]
    assert e_plus_terms(s, (F(1),), VAC) == [VAC]


def test_omega_and_conformal_weight():
    s = HeisenbergSpace.standard(1, 2, 6)
    assert omega_h(s) == {((1, 0), (1, 0)): F(1, 4)}
    v = dict(mode_act(s, 0, -1, VAC))
    assert L_h_act(s, 0, v) == v
    w = dict(mode_act(s, 0, -2, v))
    assert L_h_act(s, 0, w) == {k: 3 * c for k, c in w.items()}
    assert L_h_act(s, -1, VAC) == {}


def test_omega_uses_inverse_gram():
    s = HeisenbergSpace([[2, 1], [1, 2]], 1, 4)
    assert omega_h(s) == {((1, 0), (1, 0)): F(1, 3), ((1, 0), (1, 1)): F(-1, 3), ((1, 1), (1, 1)): F(1, 3)}


@pytest.mark.parametrize("level", [F(1), F(1, 2), ELL])
def test_structure_checks(level):
    s = HeisenbergSpace.standard(2, level, 5)
    assert check_lh_commutation(s).passed
    assert check_highest_weight(s, [VAC]).passed
    assert check_exchange(s, (F(1), F(0)), (F(0), F(1)), VAC).passed


def test_virasoro_central_charge_is_rank():
    for d in (1, 2):
        rep = heisenberg_virasoro(HeisenbergSpace.standard(d, 3, 6))
        assert rep.passed


def test_not_highest_weight_detected():
    s = HeisenbergSpace.standard(1, 1, 5)
    with pytest.raises(ValueError):
        check_highest_weight(s, [dict(mode_act(s, 0, -1, VAC))])


def test_fock_key_json_round_trip():
    key = ((2, 1), (1, 0), (1, 0))
    assert fock_key_from_json(fock_key_json(key)) == key
