from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cosetva.affvoa import (
    AffineVOA,
    central_charge,
    check_generator_commutation,
    gmode_act,
    simple_quotient,
    theta_twist,
    vertex_coeff_affine,
)
from cosetva.exactnum import ELL, ScalarError
from cosetva.voacore import check_virasoro

BRACKET = {("e", "f"): {"h": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}}
FORM = {("e", "f"): 1, ("h", "h"): 2}


def bracket(a, b):
    if (a, b) in BRACKET:
        return BRACKET[(a, b)]
    if (b, a) in BRACKET:
        return {k: -c for k, c in BRACKET[(b, a)].items()}
    return {}


def form(a, b):
    return FORM.get((a, b), FORM.get((b, a), 0))


def dims(space, top):
    return [sum(len(space.basis(w, c)) for c in space.charges_at(w)) for w in range(top + 1)]


def test_mode_examples():
    V = AffineVOA(2, 6)
    vac = V.vacuum
    assert gmode_act(V, "e", 1, gmode_act(V, "f", -1, vac)) == {((), 0): 2}
    assert gmode_act(V, "h", 0, gmode_act(V, "e", -1, vac)) == {(((1, 0),), 0): 2}
    assert gmode_act(V, "h", 1, gmode_act(V, "h", -1, vac)) == {((), 0): 4}
    assert gmode_act(V, "e", 0, vac) == {}


@given(st.sampled_from("ehf"), st.sampled_from("ehf"), st.integers(-2, 2), st.integers(-2, 2),
       st.sampled_from([F(1), F(2), F(-1, 2)]))
def test_affine_bracket(a, b, m, n, level):
    V = AffineVOA(level, 7)
    v = gmode_act(V, "f", -1, gmode_act(V, "e", -2, V.vacuum))
    lhs = dict(gmode_act(V, a, m, gmode_act(V, b, n, v)))
    for k, c in gmode_act(V, b, n, gmode_act(V, a, m, v)).items():
        lhs[k] = lhs.get(k, 0) - c
    want: dict = {}
    for g, c in bracket(a, b).items():
        for k, x in gmode_act(V, g, m + n, v).items():
            want[k] = want.get(k, 0) + c * x
    if m + n == 0:
        for k, x in v.items():
            want[k] = want.get(k, 0) + m * level * form(a, b) * x
    clean = lambda d: {k: c for k, c in d.items() if c}
    assert clean(lhs) == clean(want)


def test_vertex_coefficients():
    V = AffineVOA(1, 5)
    e, f = V.gen_vector(0), V.gen_vector(2)
    # e_(-1) f = e(-1) f(-1) 1, e_0 f = h(-1) 1, e_1 f = l 1
    assert vertex_coeff_affine(V, e, -1, f) == {(((1, 0), (1, 2)), 0): 1}
    assert vertex_coeff_affine(V, e, 0, f) == {(((1, 1),), 0): 1}
    assert vertex_coeff_affine(V, e, 1, f) == {((), 0): 1}


def test_central_charge():
    assert central_charge(1) == 1
    assert central_charge(2) == F(3, 2)
    assert central_charge(ELL).evaluate(F(4)) == 2
    with pytest.raises(ScalarError):
        central_charge(-2)


@pytest.mark.parametrize("level", [F(1), F(2)])
def test_sugawara_virasoro(level):
    V = AffineVOA(level, 5)
    vecs = [V.vacuum, V.gen_vector(0), gmode_act(V, "f", -1, V.gen_vector(1))]
    assert check_virasoro(V.lmode, vecs, central_charge(level)).passed
    assert check_generator_commutation(AffineVOA(level, 4)).passed


def test_generalized_verma_dims():
    # three free bosons: colored partitions with three colors
    assert dims(AffineVOA(1, 4), 4) == [1, 3, 9, 22, 51]


def test_simple_quotient_level_one():
    assert dims(simple_quotient(1, 4), 4) == [1, 3, 4, 7, 13]


def test_simple_quotient_level_two_kills_e_cubed():
    Q = simple_quotient(2, 3)
    e3 = gmode_act(Q.M, "e", -1, gmode_act(Q.M, "e", -1, Q.M.gen_vector(0)))
    assert not Q.reduce(e3)
    e2 = gmode_act(Q.M, "e", -1, Q.M.gen_vector(0))
    assert Q.reduce(e2)


def test_module_top_space():
    V = AffineVOA(2, 4)
    W = V.module(1, 3)
    top = F(3, 16)
    assert W.basis(top, (F(1, 2),)) and W.basis(top, (F(-1, 2),))
    assert W.min_weight((F(1, 2),)) == top


def test_theta_twist_shifts_charge_and_weight():
    V = AffineVOA(2, 4)
    T = theta_twist(F(1, 2), V)
    # the vacuum moves to charge l*b = 1 and weight l*b^2 = 1/2
    assert T.charge(((), 0)) == (F(1),)
    assert T.weight(((), 0)) == F(1, 2)
    # e(n) acts as e(n + 1)
    e1 = V.gen_vector(0)
    assert T.gmode(0, -2, ((), 0)) == e1
    assert T.gmode(1, 0, ((), 0)) == {((), 0): 2}
    with pytest.raises(ScalarError):
        theta_twist(F(1, 4), V)
