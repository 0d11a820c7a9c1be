from fractions import Fraction as F

import pytest

from cosetva.affvoa import AffineVOA
from cosetva.heis import HeisenbergSpace
from cosetva.latvoa import LatticeVOA
from cosetva.voacore import (
    GradedVector,
    PlainView,
    TruncationError,
    check_derivative,
    check_jacobi,
    check_skew_symmetry,
    check_virasoro,
    check_weak_associativity,
    check_weak_commutativity,
    vertex_coeff,
    window_exponents,
)


def test_window_exponents():
    assert window_exponents(F(0), 2) == [-2, -1, 0, 1, 2]
    assert window_exponents(F(1, 3), 1) == [F(-2, 3), F(1, 3)]


def test_creation_property_heisenberg():
    H = HeisenbergSpace.standard(2, 3, 5)
    v = dict(H.hmode_vec((F(1), F(2)), -2, H.vacuum))
    # a_(-1) 1 = a and a_(n) 1 = 0 for n >= 0
    assert vertex_coeff(H, v, -1, H.vacuum) == v
    for n in range(0, 3):
        assert vertex_coeff(H, v, n, H.vacuum) == {}


def test_vacuum_is_identity():
    V = LatticeVOA.from_gram([[2]], 5)
    x = dict(V.e((1,)))
    assert vertex_coeff(V, V.vacuum, -1, x) == x
    assert vertex_coeff(V, V.vacuum, 0, x) == {}


def test_truncation_overflow():
    H = HeisenbergSpace.standard(1, 1, 2)
    v = dict(H.hmode_vec((F(1),), -2, H.vacuum))
    with pytest.raises(TruncationError, match="truncation overflow"):
        H.hmode_vec((F(1),), -1, v)


def test_commutativity_orders():
    H = HeisenbergSpace.standard(1, 1, 8)
    b = H.heisenberg[0]
    tests = [H.vacuum, dict(b)]
    r = check_weak_commutativity(PlainView(H), b, b, tests, window=3)
    assert r.passed and r.result["k"] == 2
    r0 = check_weak_commutativity(PlainView(H), H.vacuum, b, tests, window=3)
    assert r0.result["k"] == 0


def test_commutativity_failure_reports_witness():
    V = LatticeVOA.from_gram([[2]], 8)
    r = check_weak_commutativity(PlainView(V), V.e((1,)), V.e((-1,)), [V.vacuum], window=3, k_max=1)
    assert not r.passed
    assert r.result == {"k": None, "k_max": 1}
    assert r.witness["k"] == 1


def test_associativity():
    V = LatticeVOA.from_gram([[2]], 8)
    view = PlainView(V)
    r = check_weak_associativity(view, V.e((1,)), [V.e((-1,)), V.vacuum], V.e((-1,)), window=2)
    assert r.passed and r.result["l"] == 2


def test_jacobi_affine():
    A = AffineVOA(1, 7)
    e, f, h = (A.gen_vector(g) for g in range(3))
    assert check_jacobi(PlainView(A), e, f, h, window=3).passed


def test_skew_symmetry():
    A = AffineVOA(2, 7)
    e, f = A.gen_vector(0), A.gen_vector(2)
    view = PlainView(A)
    assert check_skew_symmetry(view, e, f, window=3, cyclotomic=True).passed
    ef = A.gmode_vec(0, -1, f)
    assert check_skew_symmetry(view, e, ef, window=3).passed


def test_derivative():
    V = LatticeVOA.from_gram([[2]], 8)
    assert check_derivative(PlainView(V), V.e((1,)), [V.e((-1,)), V.vacuum], window=3).passed


@pytest.mark.parametrize("make,c", [
    (lambda: HeisenbergSpace.standard(2, 1, 6), F(2)),
    (lambda: LatticeVOA.from_gram([[2]], 6), F(1)),
    (lambda: AffineVOA(1, 5), F(1)),
])
def test_central_charges(make, c):
    V = make()
    r = check_virasoro(V.lmode, [V.vacuum, V.heisenberg[0]], c)
    assert r.passed and r.result["central_charge"] == str(c)


def test_virasoro_wrong_charge_fails():
    V = HeisenbergSpace.standard(1, 1, 6)
    assert not check_virasoro(V.lmode, [V.vacuum], F(2)).passed


def test_graded_vector_json():
    V = HeisenbergSpace.standard(1, 1, 3)
    v = GradedVector(V.heisenberg[0])
    assert v.to_json()
    assert GradedVector.basis(((1, 0),)) == v
