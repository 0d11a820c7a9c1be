from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cosetva.exactnum import ScalarError
from cosetva.latvoa import (
    Lattice,
    LatticeVOA,
    dual_lattice,
    graded_dims_by_enumeration,
    lattice_from_json,
    lattice_vertex_coeff,
    make_cocycle,
    partition_count,
)
from cosetva.voacore import PlainView, check_jacobi, check_weak_commutativity

A1 = [[2]]
A2 = [[2, -1], [-1, 2]]


def test_partition_count():
    assert [partition_count(n) for n in range(10)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]
    assert partition_count(-1) == 0


def test_dual_lattice():
    d = dual_lattice(Lattice(A1))
    assert d.basis == ((F(1, 2),),)
    assert d.contains((F(1, 2),)) and not d.contains((F(1, 3),))
    d2 = dual_lattice(Lattice(A2))
    assert d2.basis == ((F(2, 3), F(1, 3)), (F(1, 3), F(2, 3)))
    assert d2.contains((F(1, 3), F(2, 3)))


def test_vectors_up_to_norm_bound():
    L = Lattice(A2)
    vecs = L.vectors_up_to(2)
    # the origin and the six roots
    assert len(vecs) == 7
    assert all(L.norm(v) <= 4 for v in vecs)


@pytest.mark.parametrize("gram", [A1, A2, [[2, 1], [1, 4]], [[0, 1], [1, 0]]])
def test_cocycle_commutator_is_sign_of_pairing(gram):
    L = Lattice(gram)
    eps = make_cocycle(L)
    pts = list(product(range(-2, 3), repeat=L.rank))
    for a in pts:
        for b in pts:
            assert eps.commutator(a, b) == (-1) ** int(L.pairing(a, b) % 2)


@given(st.tuples(*[st.integers(-3, 3)] * 2), st.tuples(*[st.integers(-3, 3)] * 2), st.tuples(*[st.integers(-3, 3)] * 2))
def test_cocycle_is_bimultiplicative(a, b, c):
    eps = make_cocycle(Lattice(A2))
    ab = tuple(x + y for x, y in zip(a, b))
    assert eps(ab, c) == eps(a, c) * eps(b, c)
    assert eps(c, ab) == eps(c, a) * eps(c, b)


def test_hyperbolic_cocycle():
    eps = make_cocycle(Lattice([[0, 1], [1, 0]]))
    assert eps.commutator((1, 0), (0, 1)) == -1


def test_odd_lattice_rejected():
    with pytest.raises(ScalarError):
        LatticeVOA(Lattice([[1]]), 3)


def test_vertex_operator_on_opposite_root():
    V = LatticeVOA.from_gram(A1, 6)
    s = lattice_vertex_coeff(V, (1,), (-3, 0), V.e((-1,)))
    zero = (F(0),)
    # Y(e^a, z) e^-a = z^-2 (1 + a(-1) z + (a(-1)^2 + a(-2)) z^2 / 2 + ...)
    assert (-3,) not in s.terms
    assert s.terms[(-2,)] == {(zero, ()): 1}
    assert s.terms[(-1,)] == {(zero, ((1, 0),)): 1}
    assert s.terms[(0,)] == {(zero, ((1, 0), (1, 0))): F(1, 2), (zero, ((2, 0),)): F(1, 2)}


def test_creation_property():
    V = LatticeVOA.from_gram(A2, 5)
    for a in [(1, 0), (0, -1), (1, 1)]:
        s = lattice_vertex_coeff(V, a, (-4, 0), V.vacuum)
        assert all(p[0] >= 0 for p in s.terms)
        assert s.terms[(0,)] == V.e(a)


@pytest.mark.parametrize("gram", [A1, A2])
def test_dims_match_enumeration(gram):
    V = LatticeVOA.from_gram(gram, 4)
    want = graded_dims_by_enumeration(V.lattice, 4)
    for w in range(5):
        got = sum(len(V.basis(w, c)) for c in V.charges_at(w))
        assert got == want.get(F(w), 0)


def test_a1_character():
    V = LatticeVOA.from_gram(A1, 5)
    assert [sum(len(V.basis(w, c)) for c in V.charges_at(w)) for w in range(6)] == [1, 3, 4, 7, 13, 19]


def test_module_on_dual_coset():
    V = LatticeVOA.from_gram(A1, 5)
    W = V.module((F(1, 2),), 4)
    assert W.min_weight((F(1, 2),)) == F(1, 4)
    assert W.min_weight((F(-1, 2),)) == F(1, 4)
    assert W.min_weight((F(0),)) is None


def test_jacobi_on_roots():
    V = LatticeVOA.from_gram(A1, 9)
    view = PlainView(V)
    ea, eb = V.e((1,)), V.e((-1,))
    assert check_jacobi(view, ea, eb, ea, window=3).passed


def test_locality_orders():
    V = LatticeVOA.from_gram(A1, 8)
    view = PlainView(V)
    tests = [V.vacuum, V.e((1,)), V.e((-1,))]
    assert check_weak_commutativity(view, V.e((1,)), V.e((-1,)), tests, window=3).result["k"] == 2
    assert check_weak_commutativity(view, V.e((1,)), V.e((1,)), tests, window=3).result["k"] == 0


def test_lattice_from_json():
    L = lattice_from_json({"gram": [["2", "-1"], [-1, 2]]})
    assert L.gram == ((2, -1), (-1, 2))
    with pytest.raises(ScalarError):
        Lattice([[2, 2], [2, 2]])
