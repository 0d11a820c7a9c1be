from fractions import Fraction as F

import pytest

from cosetva.affvoa import AffineVOA, central_charge, simple_quotient
from cosetva.coset import (
    CosetAlgebra,
    LatticeEmbedding,
    L_coset_act,
    SigmaFamily,
    check_deformation,
    check_reconstruction,
    check_z_relation,
    coset_virasoro,
    export_omega,
    quotient_algebra,
    reconstruct_E,
    sigma_witness,
    z_op_coeff,
)
from cosetva.coset.deform import DeformedSpace
from cosetva.heis import HeisenbergSpace
from cosetva.latvoa import LatticeVOA
from cosetva.latvoa import partition_count

ZERO = (F(0),)


def total_dims(space, top):
    return [sum(len(space.basis(w, c)) for c in space.charges_at(w)) for w in range(top + 1)]


@pytest.fixture(scope="module")
def va1():
    V = LatticeVOA.from_gram([[2]], 8)
    return V, CosetAlgebra(V)


def test_vacuum_space_of_lattice_is_group_algebra(va1):
    V, C = va1
    # one vacuum vector e^c per charge c, at weight c^2
    assert C.graded_dims(4) == {(F(0), ZERO): 1, (F(1), (F(-1),)): 1, (F(1), (F(1),)): 1,
                                (F(4), (F(-2),)): 1, (F(4), (F(2),)): 1}
    assert C.vacuum_basis(F(1), ZERO) == []


def test_vacuum_space_of_heisenberg_is_trivial():
    C = CosetAlgebra(HeisenbergSpace.standard(2, 3, 5))
    assert C.graded_dims(5) == {(0, ZERO * 2): 1}


def test_y_omega_on_group_algebra(va1):
    V, C = va1
    # Y_Omega(e^a, z)e^b = eps(a, b) e^{a+b}, with no z dependence
    for a, b in [((1,), (-1,)), ((1,), (1,)), ((-1,), (1,))]:
        want = dict(V.e(tuple(x + y for x, y in zip(a, b))))
        for p in range(-2, 3):
            got = C.y_coeff(V.e(a), F(p), V.e(b))
            assert got == (want if p == 0 else {})


def test_z_creation_on_affine():
    A = AffineVOA(2, 6)
    C = CosetAlgebra(A)
    e = A.gen_vector(0)
    assert z_op_coeff(C, e, 0, A.vacuum) == e
    assert z_op_coeff(C, e, -1, A.vacuum) == {}


@pytest.mark.parametrize("level", [F(1), F(2), F(3)])
def test_coset_weights_of_root_vectors(level):
    A = AffineVOA(level, 5)
    C = CosetAlgebra(A)
    e = A.gen_vector(0)
    # L_Omega(0) e = (1 - 1/level) e
    want = {k: (1 - 1 / level) * c for k, c in e.items() if level != 1}
    assert L_coset_act(C, 0, e) == want


@pytest.mark.parametrize("level", [F(1), F(2), F(4)])
def test_coset_central_charge(level):
    C = CosetAlgebra(AffineVOA(level, 5))
    assert C.rank == central_charge(level) - 1
    assert coset_virasoro(C).passed


def test_z_relation_bracket():
    A = AffineVOA(2, 5)
    C = CosetAlgebra(A)
    e, h, f = (A.gen_vector(g) for g in range(3))
    ws = [A.vacuum, e, f]
    assert check_z_relation(C, e, f, h, 1, ws, modes=(-2, 2)).passed
    assert check_z_relation(C, e, e, {}, 0, ws, modes=(-2, 2)).passed


def test_deformed_space_shifts_h_zero():
    H = HeisenbergSpace.standard(1, 2, 5)
    D = DeformedSpace(H, (F(1),))
    # h(0) picks up <h, beta> = level * beta on the vacuum
    assert D.hmode(0, 0, ()) == {(): 2}


def test_deformation_suite():
    V = LatticeVOA.from_gram([[2]], 5)
    C = CosetAlgebra(V)
    reps = check_deformation(C, (F(1, 2),), (F(1, 2),), [V.e((1,))], top=3)
    assert all(r.passed for r in reps)


def test_sigma_witness(va1):
    V, C = va1
    assert sigma_witness(C, (F(1),)) == V.e((1,))
    assert sigma_witness(C, ZERO) == V.vacuum
    with pytest.raises(ValueError, match="not witnessed"):
        sigma_witness(CosetAlgebra(AffineVOA(2, 4)), (F(1),))


def test_sigma_family_cocycle(va1):
    V, C = va1
    fam = SigmaFamily(C, [(F(1),)])
    assert fam.vector((F(2),)) == V.e((2,))
    for a in range(-2, 3):
        for b in range(-2, 3):
            assert fam.eps((a,), (b,)) in (1, -1)


def test_trivial_shift_quotient_relabels_omega(va1):
    V, C = va1
    Q = quotient_algebra(C, [], top=4)
    dims = Q.graded_dims()
    assert sorted(dims.values()) == sorted(C.graded_dims(4).values())
    assert all(w == 0 for w, _ in dims)


def test_full_shift_quotient_is_one_dimensional(va1):
    V, C = va1
    Q = quotient_algebra(C, [(F(1),)], top=4)
    assert Q.graded_dims() == {(F(0), ZERO): 1}


def test_heisenberg_reconstruction():
    H = HeisenbergSpace.standard(1, 2, 6)
    C = CosetAlgebra(H)
    E = reconstruct_E(H, export_omega(C, 4), 4)
    assert total_dims(E, 4) == [partition_count(n) for n in range(5)]
    assert all(r.passed for r in check_reconstruction(C, 4, [H.heisenberg[0]]))


def test_psi_on_heisenberg_generator(va1):
    V, C = va1
    emb = LatticeEmbedding(C, [(F(1),)])
    assert emb.apply(emb.VK.heisenberg[0]) == V.heisenberg[0]
    assert emb.apply(emb.VK.e((F(1),))) == V.e((1,))


def test_psi_on_simple_affine_quotient():
    Q = simple_quotient(2, 6)
    emb = LatticeEmbedding(CosetAlgebra(Q), [(F(2),)])
    # the basis vector 2h of lK maps to (1/l) (2h)(-1) 1 = h(-1) 1
    assert emb.apply(emb.VK.heisenberg[0]) == Q.gen_vector(1)
    # e^{lK generator} goes to the top vector e(-1)^2 1 of charge 2
    assert emb.apply(emb.VK.e((F(1),))) == {(((1, 0), (1, 0)), 0): 1}
