from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cosetva.linalg import Echelon, axpy, coordinates, nullspace, scaled, span_basis


def dense_rank(rows, ncols):
    """Plain Gaussian elimination on a list of lists."""
    m = [[F(x) for x in r] for r in rows]
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=1, max_size=6))


def as_dict(row):
    return {j: F(x) for j, x in enumerate(row) if x}


def test_axpy_and_scaled():
    acc = {"a": F(1), "b": F(2)}
    axpy(acc, {"a": F(-1), "c": F(3)})
    assert acc == {"b": 2, "c": 3}
    axpy(acc, {"b": F(1)}, -2)
    assert acc == {"c": 3}
    assert scaled({"x": F(2)}, 0) == {}
    assert scaled({"x": F(2)}, F(1, 2)) == {"x": 1}


@given(matrices)
def test_echelon_rank_matches_dense_oracle(rows):
    ncols = len(rows[0])
    ech = span_basis(as_dict(r) for r in rows)
    assert len(ech) == dense_rank(rows, ncols)
    for r in rows:
        assert ech.contains(as_dict(r))


@given(matrices)
def test_echelon_rows_are_reduced(rows):
    ech = span_basis(as_dict(r) for r in rows)
    for p in ech.pivots():
        assert ech.rows[p][p] == 1
        for q in ech.pivots():
            if q != p:
                assert q not in ech.rows[p]


@given(matrices)
def test_nullspace_dimension_and_kernel(rows):
    ncols = len(rows[0])
    cols = list(range(ncols))

    def image(j):
        return {i: F(r[j]) for i, r in enumerate(rows) if r[j]}

    ker = nullspace(cols, image)
    assert len(ker) == ncols - dense_rank(rows, ncols)
    for v in ker:
        total = {}
        for j, c in v.items():
            axpy(total, image(j), c)
        assert total == {}


def test_coordinates():
    ech = Echelon()
    ech.add({0: F(1), 1: F(1)})
    ech.add({1: F(1)})
    coords = coordinates(ech, {0: F(3), 1: F(5)})
    rebuilt = {}
    for p, c in coords.items():
        axpy(rebuilt, ech.rows[p], c)
    assert rebuilt == {0: 3, 1: 5}
    with pytest.raises(ValueError):
        coordinates(ech, {2: F(1)})


def test_dependent_add_returns_none():
    ech = Echelon()
    assert ech.add({"x": F(2)}) == "x"
    assert ech.add({"x": F(-1)}) is None
    assert ech.add({}) is None
