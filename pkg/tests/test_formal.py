from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cosetva.exactnum import Exponent, binom
from cosetva.formal import (
    FormalSeries,
    SeriesError,
    binom_expand,
    delta_series,
    exponents_in_window,
    first_identity_coeff,
    monomial,
    residue,
    series_mul,
    three_term_coeff,
    verify_delta_identity,
)


def test_binom_expand_examples():
    s = binom_expand("z1-z2", F(1, 2), 1)
    assert s.terms == {(F(1, 2), F(0)): 1, (F(-1, 2), F(1)): F(-1, 2)}
    assert binom_expand("z1-z2", F(0), 3).terms == {(F(0), F(0)): 1}
    geo = binom_expand("z1-z2", F(-1), 2)
    assert geo.terms == {(F(-1), F(0)): 1, (F(-2), F(1)): 1, (F(-3), F(2)): 1}


def test_binom_expand_other_side():
    s = binom_expand("z2-z1", F(-1), 2)
    # (z2 - z1)^-1 = z2^-1 + z1 z2^-2 + z1^2 z2^-3
    assert s.terms == {(F(0), F(-1)): 1, (F(1), F(-2)): 1, (F(2), F(-3)): 1}
    with pytest.raises(SeriesError):
        binom_expand("z1+z2", F(1), 2)


def test_half_powers_telescope():
    a = binom_expand("z1-z2", F(1, 2), 6)
    b = binom_expand("z1-z2", F(-1, 2), 6)
    p = series_mul(a, b, ((F(-6), F(0)), (F(0), F(6))))
    assert p.terms == {(F(0), F(0)): 1}


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 4))
def test_integer_binomial_product(a, b, order):
    # (z1-z2)^a (z1-z2)^b = (z1-z2)^(a+b) on the common window
    sa, sb, sab = (binom_expand("z1-z2", F(x), order) for x in (a, b, a + b))
    win = ((F(a + b - order), F(a + b)), (F(0), F(order)))
    assert series_mul(sa, sb, win).restrict(win).terms == sab.restrict(win).terms


def test_delta_annihilated_by_z_minus_one():
    d = delta_series(-8, 8)
    f = monomial(F(1)) - monomial(F(0))
    assert series_mul(d, f, ((F(-5), F(5)),)).terms == {}


def test_multiplicative_unit_and_commutativity():
    a = FormalSeries({(F(1, 3), F(0)): F(2), (F(-2, 3), F(1)): F(-1)}, 2)
    one = monomial((F(0), F(0)))
    win = ((F(-3), F(3)), (F(-3), F(3)))
    assert series_mul(a, one, win) == a
    b = FormalSeries({(F(0), F(2)): F(5), (F(1), F(-1)): F(1, 2)}, 2)
    assert series_mul(a, b, win) == series_mul(b, a, win)


laurent = st.dictionaries(st.integers(-3, 3), st.fractions(min_value=-3, max_value=3, max_denominator=4), max_size=4)


@given(laurent, laurent, laurent)
def test_finite_series_product_is_associative(x, y, z):
    def ser(d):
        return FormalSeries({(F(k),): v for k, v in d.items()}, 1)

    wide, win = ((F(-9), F(9)),), ((F(-3), F(3)),)
    a, b, c = ser(x), ser(y), ser(z)
    left = series_mul(series_mul(a, b, wide), c, win)
    assert left == series_mul(a, series_mul(b, c, wide), win)


def test_unbounded_product_rejected():
    up = binom_expand("z1-z2", F(-1), 3)
    down = binom_expand("z2-z1", F(-1), 3)
    with pytest.raises(SeriesError):
        series_mul(up, down, ((F(-2), F(2)), (F(-2), F(2))))


def test_residues():
    assert residue(delta_series(-3, 3)) == 1
    assert residue(monomial(F(2))) == 0
    assert residue(monomial(F(-1)), exponent_class=F(1, 2)) == 0
    two = FormalSeries({(F(-1), F(3)): F(4), (F(0), F(1)): F(1)}, 2)
    assert residue(two, 0).terms == {(F(3),): F(4)}
    with pytest.raises(SeriesError):
        residue(delta_series(0, 3))


def test_exponents_in_window():
    assert exponents_in_window(F(1, 2), -2, 2) == [F(-3, 2), F(-1, 2), F(1, 2), F(3, 2)]
    assert exponents_in_window(F(0), -1, 1) == [-1, 0, 1]
    with pytest.raises(SeriesError):
        exponents_in_window(Exponent(F(0), F(1)), -1, 1)


def _expand_three_terms(r, s, k, p, span=12):
    """Enumerate every summand of the three terms and accumulate coefficients."""
    out = {"t1": {}, "t2": {}, "t3": {}}

    def add(term, key, c):
        d = out[term]
        d[key] = d.get(key, 0) + c

    for (i, j), cij in p.items():
        for n in range(-span, span + 1):
            m = n + k
            for t in range(span + 1):
                add("t1", (-n - 1, m - t + r + i, t + s + j), cij * binom(m, t) * (-1) ** t)
                add("t2", (-n - 1, t + r + i, m - t + s + j), cij * (1 if m % 2 == 0 else -1) * binom(m, t) * (-1) ** t)
                for u in range(r + i + 1):
                    c = cij * binom(n, t) * (-1) ** t * binom(r + i, u)
                    add("t3", (t + u + k, n - t, -n - 1 + r + i - u + s + j), c)
    return out


def test_first_identity_examples():
    # alpha = 0 collapses to the integral delta identity
    assert first_identity_coeff("lhs", 0, -1, 0, 0) == 1
    assert first_identity_coeff("lhs", 0, 0, -2, 1) == 1
    assert first_identity_coeff("rhs", 0, 0, -2, 1) == 1
    # (z1-z2)^(1/2) z0^(-3/2) piece
    assert first_identity_coeff("lhs", F(1, 2), F(-3, 2), F(-1, 2), 1) == F(-1, 2)
    with pytest.raises(SeriesError):
        first_identity_coeff("middle", 0, 0, 0, 0)


def test_first_identity_sides_agree_and_are_not_vacuous():
    for alpha in (F(0), F(1, 2), F(-3, 2), F(5, 3)):
        nonzero = 0
        for a in exponents_in_window(-alpha - 1, -3, 3):
            for b in exponents_in_window(alpha, -3, 3):
                for c in range(-3, 4):
                    lhs = first_identity_coeff("lhs", alpha, a, b, c)
                    assert lhs == first_identity_coeff("rhs", alpha, a, b, c)
                    nonzero += lhs != 0
        assert nonzero > 5


@pytest.mark.parametrize("r,s,k,p", [
    (0, 0, 0, {(0, 0): F(1)}),
    (1, 2, 0, {(0, 0): F(1)}),
    (0, 1, 2, {(1, 0): F(2), (0, 1): F(-1)}),
    (2, 0, 1, {(0, 2): F(1, 3)}),
])
def test_three_terms_match_enumeration(r, s, k, p):
    brute = _expand_three_terms(r, s, k, p)
    rng = range(-3, 4)
    for term in ("t1", "t2", "t3"):
        for a in rng:
            for b in rng:
                for c in rng:
                    want = brute[term].get((a, b, c), 0)
                    assert three_term_coeff(term, r, s, k, p, a, b, c) == want, (term, a, b, c)


def test_verify_delta_identity_examples():
    assert verify_delta_identity(0, 0, 0).passed
    assert verify_delta_identity(1, 0, 1, window=5).passed
    r = verify_delta_identity(0, 1, 2, p={(1, 0): F(2), (0, 1): F(-1)}, window=4, alphas=())
    assert r.passed and r.checked == 9 ** 3
    assert r.to_json()["result"] == "pass"
