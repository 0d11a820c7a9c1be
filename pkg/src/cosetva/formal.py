"""Sparse formal series in up to three variables, and delta-function identities.

A :class:`FormalSeries` stores finitely many terms together with what is
known about the series it approximates: for each variable a support bound
``[lo, hi]`` (``None`` meaning unbounded) and a validity range inside which
the stored terms are the true coefficients.  Products check these bounds
before summing, so a product is either exact on the requested window or an
error.

Delta functions are never stored; the identities below extract single
coefficients in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Iterable

from .exactnum import (
    Exponent,
    ScalarError,
    binom,
    exponent_residue,
    format_exponent,
    format_scalar,
    is_integral,
)

__all__ = [
    "FormalSeries",
    "SeriesError",
    "binom_expand",
    "series_mul",
    "residue",
    "delta_series",
    "monomial",
    "DeltaReport",
    "verify_delta_identity",
    "first_identity_coeff",
    "three_term_coeff",
    "exponents_in_window",
]


class SeriesError(ValueError):
    pass


def _residue_key(e):
    if isinstance(e, Exponent) and e.b != 0:
        return Exponent(exponent_residue(e.a, 1), e.b)
    return exponent_residue(e, 1)


def _le(x, y):
    """x <= y for exponents in a common Z-coset, None meaning +inf for y."""
    if y is None:
        return True
    d = y - x
    if isinstance(d, Exponent):
        if d.b != 0:
            raise SeriesError("comparison across Z-cosets")
        d = d.a
    return d >= 0


def _ge(x, y):
    """x >= y, None meaning -inf for y."""
    if y is None:
        return True
    return _le(y, x)


class FormalSeries:
    """Finite store of terms of a series in ``nvars`` variables.

    ``support`` and ``valid`` are per-variable pairs ``(lo, hi)``; ``None``
    marks an unbounded side.  Stored terms with zero coefficient are dropped.
    """

    __slots__ = ("nvars", "terms", "support", "valid")

    def __init__(self, terms=None, nvars=1, support=None, valid=None):
        self.nvars = nvars
        clean = {}
        for exps, c in (terms or {}).items():
            if not isinstance(exps, tuple):
                exps = (exps,)
            if len(exps) != nvars:
                raise SeriesError("exponent tuple has the wrong length")
            if c:
                clean[exps] = c
        self.terms = clean
        if support is None:
            support = self._finite_support()
        if valid is None:
            valid = tuple((None, None) for _ in range(nvars))
        self.support = tuple(support)
        self.valid = tuple(valid)
        for exps in clean:
            for j, e in enumerate(exps):
                lo, hi = self.support[j]
                if not (_ge(e, lo) and _le(e, hi)):
                    raise SeriesError("stored exponent outside declared support")

    def _finite_support(self):
        out = []
        for j in range(self.nvars):
            col = [e[j] for e in self.terms]
            if not col:
                # no terms: any bound is valid, pick the tightest
                out.append((Fraction(0), Fraction(0)))
                continue
            lo = hi = col[0]
            for e in col[1:]:
                if _le(e, lo):
                    lo = e
                if _ge(e, hi):
                    hi = e
            out.append((lo, hi))
        return tuple(out)

    # -- access --------------------------------------------------------
    def coefficient(self, *exps):
        if len(exps) != self.nvars:
            raise SeriesError("exponent tuple has the wrong length")
        for j, e in enumerate(exps):
            lo, hi = self.valid[j]
            if not (_ge(e, lo) and _le(e, hi)):
                raise SeriesError(f"exponent {format_exponent(e)} outside the validity range")
        return self.terms.get(tuple(exps), 0)

    def sectors(self):
        out = {}
        for exps, c in self.terms.items():
            key = tuple(_residue_key(e) for e in exps)
            out.setdefault(key, {})[exps] = c
        return out

    def lower_bound(self, var=0):
        return self.support[var][0]

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: _sort_key(kv[0])))

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __repr__(self):
        body = " + ".join(f"({_fmt_coeff(c)})*z^{tuple(format_exponent(e) for e in k)}" for k, c in self)
        return f"FormalSeries[{self.nvars}]({body or '0'})"

    # -- linear structure ---------------------------------------------
    def _merge_bounds(self, other):
        sup, val = [], []
        for j in range(self.nvars):
            (a_lo, a_hi), (b_lo, b_hi) = self.support[j], other.support[j]
            lo = None if a_lo is None or b_lo is None else (a_lo if _le(a_lo, b_lo) else b_lo)
            hi = None if a_hi is None or b_hi is None else (a_hi if _ge(a_hi, b_hi) else b_hi)
            sup.append((lo, hi))
            (a_vlo, a_vhi), (b_vlo, b_vhi) = self.valid[j], other.valid[j]
            vlo = b_vlo if a_vlo is None else a_vlo if b_vlo is None else (a_vlo if _ge(a_vlo, b_vlo) else b_vlo)
            vhi = b_vhi if a_vhi is None else a_vhi if b_vhi is None else (a_vhi if _le(a_vhi, b_vhi) else b_vhi)
            val.append((vlo, vhi))
        return sup, val

    def __add__(self, other):
        if not isinstance(other, FormalSeries) or other.nvars != self.nvars:
            return NotImplemented
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        sup, val = self._merge_bounds(other)
        return FormalSeries(terms, self.nvars, sup, val)

    def __neg__(self):
        return FormalSeries({k: -c for k, c in self.terms.items()}, self.nvars, self.support, self.valid)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return FormalSeries({k: c * s for k, c in self.terms.items()}, self.nvars, self.support, self.valid)

    def restrict(self, window):
        """Keep only terms inside the window (per-variable (lo, hi))."""
        keep = {k: c for k, c in self.terms.items() if all(_ge(e, w[0]) and _le(e, w[1]) for e, w in zip(k, window))}
        return FormalSeries(keep, self.nvars, self.support, self.valid)

    def map_coefficients(self, fn: Callable):
        return FormalSeries({k: fn(c) for k, c in self.terms.items()}, self.nvars, self.support, self.valid)

    # -- serialization -------------------------------------------------
    def to_records(self):
        recs = []
        for exps, c in self:
            recs.append(
                {
                    "sector": [format_exponent(_residue_key(e)) for e in exps],
                    "exponent": [format_exponent(e) for e in exps],
                    "coefficient": _fmt_coeff(c),
                }
            )
        return recs


def _fmt_coeff(c):
    if hasattr(c, "to_json"):
        return c.to_json()
    return format_scalar(c)


def _sort_key(exps):
    out = []
    for e in exps:
        if isinstance(e, Exponent):
            out.append((e.b, e.a))
        else:
            out.append((Fraction(0), Fraction(e)))
    return tuple(out)


# ---------------------------------------------------------------------------
# constructors

def monomial(exps, coeff=Fraction(1)):
    exps = tuple(exps) if isinstance(exps, (tuple, list)) else (exps,)
    return FormalSeries({exps: coeff}, len(exps))


def binom_expand(sign: str, e, order: int) -> FormalSeries:
    """(z1 - z2)^e or (z2 - z1)^e up to ``order`` in the second-listed variable.

    ``sign`` is ``"z1-z2"`` (expand in nonnegative powers of z2) or
    ``"z2-z1"`` (expand in nonnegative powers of z1).  Variables are ordered
    (z1, z2) in the result.
    """
    if order < 0:
        raise SeriesError("order must be nonnegative")
    if sign not in ("z1-z2", "z2-z1"):
        raise SeriesError(f"unknown sign convention {sign!r}")
    terms = {}
    finite = is_integral(e) and (e.a if isinstance(e, Exponent) else e) >= 0
    top = order
    if finite:
        top = min(order, int(e.a if isinstance(e, Exponent) else e))
    for i in range(top + 1):
        c = binom(e, i) * (-1) ** i
        if sign == "z1-z2":
            terms[(e - i, Fraction(i))] = c
        else:
            terms[(Fraction(i), e - i)] = c
    exact_all = finite and top == int(e.a if isinstance(e, Exponent) else e)
    if sign == "z1-z2":
        support = ((None if not exact_all else e - top, e), (Fraction(0), None if not exact_all else Fraction(top)))
        valid = ((None, None), (None, None)) if exact_all else ((e - order, None), (None, Fraction(order)))
    else:
        support = ((Fraction(0), None if not exact_all else Fraction(top)), (None if not exact_all else e - top, e))
        valid = ((None, None), (None, None)) if exact_all else ((None, Fraction(order)), (e - order, None))
    return FormalSeries(terms, 2, support, valid)


def delta_series(lo: int, hi: int) -> FormalSeries:
    """delta(z) = sum_n z^n, stored on [lo, hi] and exact only there."""
    terms = {(Fraction(n),): Fraction(1) for n in range(lo, hi + 1)}
    return FormalSeries(terms, 1, ((None, None),), ((Fraction(lo), Fraction(hi)),))


# ---------------------------------------------------------------------------
# products and residues

def exponents_in_window(rep, lo, hi):
    """All exponents congruent to ``rep`` mod Z with lo <= e <= hi (rational case)."""
    if isinstance(rep, Exponent) and rep.b != 0:
        raise SeriesError("rational window needs concrete exponents")
    rep = Fraction(rep.a if isinstance(rep, Exponent) else rep)
    r = exponent_residue(rep, 1)
    start = -(-(Fraction(lo) - r) // 1)
    out = []
    e = r + start
    while e <= hi:
        out.append(e)
        e += 1
    return out


def series_mul(a: FormalSeries, b: FormalSeries, window) -> FormalSeries:
    """Exact product of a and b restricted to ``window``.

    ``window`` holds one (lo, hi) pair of exponents per variable.  The
    support and validity bounds of the factors must guarantee that every
    coefficient in the window is a finite sum of stored terms.
    """
    if a.nvars != b.nvars:
        raise SeriesError("series have different numbers of variables")
    n = a.nvars
    window = tuple(window)
    if len(window) != n:
        raise SeriesError("window has the wrong length")
    for zero in (a, b):
        if not zero.terms and all(v == (None, None) for v in zero.valid):
            return FormalSeries({}, n, None, window)
    for j in range(n):
        wlo, whi = window[j]
        (la, ua), (lb, ub) = a.support[j], b.support[j]
        (va_lo, va_hi), (vb_lo, vb_hi) = a.valid[j], b.valid[j]
        if la is not None and lb is not None:
            need_a = (la, whi - lb)
            need_b = (lb, whi - la)
        elif la is not None and ua is not None:
            need_a = (la, ua)
            need_b = (wlo - ua, whi - la)
        elif lb is not None and ub is not None:
            need_b = (lb, ub)
            need_a = (wlo - ub, whi - lb)
        elif ua is not None and ub is not None:
            need_a = (wlo - ub, ua)
            need_b = (wlo - ua, ub)
        else:
            raise SeriesError("product has infinitely many contributions")
        for (lo, hi), (vlo, vhi) in ((need_a, (va_lo, va_hi)), (need_b, (vb_lo, vb_hi))):
            if not (_ge(lo, vlo) and _le(hi, vhi)):
                raise SeriesError("window exceeds the validity range of a factor")
    out = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            if all(_ge(e, w[0]) and _le(e, w[1]) for e, w in zip(k, window)):
                c = ca * cb
                out[k] = out[k] + c if k in out else c
    sup = []
    for j in range(n):
        (la, ua), (lb, ub) = a.support[j], b.support[j]
        lo = None if la is None or lb is None else la + lb
        hi = None if ua is None or ub is None else ua + ub
        sup.append((lo, hi))
    return FormalSeries(out, n, sup, window)


def residue(a: FormalSeries, var: int = 0, exponent_class=Fraction(0)):
    """Coefficient of z_var^{-1}; zero when -1 is not in ``exponent_class``.

    For a one-variable series the result is a coefficient; otherwise a
    series in the remaining variables.
    """
    if _residue_key(exponent_class) != _residue_key(Fraction(-1)):
        if a.nvars == 1:
            return Fraction(0)
        return FormalSeries({}, a.nvars - 1)
    lo, hi = a.valid[var]
    if not (_ge(Fraction(-1), lo) and _le(Fraction(-1), hi)):
        raise SeriesError("z^-1 lies outside the validity range")
    if a.nvars == 1:
        return a.terms.get((Fraction(-1),), Fraction(0))
    terms = {}
    for k, c in a.terms.items():
        if k[var] == -1:
            terms[k[:var] + k[var + 1:]] = c
    val = a.valid[:var] + a.valid[var + 1:]
    return FormalSeries(terms, a.nvars - 1, None, val)


# ---------------------------------------------------------------------------
# delta-function identities, coefficient by coefficient

def first_identity_coeff(side: str, alpha, a, b, c):
    """Coefficient of z0^a z1^b z2^c in either side of

    z0^-1 ((z1-z2)/z0)^alpha delta((z1-z2)/z0)
        = z1^-1 ((z0+z2)/z1)^-alpha delta((z0+z2)/z1),

    both sides expanded in nonnegative powers of z2.
    """
    alpha = Fraction(alpha)
    c = Fraction(c)
    if c < 0 or c.denominator != 1:
        return Fraction(0)
    ci = int(c)
    if side == "lhs":
        # sum_n z0^{-n-alpha-1} (z1-z2)^{n+alpha}
        n = -Fraction(a) - alpha - 1
        if n.denominator != 1:
            return Fraction(0)
        top = n + alpha
        if Fraction(b) != top - ci:
            return Fraction(0)
        return binom(top, ci) * (-1) ** ci
    if side == "rhs":
        # sum_n z1^{-n+alpha-1} (z0+z2)^{n-alpha}
        n = alpha - 1 - Fraction(b)
        if n.denominator != 1:
            return Fraction(0)
        top = n - alpha
        if Fraction(a) != top - ci:
            return Fraction(0)
        return binom(top, ci)
    raise SeriesError(f"unknown side {side!r}")


def three_term_coeff(term: str, r: int, s: int, k: int, p: dict, a: int, b: int, c: int):
    """Coefficient of z0^a z1^b z2^c in one of the three terms of

    z0^-1 delta((z1-z2)/z0) z1^r z2^s (z1-z2)^k p(z1,z2)
      - z0^-1 delta((z2-z1)/(-z0)) z1^r z2^s (-z2+z1)^k p(z1,z2)
      = z2^-1 delta((z1-z0)/z2) (z2+z0)^r z2^s z0^k p(z2+z0, z2).

    ``p`` maps (i, j) to the coefficient of z1^i z2^j.
    """
    total = Fraction(0)
    if term == "t1":
        n = -a - 1
        for (i, j), cij in p.items():
            t = c - s - j
            if t < 0:
                continue
            if n + k - t + r + i != b:
                continue
            total += cij * binom(n + k, t) * (-1) ** t
        return total
    if term == "t2":
        n = -a - 1
        sign = 1 if (n + k) % 2 == 0 else -1
        for (i, j), cij in p.items():
            t = b - r - i
            if t < 0:
                continue
            if n + k - t + s + j != c:
                continue
            total += cij * sign * binom(n + k, t) * (-1) ** t
        return total
    if term == "t3":
        for (i, j), cij in p.items():
            if -b - 1 + s + j + r + i - a + k != c:
                continue
            m = r + i
            for t in range(0, a - k + 1):
                n = b + t
                u = a - k - t
                total += cij * binom(n, t) * (-1) ** t * binom(m, u)
        return total
    raise SeriesError(f"unknown term {term!r}")


@dataclass
class DeltaReport:
    passed: bool
    window: int
    checked: int
    mismatch: tuple | None = None
    details: dict = field(default_factory=dict)

    def to_json(self):
        out = {
            "check": "delta-identity",
            "window": self.window,
            "result": "pass" if self.passed else "fail",
            "checked": self.checked,
        }
        if self.mismatch is not None:
            out["witness"] = [format_exponent(e) for e in self.mismatch]
        out.update(self.details)
        return out


def verify_delta_identity(r: int, s: int, k: int, p=None, window: int = 6,
                          alphas: Iterable = (Fraction(0), Fraction(1, 2), Fraction(-3, 2), Fraction(5, 3))) -> DeltaReport:
    """Compare both delta identities coefficient by coefficient on the window.

    Every exponent has absolute value at most ``window``.  Returns the first
    mismatching (z0, z1, z2) exponent triple on failure.
    """
    if p is None:
        p = {(0, 0): Fraction(1)}
    checked = 0
    rng = range(-window, window + 1)
    for a, b, c in iproduct(rng, rng, rng):
        lhs = three_term_coeff("t1", r, s, k, p, a, b, c) - three_term_coeff("t2", r, s, k, p, a, b, c)
        rhs = three_term_coeff("t3", r, s, k, p, a, b, c)
        checked += 1
        if lhs != rhs:
            return DeltaReport(False, window, checked, (a, b, c), {"identity": "three-term"})
    for alpha in alphas:
        alpha = Fraction(alpha)
        z0s = exponents_in_window(-alpha - 1, -window, window)
        z1s = exponents_in_window(alpha, -window, window)
        for a in z0s:
            for b in z1s:
                for c in rng:
                    checked += 1
                    if first_identity_coeff("lhs", alpha, a, b, c) != first_identity_coeff("rhs", alpha, a, b, c):
                        return DeltaReport(False, window, checked, (a, b, c), {"identity": "first", "alpha": str(alpha)})
    return DeltaReport(True, window, checked)
