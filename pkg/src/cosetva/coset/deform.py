"""Simple-current deformations W^(beta) and their comparison with W.

On e^beta (x) w the ambient algebra acts by

    Y(v, z)(e^beta (x) w) = e^beta (x) Y(E^+(-beta, -z) z^{beta(0)} v, z) w.

Keys of W^(beta) are the keys of W (the factor e^beta is implicit).  For a
weight-one generator g of charge gamma this gives g(n) -> g(n + <beta, gamma>)
plus a constant <beta(1)g, 1> at n = 0; a primitive p of charge gamma has its
modes shifted by <beta, gamma>.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..exactnum import RatFunc, ScalarError, format_exponent
from ..linalg import axpy
from ..voacore import CheckReport, TruncationError, VertexSpace, _vec_json, window_exponents
from .core import CosetModule

__all__ = ["DeformedSpace", "deform", "compare_coset_tables", "check_deformation", "check_theta_agreement"]


def _concrete(ell):
    if isinstance(ell, RatFunc):
        if not ell.is_constant():
            raise ScalarError("deformation weights need a concrete level")
        return ell.constant_value()
    return Fraction(ell)


class DeformedSpace(VertexSpace):
    """W^(beta) for beta in the dual of the charge lattice of the acting algebra."""

    kind = "deformed"

    def __init__(self, base: VertexSpace, beta: Sequence):
        super().__init__()
        self.base = base
        self.beta = tuple(Fraction(x) for x in beta)
        if len(self.beta) != base.hdim:
            raise ValueError("beta has the wrong number of coordinates")
        self.ell = base.ell
        self._l = _concrete(base.ell)
        self.gram = base.gram
        self.hdim = base.hdim
        self.truncation = base.truncation
        self.top_weight = getattr(base, "top_weight", 0)
        V = base.algebra
        for w in V.weights_upto(V.truncation):
            for c in V.charges_at(w):
                if base.pairing(self.beta, c).denominator != 1:
                    raise ScalarError("non-integral pairing of beta with the charge lattice")
        self._lb = tuple(self._l * b for b in self.beta)
        # <beta, beta_i>, the h(0) shift per basis direction, scaled by l
        self._h0 = tuple(self._l * base.pairing(self.beta, tuple(Fraction(int(t == i)) for t in range(self.hdim)))
                         for i in range(self.hdim))
        self._gconst = {}
        for g in V.generators:
            gv = V.gen_vector(g)
            if V.vector_weight(gv) != 1:
                raise ValueError("deformation expects weight-one generators")
            c = V.hmode_vec(self.beta, 1, gv).get(V.vacuum_key, Fraction(0))
            self._gconst[g] = c
        self._shift_cache: dict = {}

    @property
    def algebra(self):
        return self.base.algebra

    def _wshift(self, c_old):
        return self.base.pairing(self.beta, c_old) + self._l * self.base.pairing(self.beta, self.beta) / 2

    def _old(self, charge):
        return tuple(c - s for c, s in zip(charge, self._lb))

    def weight(self, key):
        return self.base.weight(key) + self._wshift(self.base.charge(key))

    def charge(self, key):
        return tuple(c + s for c, s in zip(self.base.charge(key), self._lb))

    def min_weight(self, charge):
        old = self._old(charge)
        mw = self.base.min_weight(old)
        return None if mw is None else mw + self._wshift(old)

    def in_range(self, weight, charge):
        old = self._old(charge)
        return self.base.in_range(weight - self._wshift(old), old)

    def basis(self, weight, charge):
        old = self._old(charge)
        return self.base.basis(weight - self._wshift(old), old)

    def _pairs(self):
        b = self.base
        top = b.truncation + self.top_weight
        for w in b.weights_upto(top):
            for c in b.charges_at(w):
                yield w + self._wshift(c), tuple(x + s for x, s in zip(c, self._lb))

    def charges_at(self, weight):
        return sorted({c for w, c in self._pairs() if w == weight})

    def weights_upto(self, top):
        return sorted({w for w, _ in self._pairs() if w <= top})

    def key_order(self, key):
        return self.base.key_order(key)

    def hmode(self, i, n, key):
        out = dict(self.base.hmode(i, n, key))
        if n == 0 and self._h0[i]:
            axpy(out, {key: self._h0[i]})
        return out

    def _gshift(self, g):
        s = self._shift_cache.get(g)
        if s is None:
            p = self.base.pairing(self.beta, self.algebra.gen_charge(g))
            if p.denominator != 1:
                raise ScalarError("non-integral pairing of beta with a generator charge")
            s = self._shift_cache[g] = int(p)
        return s

    def gmode(self, g, n, key):
        out = dict(self.base.gmode(g, n + self._gshift(g), key))
        c = self._gconst[g]
        if n == 0 and c:
            axpy(out, {key: c})
        return out

    def prim_ymode(self, pkey, n, key):
        s = self.base.pairing(self.beta, self.algebra.charge(pkey))
        if s.denominator != 1:
            raise ScalarError("non-integral pairing of beta with a primitive charge")
        return self.base.prim_ymode(pkey, n + int(s), key)

    def descriptor(self):
        inner = self.base.descriptor() if hasattr(self.base, "descriptor") else {"type": self.base.kind}
        return {"type": "deformed", "beta": [str(b) for b in self.beta], "base": inner}


def deform(W, beta) -> "CosetModule | DeformedSpace":
    """W^(beta); a CosetModule in gives a CosetModule out."""
    if isinstance(W, CosetModule):
        return W.coset.module(DeformedSpace(W.W, beta))
    return DeformedSpace(W, beta)


def compare_coset_tables(C1: CosetModule, C2: CosetModule, us: Iterable[Mapping], top=None, window: int = 3,
                         name="coset-table") -> CheckReport:
    """Vacuum bases and Y_Omega tables of C1 and C2 agree under the identity on keys.

    Slots of C1 are matched to C2 through the key of the first basis vector,
    so the two modules may carry different weight and charge labels.
    """
    W1, W2 = C1.W, C2.W
    report = CheckReport(name, True, {"exponent_abs_max": window})
    us = list(us)
    for slot in C1.slots(top):
        b1 = C1.vacuum_basis(*slot)
        k = next(iter(b1[0]))
        slot2 = (W2.weight(k), tuple(W2.charge(k)))
        b2 = C2.vacuum_basis(*slot2)
        report.checked += 1
        if [dict(v) for v in b1] != [dict(v) for v in b2]:
            report.passed = False
            report.witness = {"slot": [str(slot[0]), [str(c) for c in slot[1]]], "reason": "vacuum bases differ"}
            return report
        for w in b1:
            lam1 = W1.vector_charge(w)
            for u in us:
                alpha = C1.V.vector_charge(u)
                for p in window_exponents(-C1.pair(alpha, lam1), window):
                    try:
                        y1 = C1.y_coeff(u, p, w)
                        y2 = C2.y_coeff(u, p, w)
                    except TruncationError:
                        report.skipped += 1
                        continue
                    report.checked += 1
                    if axpy(dict(y1), y2, -1):
                        report.passed = False
                        report.witness = {"u": _vec_json(u), "w": _vec_json(w), "exponent": format_exponent(p)}
                        return report
    return report


def check_deformation(C: CosetModule, beta, beta2, us: Sequence[Mapping], top=None, window: int = 3) -> list:
    """W^(0) = W, (W^(b))^(-b) = W, (W^(b))^(b2) = W^(b+b2) and the intertwining of Y_Omega by e^b (x) -."""
    zero = tuple(0 for _ in beta)
    D = deform(C, beta)
    total = tuple(Fraction(a) + Fraction(b) for a, b in zip(beta, beta2))
    neg = tuple(-Fraction(b) for b in beta)
    out = [
        compare_coset_tables(C, deform(C, zero), us, top, window, "deformation-zero"),
        compare_coset_tables(C, deform(D, neg), us, top, window, "deformation-round-trip"),
        compare_coset_tables(deform(D, beta2), deform(C, total), us, None, window, "deformation-composition"),
        compare_coset_tables(C, D, us, top, window, "deformation-intertwining"),
    ]
    return out


def check_theta_agreement(D: VertexSpace, T: VertexSpace, top=None) -> CheckReport:
    """The deformation and the theta twist agree on gradings and generator modes."""
    report = CheckReport("theta-agreement", True, None)
    top = D.truncation - 1 + getattr(D, "top_weight", 0) if top is None else top
    if D.weights_upto(top) != T.weights_upto(top):
        report.passed = False
        report.witness = {"reason": "weights differ"}
        return report
    V = D.algebra
    for w in D.weights_upto(top):
        if D.charges_at(w) != T.charges_at(w):
            report.passed = False
            report.witness = {"weight": str(w), "reason": "charges differ"}
            return report
        for c in D.charges_at(w):
            for key in D.basis(w, c):
                for g in V.generators:
                    for n in range(-1, 3):
                        try:
                            a, b = D.gmode(g, n, key), T.gmode(g, n, key)
                        except TruncationError:
                            report.skipped += 1
                            continue
                        report.checked += 1
                        if axpy(dict(a), b, -1):
                            report.passed = False
                            report.witness = {"generator": g, "mode": n}
                            return report
    return report
