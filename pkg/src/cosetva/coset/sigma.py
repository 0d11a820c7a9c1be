"""Charge-shift operators sigma_alpha = Y_Omega(u_alpha, 0).

The vector u_alpha is a witness: a charge-alpha vacuum vector killed by
L_Omega(-1).  Such a vector has L_Omega-weight zero, so it is searched for in
the single slot of ambient weight <alpha, alpha>/2l.  Exactly one solution (up
to scale) is required.

A ``SigmaFamily`` fixes the scales.  For a basis b_1..b_r of the shift
lattice, u_{b_i} is the raw witness, u_{-b_i} is rescaled so that
sigma_{b_i} sigma_{-b_i} = eps(b_i, -b_i) on 1, and every other u_alpha is
reached from 1 one basis step at a time by u_{b+a} = eps(b, a) sigma_b(u_a).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..exactnum import Exponent, RatFunc, ScalarError, format_exponent, is_integral
from ..latvoa import Lattice, make_cocycle
from ..linalg import axpy, nullspace
from ..voacore import CheckReport, GradedVector, TruncationError, _vec_json, add_charge, window_exponents
from .core import CosetAlgebra, CosetModule

__all__ = [
    "SigmaOperator",
    "SigmaFamily",
    "sigma_witness",
    "sigma_build",
    "sigma_apply",
    "check_sigma_suite",
]

WITNESS_FAILURE = "K-membership not witnessed at this truncation"


def _concrete(ell):
    if isinstance(ell, RatFunc):
        if not ell.is_constant():
            raise ScalarError("sigma operators need a concrete level")
        return ell.constant_value()
    return Fraction(ell)


def sigma_witness(C: CosetAlgebra, alpha) -> dict:
    """The unique (up to scale) u in Omega_V^alpha with L_Omega(-1)u = 0, scaled to leading coefficient 1."""
    alpha = tuple(Fraction(a) for a in alpha)
    V = C.V
    if not any(alpha):
        return dict(V.vacuum)
    weight = V.pairing(alpha, alpha) / (2 * _concrete(C.ell))
    if V.min_weight(alpha) is None or not V.in_range(weight + 1, alpha):
        raise ValueError(WITNESS_FAILURE)
    basis = C.vacuum_basis(weight, alpha)
    sols = nullspace(list(range(len(basis))), lambda j: C.L_act(-1, basis[j]))
    if len(sols) != 1:
        raise ValueError(WITNESS_FAILURE)
    u: dict = {}
    for j, c in sols[0].items():
        axpy(u, basis[j], c)
    lead = u[max(u, key=V.key_order)]
    return {k: c / lead for k, c in u.items()}


class SigmaOperator:
    """sigma_alpha acting on vacuum spaces of modules of the ambient algebra."""

    def __init__(self, C: CosetAlgebra, alpha, u: Mapping):
        self.C = C
        self.alpha = tuple(Fraction(a) for a in alpha)
        self.u = dict(u)

    def apply(self, M: CosetModule, w: Mapping) -> dict:
        """Coefficient of z^0 in Y_Omega(u_alpha, z)w."""
        if not w:
            return {}
        lam = M.W.vector_charge(w)
        if not is_integral(M.pair(self.alpha, lam)):
            raise ScalarError("charge of w is not in the dual of the shift lattice")
        return M.y_coeff(self.u, 0, w)

    def to_json(self):
        return {"alpha": [str(a) for a in self.alpha], "u": _vec_json(self.u)}


def sigma_build(C: CosetAlgebra, alpha) -> SigmaOperator:
    return SigmaOperator(C, alpha, sigma_witness(C, alpha))


def sigma_apply(sigma: SigmaOperator, M: CosetModule, w: Mapping) -> GradedVector:
    return GradedVector(sigma.apply(M, w))


class SigmaFamily:
    """Normalized sigma_alpha for alpha in the lattice spanned by ``basis`` (h-coordinates)."""

    def __init__(self, C: CosetAlgebra, basis: Sequence):
        self.C = C
        self.basis = [tuple(Fraction(x) for x in b) for b in basis]
        l = _concrete(C.ell)
        gram = [[C.V.pairing(a, b) / l for b in self.basis] for a in self.basis]
        # eps on the shift lattice with the pairing (1/l)<.,.>
        self.lattice = Lattice(gram)
        self.cocycle = make_cocycle(self.lattice)
        self._u: dict = {tuple(0 for _ in self.basis): dict(C.V.vacuum)}
        for i, b in enumerate(self.basis):
            e = tuple(int(t == i) for t in range(len(self.basis)))
            ne = tuple(-x for x in e)
            up = sigma_witness(C, b)
            um = sigma_witness(C, tuple(-x for x in b))
            self._u[e] = up
            back = SigmaOperator(C, b, up).apply(C, um)
            c = back.get(C.V.vacuum_key)
            if not c or len(back) != 1:
                raise ValueError(WITNESS_FAILURE)
            self._u[ne] = {k: v * self.cocycle(e, ne) / c for k, v in um.items()}

    def coords(self, alpha) -> tuple:
        """Integer coordinates of alpha in the basis."""
        alpha = tuple(Fraction(a) for a in alpha)
        r = len(self.basis)
        # solve sum n_i b_i = alpha over the rationals
        rows = [list(b) for b in self.basis]
        A = [[rows[i][j] for i in range(r)] + [alpha[j]] for j in range(len(alpha))]
        piv = []
        row = 0
        for col in range(r):
            p = next((k for k in range(row, len(A)) if A[k][col]), None)
            if p is None:
                continue
            A[row], A[p] = A[p], A[row]
            inv = 1 / A[row][col]
            A[row] = [x * inv for x in A[row]]
            for k in range(len(A)):
                if k != row and A[k][col]:
                    f = A[k][col]
                    A[k] = [x - f * y for x, y in zip(A[k], A[row])]
            piv.append(col)
            row += 1
        if any(A[k][r] for k in range(row, len(A))):
            raise ValueError("shift is outside the lattice")
        n = [Fraction(0)] * r
        for k, col in enumerate(piv):
            n[col] = A[k][r]
        if any(x.denominator != 1 for x in n):
            raise ValueError("shift is outside the lattice")
        return tuple(int(x) for x in n)

    def h_coords(self, n) -> tuple:
        d = len(self.basis[0])
        return tuple(sum(n[i] * self.basis[i][j] for i in range(len(n))) for j in range(d))

    def vector(self, alpha) -> dict:
        return self._vector(self.coords(alpha))

    def _vector(self, n) -> dict:
        got = self._u.get(n)
        if got is not None:
            return got
        i = next(t for t, x in enumerate(n) if x)
        s = 1 if n[i] > 0 else -1
        step = tuple(s * int(t == i) for t in range(len(n)))
        rest = tuple(x - y for x, y in zip(n, step))
        op = SigmaOperator(self.C, self.h_coords(step), self._vector(step))
        u = op.apply(self.C, self._vector(rest))
        if not u:
            raise ValueError(WITNESS_FAILURE)
        u = {k: c * self.cocycle(step, rest) for k, c in u.items()}
        self._u[n] = u
        return u

    def op(self, alpha) -> SigmaOperator:
        n = self.coords(alpha)
        return SigmaOperator(self.C, self.h_coords(n), self._vector(n))

    def eps(self, a, b) -> int:
        return self.cocycle(self.coords(a), self.coords(b))


def _coord_box(r: int, bound: int):
    if r == 0:
        yield ()
        return
    for rest in _coord_box(r - 1, bound):
        for x in range(-bound, bound + 1):
            yield rest + (x,)


def check_sigma_suite(F: SigmaFamily, M: CosetModule, ws: Iterable[Mapping], vs: Iterable[Mapping], bound: int = 2,
                      window: int = 3) -> list:
    """z-independence, charge shift, sign commutation and the product rule for |coords| <= bound."""
    C = F.C
    ws, vs = list(ws), list(vs)
    r = len(F.basis)
    shifts = list(_coord_box(r, bound))
    zind = CheckReport("sigma-z-independence", True, {"exponent_abs_max": window})
    shift = CheckReport("sigma-charge-shift", True, None)
    sign = CheckReport("sigma-sign-commutation", True, {"exponent_abs_max": window})
    prod = CheckReport("sigma-product", True, {"coords_abs_max": bound})
    ident = CheckReport("sigma-identity", True, None)

    def fail(rep, wit):
        if rep.passed:
            rep.passed = False
            rep.witness = wit

    for w in ws:
        s0 = F.op(tuple(0 for _ in F.basis[0])).apply(M, w)
        ident.checked += 1
        if axpy(dict(s0), w, -1):
            fail(ident, {"w": _vec_json(w)})
    for n in shifts:
        op = F.op(F.h_coords(n))
        alpha = op.alpha
        for w in ws:
            lam = M.W.vector_charge(w)
            try:
                img = op.apply(M, w)
            except TruncationError:
                zind.skipped += 1
                continue
            for p in window_exponents(-M.pair(alpha, lam), window):
                if p == 0:
                    continue
                try:
                    y = M.y_coeff(op.u, p, w)
                except TruncationError:
                    zind.skipped += 1
                    continue
                zind.checked += 1
                if y:
                    fail(zind, {"alpha": list(n), "w": _vec_json(w), "exponent": format_exponent(p)})
            shift.checked += 1
            if img and (M.W.vector_charge(img) != add_charge(alpha, lam) or not M.is_vacuum(img)):
                fail(shift, {"alpha": list(n), "w": _vec_json(w)})
            # sign commutation: Y_Omega(v,z) sigma = (-1)^{<alpha,g>/l} sigma Y_Omega(v,z)
            for v in vs:
                g = C.V.vector_charge(v)
                e = C.pair(alpha, g)
                if not is_integral(e):
                    raise ScalarError("shift pairs non-integrally with a charge")
                e = int(e.a) if isinstance(e, Exponent) else int(e)
                sgn = -1 if e % 2 else 1
                for p in window_exponents(-M.pair(g, add_charge(alpha, lam)), window):
                    try:
                        lhs = M.y_coeff(v, p, img) if img else {}
                        rhs = op.apply(M, M.y_coeff(v, p, w))
                    except TruncationError:
                        sign.skipped += 1
                        continue
                    sign.checked += 1
                    if axpy(dict(lhs), rhs, -sgn):
                        fail(sign, {"alpha": list(n), "v": _vec_json(v), "w": _vec_json(w), "exponent": format_exponent(p)})
        for m in shifts:
            op2 = F.op(F.h_coords(m))
            tot = tuple(a + b for a, b in zip(n, m))
            op12 = F.op(F.h_coords(tot))
            eps = F.cocycle(n, m)
            for w in ws:
                try:
                    lhs = op.apply(M, op2.apply(M, w))
                    rhs = op12.apply(M, w)
                except TruncationError:
                    prod.skipped += 1
                    continue
                prod.checked += 1
                if axpy(dict(lhs), rhs, -eps):
                    fail(prod, {"alpha1": list(n), "alpha2": list(m), "w": _vec_json(w)})
    return [ident, zind, shift, sign, prod]
