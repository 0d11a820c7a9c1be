"""Vacuum spaces Omega_W, the dressed operators Z and Y_Omega, and omega_Omega.

For u in V of charge alpha,

    Z(u, z) = E^-(alpha/l, z) Y(u, z) E^+(alpha/l, z),
    Y_Omega(u, z) = Z(u, z) z^{-alpha(0)/l}.

Everything is evaluated on basis keys of the ambient module and memoized;
vacuum-space vectors are kept as ambient vectors.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from ..exactnum import Exponent, RatFunc, ScalarError, int_offset, over_ell
from ..heis import omega_h_in
from ..linalg import Echelon, axpy, coordinates, nullspace
from ..voacore import (
    CheckReport,
    GradedVector,
    TruncationError,
    VertexAlgebra,
    VertexSpace,
    VertexView,
    add_charge,
    check_jacobi,
    check_virasoro,
    window_exponents,
)

__all__ = [
    "CosetModule",
    "CosetAlgebra",
    "CosetView",
    "vacuum_basis",
    "z_op_coeff",
    "y_omega_coeff",
    "omega_coset",
    "L_coset_act",
    "check_gen_jacobi_coset",
    "coset_virasoro",
]


def _unit(d, i):
    return tuple(Fraction(int(t == i)) for t in range(d))


class CosetModule:
    """Omega_W for a module W of the ambient algebra, with the maps Z and Y_Omega."""

    def __init__(self, coset: "CosetAlgebra | None", W: VertexSpace):
        self.coset = coset if coset is not None else self
        self.W = W
        self.ell = W.ell
        self.hdim = W.hdim
        self._vb: dict = {}
        self._ech: dict = {}
        self._D: dict = {}
        self._ep: dict = {}
        self._em: dict = {}

    @property
    def V(self) -> VertexAlgebra:
        return self.W.algebra

    # -- vacuum space ------------------------------------------------------
    def vacuum_basis(self, weight, charge) -> list:
        """Echelon basis of {w in W_(weight)^charge : h_i(m) w = 0 for m >= 1}."""
        slot = (weight, tuple(charge))
        got = self._vb.get(slot)
        if got is not None:
            return got
        W = self.W
        cols = W.basis(weight, charge)
        mw = W.min_weight(tuple(charge))
        depth = 0 if mw is None else int(weight - mw)

        def images(key):
            out = {}
            for i in range(self.hdim):
                for m in range(1, depth + 1):
                    for k, c in W.hmode(i, m, key).items():
                        out[(i, m, k)] = c
            return out

        basis = nullspace(cols, images) if cols else []
        self._vb[slot] = basis
        ech = Echelon()
        for b in basis:
            ech.add(b)
        self._ech[slot] = ech
        return basis

    def coords(self, vec: Mapping):
        """Coordinates of a homogeneous vacuum vector in the vacuum basis (keyed by pivot)."""
        if not vec:
            return {}
        k = next(iter(vec))
        slot = (self.W.weight(k), tuple(self.W.charge(k)))
        self.vacuum_basis(*slot)
        return coordinates(self._ech[slot], vec)

    def is_vacuum(self, vec: Mapping) -> bool:
        W = self.W
        for k in vec:
            depth = int(W.weight(k) - W.min_weight(W.charge(k)))
            break
        else:
            return True
        for i in range(self.hdim):
            for m in range(1, depth + 1):
                if W.hmode_vec(_unit(self.hdim, i), m, vec):
                    return False
        return True

    def slots(self, top=None) -> list:
        """(weight, charge) pairs with nonzero vacuum space, ambient weight <= top."""
        W = self.W
        top = W.truncation + getattr(W, "top_weight", 0) if top is None else top
        out = []
        for w in W.weights_upto(top):
            for c in W.charges_at(w):
                if self.vacuum_basis(w, c):
                    out.append((w, tuple(c)))
        return out

    def graded_dims(self, top=None) -> dict:
        return {s: len(self.vacuum_basis(*s)) for s in self.slots(top)}

    def realized_charges(self, top=None) -> list:
        return sorted({c for _, c in self.slots(top)})

    # -- Omega weights ------------------------------------------------------
    def pair(self, a, b):
        """<a, b>/l as an exponent (formal levels give an Exponent)."""
        return over_ell(self.W.pairing(a, b), self.ell)

    def omega_weight(self, weight, charge):
        """L_Omega(0)-eigenvalue of an ambient vector: weight - <c,c>/2l."""
        half = self.W.pairing(charge, charge) / 2
        if isinstance(self.ell, RatFunc) and not self.ell.is_constant():
            return Exponent(Fraction(weight), -half).collapse()
        ell = self.ell.constant_value() if isinstance(self.ell, RatFunc) else self.ell
        return Fraction(weight) - half / ell

    # -- exponentials on W ---------------------------------------------------
    def _hvec(self, alpha):
        return tuple(a / self.ell for a in alpha)

    def _eplus(self, h, key) -> list:
        got = self._ep.get((h, key))
        if got is not None:
            return got
        W = self.W
        depth = int(W.weight(key) - W.min_weight(W.charge(key)))
        terms = [{key: Fraction(1)}]
        for k in range(1, depth + 1):
            acc: dict = {}
            for m in range(1, k + 1):
                if terms[k - m]:
                    axpy(acc, W.hmode_vec(h, m, terms[k - m]), Fraction(1, k))
            terms.append(acc)
        self._ep[(h, key)] = terms
        return terms

    def _eminus(self, h, key, p) -> dict:
        if p == 0:
            return {key: Fraction(1)}
        got = self._em.get((h, key, p))
        if got is not None:
            return got
        acc: dict = {}
        for m in range(1, p + 1):
            prev = self._eminus(h, key, p - m)
            if prev:
                axpy(acc, self.W.hmode_vec(h, -m, prev), Fraction(-1, p))
        self._em[(h, key, p)] = acc
        return acc

    # -- Z and Y_Omega ---------------------------------------------------------
    def D(self, ukey, q: int, wkey) -> dict:
        """Coefficient of z^q in Z(u, z)w for basis keys u of V and w of W."""
        memo = self._D.get((ukey, q, wkey))
        if memo is not None:
            return memo
        V, W = self.V, self.W
        alpha = tuple(V.charge(ukey))
        lam = tuple(W.charge(wkey))
        c = add_charge(alpha, lam)
        target = V.weight(ukey) + W.weight(wkey) + q
        out: dict = {}
        if W.check_out(target, c):
            mw = W.min_weight(c)
            if not any(alpha):
                out = dict(W.ymode(ukey, -q - 1, wkey))
            else:
                h = self._hvec(alpha)
                for r, pr in enumerate(self._eplus(h, wkey)):
                    if not pr:
                        continue
                    p = 0
                    while target - p >= mw:
                        n = p - r - q - 1
                        y = W.ymode_vec({ukey: Fraction(1)}, n, pr)
                        for k, cy in y.items():
                            axpy(out, self._eminus(h, k, p), cy)
                        p += 1
        self._D[(ukey, q, wkey)] = out
        return out

    def z_coeff(self, u: Mapping, m: int, w: Mapping) -> dict:
        out: dict = {}
        for uk, uc in u.items():
            for wk, wc in w.items():
                d = self.D(uk, m, wk)
                if d:
                    axpy(out, d, uc * wc)
        return out

    def y_coeff(self, u: Mapping, p, w: Mapping) -> dict:
        """Coefficient of z^p in Y_Omega(u, z)w (u, w charge-homogeneous)."""
        if not u or not w:
            return {}
        alpha = self.V.vector_charge(u)
        lam = self.W.vector_charge(w)
        q = int_offset(p, -self.pair(alpha, lam))
        return self.z_coeff(u, q, w)

    def L_act(self, n: int, v: Mapping) -> dict:
        return self.W.ymode_vec(self.coset.omega, n + 1, v)


class CosetAlgebra(CosetModule):
    """Omega_V for the ambient vertex operator algebra V."""

    def __init__(self, V: VertexAlgebra):
        super().__init__(None, V)
        self.omega_h = GradedVector(omega_h_in(V))
        om = dict(V.omega)
        axpy(om, self.omega_h, -1)
        self.omega = GradedVector(om)
        self.rank = V.rank - V.hdim

    def module(self, W: VertexSpace) -> CosetModule:
        if W.algebra is not self.V:
            raise ValueError("module is not a module for this ambient algebra")
        return CosetModule(self, W)


class CosetView(VertexView):
    """Y_Omega coefficients for check_jacobi and the other checkers (c = 1, pairing <.,.>/l)."""

    name = "coset"

    def __init__(self, module: CosetModule):
        self.mod = module
        self.alg = module.coset
        self.truncation = module.W.truncation

    def _m(self, on_alg):
        return self.alg if on_alg else self.mod

    def coeff(self, u, p, x, on_alg=False):
        return self._m(on_alg).y_coeff(u, p, x)

    def charge(self, x, on_alg=False):
        return tuple(self._m(on_alg).W.vector_charge(x))

    def weight(self, x, on_alg=False):
        m = self._m(on_alg)
        return m.omega_weight(m.W.vector_weight(x), m.W.vector_charge(x))

    def min_weight(self, charge, on_alg=False):
        m = self._m(on_alg)
        mw = m.W.min_weight(tuple(charge))
        return None if mw is None else m.omega_weight(mw, charge)

    def pair(self, g, h):
        return self.mod.pair(g, h)

    def lm1(self, x, on_alg=False):
        return self._m(on_alg).L_act(-1, x)


def vacuum_basis(C: CosetModule, weight, charge) -> list:
    return [GradedVector(v) for v in C.vacuum_basis(weight, charge)]


def z_op_coeff(C: CosetModule, v: Mapping, m: int, w: Mapping) -> GradedVector:
    return GradedVector(C.z_coeff(v, m, w))


def y_omega_coeff(C: CosetModule, u: Mapping, n, w: Mapping) -> GradedVector:
    return GradedVector(C.y_coeff(u, n, w))


def omega_coset(C: CosetAlgebra) -> GradedVector:
    return C.omega


def L_coset_act(C: CosetModule, n: int, v: Mapping) -> GradedVector:
    return GradedVector(C.L_act(n, v))


def check_gen_jacobi_coset(C: CosetModule, u, v, w, window: int = 4) -> CheckReport:
    return check_jacobi(CosetView(C), u, v, w, window, name="coset-jacobi")


def coset_virasoro(C: CosetAlgebra, top=None, window=(-2, 2)) -> CheckReport:
    """Bracket extraction of the L_Omega central charge on vacuum vectors up to truncation - 4."""
    W = C.W
    top = W.truncation - 4 if top is None else top
    vecs = [v for s in C.slots(top) for v in C.vacuum_basis(*s)]
    return check_virasoro(lambda m, x: C.L_act(m, x), vecs, C.rank, window, name="coset-virasoro")
