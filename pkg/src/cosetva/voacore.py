"""Vertex-algebra interface shared by every construction, and the identity checkers.

Spaces are truncated and bigraded by weight and charge.  A charge is a
tuple of rationals giving coordinates in a fixed basis of the Heisenberg
subspace h.  A :class:`VertexAlgebra` acts on a :class:`VertexSpace` (its
modules, itself included) through ``ymode``, which evaluates u_n w by the
normal-ordering recursion

    (a(-k)x)_n w = sum_{i>=0} C(k+i-1, i) [ a(-k-i) x_{n+i} w - (-1)^k x_{n-k-i} a(i) w ]

for a weight-one generator ``a`` and k >= 1, starting from primitive vectors
whose vertex operators each construction supplies.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping

from .exactnum import (
    Exponent,
    ScalarError,
    binom,
    exponent_residue,
    format_exponent,
    format_scalar,
    int_offset,
    is_integral,
    phase,
)
from .linalg import axpy

__all__ = [
    "GradedVector",
    "TruncationError",
    "VertexSpace",
    "VertexAlgebra",
    "VertexView",
    "PlainView",
    "AlgebraHandle",
    "CheckReport",
    "vertex_coeff",
    "check_jacobi",
    "check_weak_commutativity",
    "check_weak_associativity",
    "check_skew_symmetry",
    "check_virasoro",
    "check_derivative",
    "sweep",
    "worker_count",
    "window_exponents",
    "add_charge",
    "neg_charge",
]


class TruncationError(ArithmeticError):
    """A result would leave the truncated range."""


# ---------------------------------------------------------------------------
# vectors

class GradedVector(dict):
    """Sparse exact vector: basis key -> nonzero scalar."""

    __slots__ = ("weight", "charge")

    def __init__(self, *args, weight=None, charge=None, **kw):
        super().__init__(*args, **kw)
        for k in [k for k, v in self.items() if not v]:
            del self[k]
        self.weight = weight
        self.charge = charge

    @classmethod
    def basis(cls, key, weight=None, charge=None):
        return cls({key: Fraction(1)}, weight=weight, charge=charge)

    def _meta(self, other):
        if isinstance(other, GradedVector) and (other.weight, other.charge) == (self.weight, self.charge):
            return {"weight": self.weight, "charge": self.charge}
        if isinstance(other, GradedVector) and not other:
            return {"weight": self.weight, "charge": self.charge}
        return {}

    def __add__(self, other):
        if not isinstance(other, Mapping):
            return NotImplemented
        out = dict(self)
        axpy(out, other)
        return GradedVector(out, **self._meta(other))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Mapping):
            return NotImplemented
        out = dict(self)
        axpy(out, other, -1)
        return GradedVector(out, **self._meta(other))

    def __neg__(self):
        return GradedVector({k: -v for k, v in self.items()}, weight=self.weight, charge=self.charge)

    def __mul__(self, c):
        if isinstance(c, Mapping):
            return NotImplemented
        if not c:
            return GradedVector()
        return GradedVector({k: v * c for k, v in self.items()}, weight=self.weight, charge=self.charge)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return dict.__eq__(dict(self), dict(other))
        if other == 0:
            return not self
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    def to_json(self):
        return [[_key_json(k), format_scalar(v)] for k, v in sorted(self.items(), key=lambda kv: repr(kv[0]))]

    def __repr__(self):
        return f"GradedVector({dict.__repr__(self)})"


def _key_json(k):
    if isinstance(k, tuple):
        return [_key_json(x) for x in k]
    if isinstance(k, Fraction):
        return str(k)
    return k


def add_charge(a, b):
    return tuple(x + y for x, y in zip(a, b))


def neg_charge(a):
    return tuple(-x for x in a)


# ---------------------------------------------------------------------------
# spaces

class VertexSpace:
    """A truncated graded space acted on by a vertex algebra.

    Subclasses provide the grading, the action of the Heisenberg basis
    ``hmode``, of the algebra's generators ``gmode``, and of the algebra's
    primitive vectors ``prim_ymode``.  ``algebra`` is the acting vertex
    algebra (``self`` for the adjoint module).
    """

    algebra: "VertexAlgebra"
    ell: Any
    gram: tuple
    hdim: int

    def __init__(self):
        self._ycache: dict = {}

    # -- grading ------------------------------------------------------------
    def weight(self, key):
        raise NotImplementedError

    def charge(self, key):
        raise NotImplementedError

    def min_weight(self, charge):
        """Lower bound for weights in the charge sector, or None if the sector is empty."""
        raise NotImplementedError

    def in_range(self, weight, charge) -> bool:
        raise NotImplementedError

    def basis(self, weight, charge) -> list:
        raise NotImplementedError

    def charges_at(self, weight) -> list:
        raise NotImplementedError

    def weights_upto(self, top) -> list:
        """Weights w <= top carrying some basis vector (ascending)."""
        raise NotImplementedError

    def key_order(self, key):
        return key

    # -- actions ------------------------------------------------------------
    def hmode(self, i, n, key) -> dict:
        raise NotImplementedError

    def gmode(self, g, n, key) -> dict:
        raise NotImplementedError

    def prim_ymode(self, pkey, n, key) -> dict:
        raise NotImplementedError

    # -- derived ------------------------------------------------------------
    def pairing(self, a, b):
        """<a, b> for charges given in h-coordinates."""
        g = self.gram
        total = Fraction(0)
        for i, x in enumerate(a):
            if x:
                row = g[i]
                for j, y in enumerate(b):
                    if y:
                        total += x * row[j] * y
        return total

    def vector_weight(self, vec: Mapping):
        ws = {self.weight(k) for k in vec}
        if len(ws) != 1:
            raise ValueError("vector is not weight-homogeneous")
        return ws.pop()

    def vector_charge(self, vec: Mapping):
        cs = {tuple(self.charge(k)) for k in vec}
        if len(cs) != 1:
            raise ValueError("vector is not charge-homogeneous")
        return cs.pop()

    def hmode_vec(self, h, n, vec: Mapping) -> dict:
        """Action of sum_i h[i] beta_i(n)."""
        out: dict = {}
        for i, hi in enumerate(h):
            if not hi:
                continue
            for k, c in vec.items():
                axpy(out, self.hmode(i, n, k), c * hi)
        return out

    def gmode_vec(self, g, n, vec: Mapping) -> dict:
        out: dict = {}
        for k, c in vec.items():
            axpy(out, self.gmode(g, n, k), c)
        return out

    def check_out(self, weight, charge):
        """False if the sector is empty below ``weight``; raises if beyond truncation."""
        mw = self.min_weight(charge)
        if mw is None or weight < mw:
            return False
        if not self.in_range(weight, charge):
            raise TruncationError(f"truncation overflow: weight {weight} at charge {tuple(str(c) for c in charge)}")
        return True

    def ymode(self, ukey, n: int, wkey) -> dict:
        """u_n w for an algebra basis key and a space basis key (integral n)."""
        memo = self._ycache.get((ukey, n, wkey))
        if memo is not None:
            return memo
        A = self.algebra
        ch_u = A.charge(ukey)
        ch_w = self.charge(wkey)
        wt_u = A.weight(ukey)
        wt_w = self.weight(wkey)
        ch_out = add_charge(ch_u, ch_w)
        if not self.check_out(wt_u + wt_w - n - 1, ch_out):
            self._ycache[(ukey, n, wkey)] = {}
            return {}
        d = A.decompose(ukey)
        if d[0] == "prim":
            res = self.prim_ymode(ukey, n, wkey)
        else:
            _, g, k, rest = d
            res = {}
            wt_r = A.weight(rest)
            ch_rw = add_charge(A.charge(rest), ch_w)
            mw_rw = self.min_weight(ch_rw)
            i = 0
            while mw_rw is not None and wt_r + wt_w - (n + i) - 1 >= mw_rw:
                inner = self.ymode(rest, n + i, wkey)
                if inner:
                    cf = binom(k + i - 1, i)
                    for key, c in inner.items():
                        axpy(res, self.gmode(g, -k - i, key), c * cf)
                i += 1
            sign = -1 if k % 2 == 0 else 1
            ch_gw = add_charge(A.gen_charge(g), ch_w)
            mw_gw = self.min_weight(ch_gw)
            i = 0
            while mw_gw is not None and wt_w - i >= mw_gw:
                gw = self.gmode(g, i, wkey)
                if gw:
                    cf = binom(k + i - 1, i) * sign
                    for key, c in gw.items():
                        axpy(res, self.ymode(rest, n - k - i, key), c * cf)
                i += 1
        self._ycache[(ukey, n, wkey)] = res
        return res

    def ymode_vec(self, u: Mapping, n: int, w: Mapping) -> dict:
        out: dict = {}
        for uk, uc in u.items():
            for wk, wc in w.items():
                r = self.ymode(uk, n, wk)
                if r:
                    axpy(out, r, uc * wc)
        return out

    def lmode(self, n: int, vec: Mapping) -> dict:
        """L(n) = omega_{n+1}."""
        return self.ymode_vec(self.algebra.omega, n + 1, vec)

    def graded_dims(self, top, charge=None):
        out = {}
        for w in self.weights_upto(top):
            if charge is None:
                out[w] = sum(len(self.basis(w, c)) for c in self.charges_at(w))
            else:
                out[w] = len(self.basis(w, charge))
        return out


class VertexAlgebra(VertexSpace):
    """A truncated vertex algebra acting on itself.

    Subclasses provide ``decompose``, the generator list with their charges,
    the vacuum key, ``omega`` and ``rank``.
    """

    kind = "abstract"
    generators: tuple = ()
    vacuum_key: Any = None
    omega: dict
    rank: Any
    heisenberg: tuple  # vectors in V_(1) spanning h, in the order of the h-basis

    @property
    def algebra(self):
        return self

    def decompose(self, ukey):
        """('prim', ukey) or ('gen', g, k, rest) meaning u = g(-k) rest."""
        raise NotImplementedError

    def gen_charge(self, g):
        raise NotImplementedError

    @property
    def vacuum(self):
        return GradedVector.basis(self.vacuum_key)


def vertex_coeff(V: VertexSpace, u: Mapping, n, v: Mapping) -> GradedVector:
    """u_n v with a rational or Exponent mode index (must be integral here)."""
    if not is_integral(n):
        raise ScalarError(f"mode {format_exponent(n)} violates the Z-coset of an integrally graded algebra")
    n = int(n.a) if isinstance(n, Exponent) else int(n)
    return GradedVector(V.ymode_vec(u, n, v))


# ---------------------------------------------------------------------------
# views: a uniform coefficient interface for checkers

class VertexView:
    """Coefficient access used by the identity checkers.

    ``coeff(u, p, x, on_alg)`` is the coefficient of z^p in Y(u, z)x, with x
    in the algebra (on_alg True) or in the module.  Vectors must be charge
    homogeneous.
    """

    name = "view"

    truncation = 8

    def coeff(self, u, p, x, on_alg=False) -> dict:
        raise NotImplementedError

    def charge(self, x, on_alg=False):
        raise NotImplementedError

    def weight(self, x, on_alg=False):
        raise NotImplementedError

    def min_weight(self, charge, on_alg=False):
        raise NotImplementedError

    def pair(self, g, h):
        """C-valued representative of (g, h)."""
        raise NotImplementedError

    def cocycle(self, g, h):
        return Fraction(1)

    def shift(self, g, h):
        """Exponents of z in Y(u,z)w lie in shift(g,h) + Z."""
        return -self.pair(g, h)

    def lm1(self, x, on_alg=False) -> dict:
        raise NotImplementedError

    def add(self, g, h):
        return add_charge(g, h)


class PlainView(VertexView):
    """A vertex algebra acting on a module (possibly itself) with integral grading."""

    name = "plain"

    def __init__(self, module: VertexSpace):
        self.mod = module
        self.alg = module.algebra
        self.truncation = module.truncation

    def _space(self, on_alg):
        return self.alg if on_alg else self.mod

    def coeff(self, u, p, x, on_alg=False):
        n = -int_offset(p, 0) - 1
        return self._space(on_alg).ymode_vec(u, n, x)

    def charge(self, x, on_alg=False):
        return self._space(on_alg).vector_charge(x)

    def weight(self, x, on_alg=False):
        return self._space(on_alg).vector_weight(x)

    def min_weight(self, charge, on_alg=False):
        return self._space(on_alg).min_weight(charge)

    def pair(self, g, h):
        return Fraction(0)

    def lm1(self, x, on_alg=False):
        return self._space(on_alg).lmode(-1, x)


# ---------------------------------------------------------------------------
# reports

@dataclass
class CheckReport:
    check: str
    passed: bool
    window: Any
    inputs: dict = field(default_factory=dict)
    checked: int = 0
    skipped: int = 0
    witness: dict | None = None
    result: dict = field(default_factory=dict)

    def to_json(self):
        out = {
            "check": self.check,
            "inputs": self.inputs,
            "window": self.window,
            "result": {"status": "pass" if self.passed else "fail", "verified_on_window": self.passed,
                       "coefficients_checked": self.checked, "coefficients_beyond_truncation": self.skipped},
        }
        out["result"].update(self.result)
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    def __bool__(self):
        return self.passed


def _vec_json(v):
    if isinstance(v, GradedVector):
        return v.to_json()
    return GradedVector(v).to_json()


def _diff(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    axpy(out, b, -1)
    return out


def window_exponents(rep, W: int):
    """Exponents e = rep + k (k integer) with |e| <= W, or |k| <= W for formal exponents."""
    if isinstance(rep, Exponent) and rep.b != 0:
        base = Exponent(exponent_residue(rep.a, 1), rep.b)
        return [base + k for k in range(-W, W + 1)]
    r = exponent_residue(rep, 1)
    out = []
    k = -W - 1
    while True:
        e = r + k
        if e > W:
            break
        if e >= -W:
            out.append(e)
        k += 1
    return out


def _wsum(*xs):
    s = Fraction(0)
    for x in xs:
        s = s + x
    return s


# ---------------------------------------------------------------------------
# Jacobi

def jacobi_terms(view: VertexView, u, v, w, X, Y, Z):
    """The three terms of the generalized Jacobi identity at z0^X z1^Y z2^Z."""
    g = view.charge(u, True)
    h = view.charge(v, True)
    k = view.charge(w)
    gamma = view.pair(g, h)
    mu = -view.pair(g, k)
    wt_u, wt_v, wt_w = view.weight(u, True), view.weight(v, True), view.weight(w)
    n = int_offset(-X - gamma - 1, 0)
    t1: dict = {}
    mw_vw = view.min_weight(view.add(h, k))
    i = 0
    while mw_vw is not None and wt_v + wt_w + (Z - i) >= mw_vw:
        inner = view.coeff(v, Z - i, w)
        if inner:
            outer = view.coeff(u, Y - (n + gamma - i), inner)
            if outer:
                axpy(t1, outer, binom(n + gamma, i) * (-1) ** i)
        i += 1
    t2: dict = {}
    c = view.cocycle(g, h) * (1 if n % 2 == 0 else -1)
    mw_uw = view.min_weight(view.add(g, k))
    i = 0
    while mw_uw is not None and wt_u + wt_w + (Y - i) >= mw_uw:
        inner = view.coeff(u, Y - i, w)
        if inner:
            outer = view.coeff(v, Z - (n + gamma - i), inner)
            if outer:
                axpy(t2, outer, binom(n + gamma, i) * (-1) ** i * c)
        i += 1
    t3: dict = {}
    mw_uv = view.min_weight(view.add(g, h), True)
    j = 0
    while mw_uv is not None and wt_u + wt_v + (X - j) >= mw_uv:
        inner = view.coeff(u, X - j, v, True)
        if inner:
            m = int_offset(Y - mu + j, 0)
            outer = view.coeff(inner, Z + m + mu + 1, w)
            if outer:
                axpy(t3, outer, binom(m + mu, j) * (-1) ** j)
        j += 1
    return t1, t2, t3


def check_jacobi(view: VertexView, u, v, w, window: int = 4, out_weight_max=None, name="jacobi") -> CheckReport:
    """Compare every (z0, z1, z2)-coefficient of the generalized Jacobi identity on the window."""
    g, h, k = view.charge(u, True), view.charge(v, True), view.charge(w)
    gamma = view.pair(g, h)
    reps = (-gamma, view.shift(g, view.add(h, k)) + gamma, view.shift(h, k))
    report = CheckReport(name, True, {"exponent_abs_max": window},
                         {"u": _vec_json(u), "v": _vec_json(v), "w": _vec_json(w), "pairing": format_exponent(gamma)})
    base_wt = _wsum(view.weight(u, True), view.weight(v, True), view.weight(w))
    for X in window_exponents(reps[0], window):
        for Y in window_exponents(reps[1], window):
            for Z in window_exponents(reps[2], window):
                out_wt = base_wt + X + Y + Z + 1
                if out_weight_max is not None and _gt(out_wt, out_weight_max):
                    report.skipped += 1
                    continue
                try:
                    t1, t2, t3 = jacobi_terms(view, u, v, w, X, Y, Z)
                except TruncationError:
                    report.skipped += 1
                    continue
                report.checked += 1
                lhs = _diff(t1, t2)
                if _diff(lhs, t3):
                    report.passed = False
                    report.witness = {"exponents": [format_exponent(X), format_exponent(Y), format_exponent(Z)],
                                      "lhs": _vec_json(lhs), "rhs": _vec_json(t3)}
                    return report
    return report


def _gt(a, b):
    d = a - b
    if isinstance(d, Exponent):
        if d.b != 0:
            return False
        d = d.a
    try:
        return d > 0
    except TypeError:
        return False


# ---------------------------------------------------------------------------
# commutativity and associativity

def _commutator_coeff(view, u, v, w, kk, Y, Z, gamma, c):
    """Both sides of weak commutativity with shift kk at z1^Y z2^Z."""
    e = kk + gamma
    g, h, k = view.charge(u, True), view.charge(v, True), view.charge(w)
    wt_u, wt_v, wt_w = view.weight(u, True), view.weight(v, True), view.weight(w)
    lhs: dict = {}
    mw = view.min_weight(view.add(h, k))
    i = 0
    while mw is not None and wt_v + wt_w + (Z - i) >= mw:
        inner = view.coeff(v, Z - i, w)
        if inner:
            outer = view.coeff(u, Y - (e - i), inner)
            if outer:
                axpy(lhs, outer, binom(e, i) * (-1) ** i)
        i += 1
    rhs: dict = {}
    mw = view.min_weight(view.add(g, k))
    sign = c * (1 if kk % 2 == 0 else -1)
    i = 0
    while mw is not None and wt_u + wt_w + (Y - i) >= mw:
        inner = view.coeff(u, Y - i, w)
        if inner:
            outer = view.coeff(v, Z - (e - i), inner)
            if outer:
                axpy(rhs, outer, binom(e, i) * (-1) ** i * sign)
        i += 1
    return lhs, rhs


def check_weak_commutativity(view: VertexView, u, v, tests: Iterable, window: int = 4, k_max: int | None = None,
                             out_weight_max=None) -> CheckReport:
    """Least k with (z1-z2)^{k+(g,h)} Y(u,z1)Y(v,z2) = (-1)^k c (z2-z1)^{k+(g,h)} Y(v,z2)Y(u,z1) on the window."""
    tests = list(tests)
    g, h = view.charge(u, True), view.charge(v, True)
    gamma = view.pair(g, h)
    c = view.cocycle(g, h)
    if k_max is None:
        k_max = 2 * view.truncation
    first_fail = None
    report = CheckReport("commutativity", False, {"exponent_abs_max": window},
                         {"u": _vec_json(u), "v": _vec_json(v), "pairing": format_exponent(gamma)})
    for kk in range(0, k_max + 1):
        ok = True
        checked = skipped = 0
        for w in tests:
            k = view.charge(w)
            ry = view.shift(g, view.add(h, k))
            rz = view.shift(h, k)
            base = _wsum(view.weight(u, True), view.weight(v, True), view.weight(w))
            for Y in window_exponents(ry, window):
                for Z in window_exponents(rz, window):
                    if out_weight_max is not None and _gt(base + Y + Z + kk + gamma, out_weight_max):
                        skipped += 1
                        continue
                    try:
                        lhs, rhs = _commutator_coeff(view, u, v, w, kk, Y, Z, gamma, c)
                    except TruncationError:
                        skipped += 1
                        continue
                    checked += 1
                    if _diff(lhs, rhs):
                        ok = False
                        if first_fail is None or first_fail[0] < kk:
                            first_fail = (kk, {"k": kk, "w": _vec_json(w), "exponents": [format_exponent(Y), format_exponent(Z)],
                                               "lhs": _vec_json(lhs), "rhs": _vec_json(rhs)})
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            report.passed = True
            report.checked, report.skipped = checked, skipped
            report.result = {"k": kk}
            return report
    report.witness = first_fail[1] if first_fail else None
    report.result = {"k": None, "k_max": k_max}
    return report


def _assoc_coeff(view, u, v, w, ll, X, Z):
    g, h, k = view.charge(u, True), view.charge(v, True), view.charge(w)
    gp = view.pair(g, k)
    e0 = ll + gp
    wt_v, wt_w = view.weight(v, True), view.weight(w)
    lhs: dict = {}
    # (z0+z2)^{ll+gp} Y(u, z0+z2) x = sum_p u[p]x (z0+z2)^{ll+gp+p}
    mw = view.min_weight(view.add(h, k))
    i = 0
    while mw is not None and wt_v + wt_w + (Z - i) >= mw:
        inner = view.coeff(v, Z - i, w)
        if inner:
            p = X + i - e0
            outer = view.coeff(u, p, inner)
            if outer:
                axpy(lhs, outer, binom(e0 + p, i))
        i += 1
    rhs: dict = {}
    mw = view.min_weight(view.add(g, h), True)
    wt_u = view.weight(u, True)
    j = 0
    while mw is not None and wt_u + view.weight(v, True) + (X - j) >= mw:
        inner = view.coeff(u, X - j, v, True)
        if inner:
            outer = view.coeff(inner, Z - e0 + j, w)
            if outer:
                axpy(rhs, outer, binom(e0, j))
        j += 1
    return lhs, rhs


def check_weak_associativity(view: VertexView, u, vs: Iterable, w, window: int = 4, l_max: int | None = None,
                             out_weight_max=None) -> CheckReport:
    """Least l with (z0+z2)^{l+(g1,h)} Y(u,z0+z2)Y(v,z2)w = (z2+z0)^{l+(g1,h)} Y(Y(u,z0)v,z2)w for every v in ``vs``."""
    vs = list(vs)
    if l_max is None:
        l_max = 2 * view.truncation
    g, k = view.charge(u, True), view.charge(w)
    report = CheckReport("associativity", False, {"exponent_abs_max": window},
                         {"u": _vec_json(u), "w": _vec_json(w), "v_count": len(vs)})
    first_fail = None
    for ll in range(0, l_max + 1):
        ok = True
        checked = skipped = 0
        for v in vs:
            h = view.charge(v, True)
            rx = view.shift(g, h)
            rz = view.shift(h, k)
            base = _wsum(view.weight(u, True), view.weight(v, True), view.weight(w))
            for X in window_exponents(rx, window):
                for Z in window_exponents(rz, window):
                    if out_weight_max is not None and _gt(base + X + Z + ll + view.pair(g, k), out_weight_max):
                        skipped += 1
                        continue
                    try:
                        lhs, rhs = _assoc_coeff(view, u, v, w, ll, X, Z)
                    except TruncationError:
                        skipped += 1
                        continue
                    checked += 1
                    if _diff(lhs, rhs):
                        ok = False
                        if first_fail is None or first_fail[0] < ll:
                            first_fail = (ll, {"l": ll, "v": _vec_json(v), "exponents": [format_exponent(X), format_exponent(Z)],
                                               "lhs": _vec_json(lhs), "rhs": _vec_json(rhs)})
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            report.passed = True
            report.checked, report.skipped = checked, skipped
            report.result = {"l": ll}
            return report
    report.witness = first_fail[1] if first_fail else None
    report.result = {"l": None, "l_max": l_max}
    return report


# ---------------------------------------------------------------------------
# skew symmetry

def check_skew_symmetry(view: VertexView, u, v, window: int = 4, cyclotomic: bool = True,
                        out_weight_max=None) -> CheckReport:
    """Y(u,z)v = c(g,h) e^{pi i (g,h)} e^{zL(-1)} Y(v, e^{pi i} z) u coefficient-wise (u, v in the algebra)."""
    g, h = view.charge(u, True), view.charge(v, True)
    gamma = view.pair(g, h)
    pre = view.cocycle(g, h) * phase(gamma, cyclotomic)
    report = CheckReport("skew", True, {"exponent_abs_max": window},
                         {"u": _vec_json(u), "v": _vec_json(v), "pairing": format_exponent(gamma)})
    wt_u, wt_v = view.weight(u, True), view.weight(v, True)
    mw = view.min_weight(view.add(g, h), True)
    for q in window_exponents(view.shift(g, h), window):
        if out_weight_max is not None and _gt(wt_u + wt_v + q, out_weight_max):
            report.skipped += 1
            continue
        try:
            lhs = view.coeff(u, q, v, True)
            rhs: dict = {}
            kk = 0
            while mw is not None and wt_u + wt_v + q - kk >= mw:
                term = view.coeff(v, q - kk, u, True)
                for _ in range(kk):
                    if not term:
                        break
                    term = view.lm1(term, True)
                if term:
                    fact = Fraction(1)
                    for t in range(2, kk + 1):
                        fact *= t
                    axpy(rhs, term, pre * phase(q - kk, cyclotomic) / fact)
                kk += 1
        except TruncationError:
            report.skipped += 1
            continue
        report.checked += 1
        if _diff(lhs, rhs):
            report.passed = False
            report.witness = {"exponent": format_exponent(q), "lhs": _vec_json(lhs), "rhs": _vec_json(rhs)}
            return report
    return report


# ---------------------------------------------------------------------------
# Virasoro and L(-1)-derivative

def check_virasoro(lmode: Callable[[int, Mapping], dict], vectors: Iterable[Mapping], expected_c, window=(-2, 2),
                   name="virasoro") -> CheckReport:
    """[L(m),L(n)]v = (m-n)L(m+n)v + (m^3-m)/12 delta_{m+n,0} c v for m, n in the window."""
    lo, hi = window
    vectors = list(vectors)
    report = CheckReport(name, True, {"modes": [lo, hi]}, {"expected_c": format_scalar(expected_c), "vectors": len(vectors)})
    extracted = None
    for v in vectors:
        for m in range(lo, hi + 1):
            for n in range(lo, hi + 1):
                try:
                    lhs = _diff(lmode(m, lmode(n, v)), lmode(n, lmode(m, v)))
                    rhs = {k: c * (m - n) for k, c in lmode(m + n, v).items()}
                except TruncationError:
                    report.skipped += 1
                    continue
                report.checked += 1
                central = _diff(lhs, rhs)
                if m + n == 0 and m * m * m - m != 0:
                    # central term must be a multiple of v
                    ratio = None
                    for k, c in v.items():
                        ratio = central.get(k, 0) / c
                        break
                    if ratio is not None:
                        got_c = ratio * 12 / (m * m * m - m)
                        if extracted is None:
                            extracted = got_c
                        if got_c != expected_c:
                            report.passed = False
                    axpy(central, v, -(Fraction(m * m * m - m, 12) * expected_c))
                if central or not report.passed:
                    report.passed = False
                    report.witness = {"m": m, "n": n, "v": _vec_json(v), "defect": _vec_json(central)}
                    report.result = {"central_charge": format_scalar(extracted) if extracted is not None else None}
                    return report
    report.result = {"central_charge": format_scalar(extracted) if extracted is not None else None}
    return report


def check_derivative(view: VertexView, u, xs: Iterable, window: int = 4) -> CheckReport:
    """Coefficients of Y(L(-1)u, z)x equal those of d/dz Y(u, z)x."""
    lu = view.lm1(u, True)
    report = CheckReport("l-1-derivative", True, {"exponent_abs_max": window}, {"u": _vec_json(u)})
    g = view.charge(u, True)
    for x in xs:
        k = view.charge(x)
        for p in window_exponents(view.shift(g, k), window):
            try:
                lhs = view.coeff(lu, p, x) if lu else {}
                rhs = {key: c * (p + 1) for key, c in view.coeff(u, p + 1, x).items()}
                rhs = {key: c for key, c in rhs.items() if c}
            except TruncationError:
                report.skipped += 1
                continue
            report.checked += 1
            if _diff(lhs, rhs):
                report.passed = False
                report.witness = {"exponent": format_exponent(p), "x": _vec_json(x)}
                return report
    return report


# ---------------------------------------------------------------------------
# sweeps

def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("COSETVA_WORKERS", "1")))
    except ValueError:
        return 1


_SWEEP_FN = None


def _sweep_call(idx_item):
    idx, item = idx_item
    return idx, _SWEEP_FN(item)


def sweep(fn: Callable, items: list, workers: int | None = None) -> list:
    """Apply fn to every item; results are returned in item order.

    With more than one worker, items run in forked processes that share the
    parent's caches at fork time.
    """
    global _SWEEP_FN
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    import multiprocessing as mp

    _SWEEP_FN = fn
    ctx = mp.get_context("fork")
    with ctx.Pool(workers) as pool:
        out = pool.map(_sweep_call, list(enumerate(items)))
    _SWEEP_FN = None
    return [r for _, r in sorted(out, key=lambda t: t[0])]


# ---------------------------------------------------------------------------
# handles

@dataclass
class AlgebraHandle:
    """A constructed algebra with the descriptor it was built from."""

    kind: str
    algebra: Any
    descriptor: dict
    coset: Any = None

    @property
    def vacuum(self):
        return self.algebra.vacuum

    @property
    def omega(self):
        return self.algebra.omega

    @property
    def rank(self):
        return self.algebra.rank

    def manifest(self, top=None):
        A = self.algebra
        top = A.truncation if top is None else top
        rows = []
        for w in A.weights_upto(top):
            for c in A.charges_at(w):
                d = len(A.basis(w, c))
                if d:
                    rows.append({"weight": format_scalar(w), "charge": [format_scalar(x) for x in c], "dim": d})
        return rows

    def to_json(self):
        return {"kind": self.kind, "descriptor": self.descriptor, "rank": format_scalar(self.rank),
                "manifest": self.manifest()}

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True)
