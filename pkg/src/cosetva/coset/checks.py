"""Coset-level identities: the Z-algebra relation, the charge rule, the L_Omega(-1)
derivative, [L_Omega(m), h(n)] = 0, the conjugation formula and the generator property."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..exactnum import binom, format_exponent
from ..linalg import Echelon, axpy
from ..voacore import CheckReport, GradedVector, TruncationError, _vec_json, add_charge, window_exponents
from .core import CosetAlgebra, CosetModule, CosetView, _unit

__all__ = [
    "check_z_relation",
    "check_charge_rule",
    "check_coset_derivative",
    "check_lomega_h",
    "check_conjugation",
    "generator_property",
    "check_charges_in_dual",
]


def _z_series_bound(C: CosetModule, u, w):
    """Smallest m with Z(u, m)w possibly nonzero."""
    W, V = C.W, C.V
    c = add_charge(V.vector_charge(u), W.vector_charge(w))
    mw = W.min_weight(c)
    return mw - V.vector_weight(u) - W.vector_weight(w)


def check_z_relation(C: CosetModule, u: Mapping, v: Mapping, bracket: Mapping, form_uv, ws: Iterable[Mapping],
                     modes=(-4, 4)) -> CheckReport:
    """(1-z2/z1)^g Z(u,z1)Z(v,z2) - (1-z1/z2)^g Z(v,z2)Z(u,z1), g = <a,b>/l, against the two-case right side.

    ``bracket`` is [u, v] as a vector of V and ``form_uv`` is <u, v>.
    """
    V, W = C.V, C.W
    alpha, beta = V.vector_charge(u), V.vector_charge(v)
    gamma = C.pair(alpha, beta)
    total = add_charge(alpha, beta)
    lo, hi = modes
    report = CheckReport("z-algebra", True, {"modes": [lo, hi]},
                         {"u": _vec_json(u), "v": _vec_json(v), "case": "alpha+beta=0" if not any(total) else "alpha+beta!=0"})
    for w in ws:
        lam = W.vector_charge(w)
        bu = _z_series_bound(C, u, w)
        bv = _z_series_bound(C, v, w)
        bu_vw = C.W.min_weight(add_charge(beta, lam))
        bv_uw = C.W.min_weight(add_charge(alpha, lam))
        for m1 in range(lo, hi + 1):
            for m2 in range(lo, hi + 1):
                try:
                    lhs: dict = {}
                    i = 0
                    # Z(v, m2-i)w has weight wt v + wt w + m2 - i
                    while bu_vw is not None and V.vector_weight(v) + W.vector_weight(w) + m2 - i >= bu_vw:
                        inner = C.z_coeff(v, m2 - i, w)
                        if inner:
                            axpy(lhs, C.z_coeff(u, m1 + i, inner), binom(gamma, i) * (-1) ** i)
                        i += 1
                    i = 0
                    while bv_uw is not None and V.vector_weight(u) + W.vector_weight(w) + m1 - i >= bv_uw:
                        inner = C.z_coeff(u, m1 - i, w)
                        if inner:
                            axpy(lhs, C.z_coeff(v, m2 + i, inner), -binom(gamma, i) * (-1) ** i)
                        i += 1
                    if any(total):
                        rhs = C.z_coeff(bracket, m1 + m2 + 1, w) if bracket else {}
                    else:
                        rhs = {}
                        if m1 + m2 == -2 and form_uv:
                            scal = W.pairing(alpha, lam) + C.ell * (m2 + 1)
                            rhs = {k: c * form_uv * scal for k, c in w.items()}
                            rhs = {k: c for k, c in rhs.items() if c}
                except TruncationError:
                    report.skipped += 1
                    continue
                report.checked += 1
                if axpy(dict(lhs), rhs, -1):
                    report.passed = False
                    report.witness = {"m1": m1, "m2": m2, "w": _vec_json(w), "lhs": _vec_json(lhs), "rhs": _vec_json(rhs)}
                    return report
    return report


def check_charge_rule(C: CosetModule, u: Mapping, ws: Iterable[Mapping], window: int = 3, modes=(-2, 2)) -> CheckReport:
    """[h(n), Y_Omega(u, z)] = delta_{n,0} <h, alpha> Y_Omega(u, z) on ambient vectors."""
    W = C.W
    alpha = C.V.vector_charge(u)
    report = CheckReport("coset-charge-rule", True, {"exponent_abs_max": window, "modes": list(modes)})
    for w in ws:
        lam = W.vector_charge(w)
        for p in window_exponents(-C.pair(alpha, lam), window):
            for i in range(C.hdim):
                h = _unit(C.hdim, i)
                for n in range(modes[0], modes[1] + 1):
                    try:
                        lhs = W.hmode_vec(h, n, C.y_coeff(u, p, w))
                        hw = W.hmode_vec(h, n, w)
                        if hw:
                            lam2 = W.vector_charge(hw)
                            # h(n) keeps the charge, so the exponent class is unchanged
                            assert lam2 == lam
                        axpy(lhs, C.y_coeff(u, p, hw) if hw else {}, -1)
                        if n == 0:
                            axpy(lhs, C.y_coeff(u, p, w), -W.pairing(h, alpha))
                    except TruncationError:
                        report.skipped += 1
                        continue
                    report.checked += 1
                    if lhs:
                        report.passed = False
                        report.witness = {"n": n, "direction": i + 1, "exponent": format_exponent(p)}
                        return report
    return report


def check_coset_derivative(C: CosetModule, a: Mapping, ws: Iterable[Mapping], window: int = 3) -> CheckReport:
    """[L_Omega(-1), Y_Omega(a, z)] = d/dz Y_Omega(a, z) on vacuum vectors."""
    W = C.W
    alpha = C.V.vector_charge(a)
    report = CheckReport("coset-derivative", True, {"exponent_abs_max": window})
    for w in ws:
        lam = W.vector_charge(w)
        lw = C.L_act(-1, w)
        for p in window_exponents(-C.pair(alpha, lam), window):
            try:
                lhs = C.L_act(-1, C.y_coeff(a, p, w))
                axpy(lhs, C.y_coeff(a, p, lw) if lw else {}, -1)
                rhs = {k: c * (p + 1) for k, c in C.y_coeff(a, p + 1, w).items()}
                rhs = {k: c for k, c in rhs.items() if c}
            except TruncationError:
                report.skipped += 1
                continue
            report.checked += 1
            if axpy(lhs, rhs, -1):
                report.passed = False
                report.witness = {"exponent": format_exponent(p), "w": _vec_json(w)}
                return report
    return report


def check_lomega_h(C: CosetModule, top=None, modes=(-3, 3)) -> CheckReport:
    """[L_Omega(m), h(n)] = 0 on ambient basis vectors."""
    W = C.W
    top = W.truncation - 3 + getattr(W, "top_weight", 0) if top is None else top
    report = CheckReport("coset-virasoro-heisenberg", True, {"modes": list(modes)})
    for w in W.weights_upto(top):
        for ch in W.charges_at(w):
            for key in W.basis(w, ch):
                x = {key: Fraction(1)}
                for i in range(C.hdim):
                    h = _unit(C.hdim, i)
                    for m in range(modes[0], modes[1] + 1):
                        for n in range(modes[0], modes[1] + 1):
                            try:
                                lhs = C.L_act(m, W.hmode_vec(h, n, x))
                                axpy(lhs, W.hmode_vec(h, n, C.L_act(m, x)), -1)
                            except TruncationError:
                                report.skipped += 1
                                continue
                            report.checked += 1
                            if lhs:
                                report.passed = False
                                report.witness = {"m": m, "n": n, "direction": i + 1}
                                return report
    return report


def check_conjugation(C: CosetModule, u: Mapping, h, ws: Iterable[Mapping], order: int = 3, window: int = 3) -> CheckReport:
    """E^-(h,z2) Y(u,z1) E^-(-h,z2) = (1 - z2/z1)^{<alpha,h>} Y(u,z1), compared at z1^a z2^b."""
    W = C.W
    alpha = C.V.vector_charge(u)
    h = tuple(Fraction(x) for x in h)
    neg = tuple(-x for x in h)
    e = W.pairing(alpha, h)
    report = CheckReport("conjugation", True, {"z1_abs_max": window, "z2_order": order})
    for w in ws:
        wkeys = list(w.items())
        for a in range(-window, window + 1):
            for b in range(0, order + 1):
                try:
                    lhs: dict = {}
                    for j in range(b + 1):
                        inner: dict = {}
                        for k, c in wkeys:
                            axpy(inner, C._eminus(neg, k, j), c)
                        y = W.ymode_vec(u, -a - 1, inner)
                        for k, c in y.items():
                            axpy(lhs, C._eminus(h, k, b - j), c)
                    rhs = {k: c * binom(e, b) * (-1) ** b for k, c in W.ymode_vec(u, -a - b - 1, w).items()}
                    rhs = {k: c for k, c in rhs.items() if c}
                except TruncationError:
                    report.skipped += 1
                    continue
                report.checked += 1
                if axpy(lhs, rhs, -1):
                    report.passed = False
                    report.witness = {"z1": a, "z2": b, "w": _vec_json(w)}
                    return report
    return report


def generator_property(C: CosetAlgebra, gens: Sequence[Mapping], top=None) -> CheckReport:
    """The span of Z(u1,m1)...Z(uk,mk)1 (u_i in ``gens``) equals Omega_V in every (weight, charge) slot."""
    V = C.V
    top = V.truncation if top is None else top
    spans: dict = {}
    frontier = [dict(V.vacuum)]

    def slot_of(vec):
        k = next(iter(vec))
        return (V.weight(k), tuple(V.charge(k)))

    def add(vec):
        s = slot_of(vec)
        ech = spans.setdefault(s, Echelon())
        return ech.add(vec) is not None

    add(frontier[0])
    while frontier:
        nxt = []
        for x in frontier:
            wx = V.vector_weight(x)
            for u in gens:
                wu = V.vector_weight(u)
                c = add_charge(V.vector_charge(u), V.vector_charge(x))
                mw = V.min_weight(c)
                if mw is None:
                    continue
                for m in range(int(mw - wu - wx), int(top - wu - wx) + 1):
                    y = C.z_coeff(u, m, x)
                    if y and add(y):
                        nxt.append(y)
        frontier = nxt
    report = CheckReport("generator-property", True, {"weight_max": str(top)})
    dims = []
    for s in C.slots(top):
        want = len(C.vacuum_basis(*s))
        got = len(spans.get(s, ()))
        dims.append({"weight": str(s[0]), "charge": [str(x) for x in s[1]], "omega_dim": want, "generated_dim": got})
        report.checked += 1
        if want != got:
            report.passed = False
            report.witness = dims[-1]
    report.result = {"slots": dims}
    return report


def check_charges_in_dual(C: CosetModule, alphas: Iterable, top=None) -> CheckReport:
    """<alpha, s> is an integer for every realized charge s of Omega_W and every alpha."""
    report = CheckReport("charges-in-dual", True, None)
    for s in C.realized_charges(top):
        for a in alphas:
            report.checked += 1
            if C.W.pairing(a, s).denominator != 1:
                report.passed = False
                report.witness = {"alpha": [str(x) for x in a], "charge": [str(x) for x in s]}
                return report
    return report
