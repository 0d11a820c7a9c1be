"""Quotients Omega_V^A = Omega_V / I_V^A and Omega_W^A, and the section lift U_A.

I^A is spanned by w - sigma_a(w) for a in A.  Representatives of P(W)/A are
fixed by the map t: with lambda = sum x_i a_i over the basis of A, t(lambda)
= sum floor(x_i) a_i and the representative is lambda - t(lambda).  The
elimination order makes every non-representative key a pivot, so normal forms
live on representative charges.

Everything here talks to its source through a small protocol shared by
CosetModule and SectionLift: ``V``, ``ell``, ``pair``, ``W`` (weight, charge,
vector_charge, vector_weight, key_order), ``omega_weight``, ``slots``,
``vacuum_basis``, ``y_coeff`` and ``L_act``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..exactnum import Exponent, ScalarError, format_exponent, is_integral
from ..linalg import Echelon, axpy, coordinates
from ..voacore import CheckReport, TruncationError, VertexView, _vec_json, add_charge, check_jacobi, window_exponents
from .core import CosetAlgebra, CosetModule
from .sigma import SigmaFamily, SigmaOperator

__all__ = [
    "ShiftLattice",
    "OmegaQuotient",
    "QuotientView",
    "SectionLift",
    "quotient_algebra",
    "quotient_module",
    "check_ideal_closure",
    "check_quotient_jacobi",
    "check_quotient_grading",
    "check_section_round_trip",
    "check_section_iso",
]


def _solve(basis: Sequence[tuple], vec) -> tuple:
    """Rational x with sum x_i basis_i = vec; raises if vec is outside the span."""
    r = len(basis)
    d = len(vec)
    A = [[basis[i][j] for i in range(r)] + [Fraction(vec[j])] for j in range(d)]
    piv = []
    row = 0
    for col in range(r):
        p = next((k for k in range(row, d) if A[k][col]), None)
        if p is None:
            continue
        A[row], A[p] = A[p], A[row]
        inv = 1 / A[row][col]
        A[row] = [x * inv for x in A[row]]
        for k in range(d):
            if k != row and A[k][col]:
                f = A[k][col]
                A[k] = [x - f * y for x, y in zip(A[k], A[row])]
        piv.append(col)
        row += 1
    if any(A[k][r] for k in range(row, d)):
        raise ValueError("vector is outside the span of the shift lattice")
    x = [Fraction(0)] * r
    for k, col in enumerate(piv):
        x[col] = A[k][r]
    return tuple(x)


class ShiftLattice:
    """A sublattice A of L_0 with its sigma family and the representative map t."""

    def __init__(self, C: CosetAlgebra, basis: Sequence):
        self.C = C
        self.basis = [tuple(Fraction(x) for x in b) for b in basis]
        self.rank = len(self.basis)
        self.hdim = C.hdim
        if self.rank and self.rank != self.hdim:
            raise ValueError("the shift lattice must be zero or of full rank")
        V = C.V
        for a in self.basis:
            for w in V.weights_upto(V.truncation):
                for g in V.charges_at(w):
                    e = C.pair(a, g)
                    if not is_integral(e) or int(e.a if isinstance(e, Exponent) else e) % 2:
                        raise ValueError("A is not contained in L_0: (1/l)<a, g> must be even")
        self.family = SigmaFamily(C, self.basis) if self.rank else None

    def coords(self, lam) -> tuple:
        if not self.rank:
            return ()
        return _solve(self.basis, lam)

    def h_coords(self, n) -> tuple:
        if not self.rank:
            return tuple(Fraction(0) for _ in range(self.hdim))
        return tuple(sum(Fraction(n[i]) * self.basis[i][j] for i in range(self.rank)) for j in range(self.hdim))

    def t(self, lam) -> tuple:
        """t(lambda) in A as integer coordinates."""
        return tuple(math.floor(x) for x in self.coords(lam))

    def rep(self, lam) -> tuple:
        lam = tuple(Fraction(x) for x in lam)
        tt = self.h_coords(self.t(lam))
        return tuple(x - y for x, y in zip(lam, tt))

    def is_rep(self, lam) -> bool:
        return not any(self.t(lam))

    def box(self, radius: int) -> list:
        out = [()]
        for _ in range(self.rank):
            out = [p + (x,) for p in out for x in range(-radius, radius + 1)]
        return out

    def sigma(self, n) -> SigmaOperator:
        return self.family.op(self.h_coords(n))

    def to_json(self):
        return {"basis": [[str(x) for x in b] for b in self.basis]}


class OmegaQuotient:
    """Omega_S^A for a source S (a CosetModule or a SectionLift) up to ambient weight ``top``."""

    def __init__(self, S, A: ShiftLattice, top=None, radius: int = 1):
        self.S = S
        self.A = A
        self.V = S.V
        self.ell = S.ell
        W = S.W
        self.top = top
        self.slot_list = S.slots(top)
        self.covered = {c for _, c in self.slot_list}
        self.generators: list = []
        self._ideal: dict = {}
        self._reps: dict = {}
        for slot in self.slot_list:
            weight, charge = slot
            for x in S.vacuum_basis(*slot):
                tn = A.t(charge)
                shifts = set(A.box(radius)) | {tuple(-t for t in tn)}
                for n in sorted(shifts):
                    if not any(n):
                        continue
                    try:
                        sx = self.sigma(n, x)
                    except TruncationError:
                        continue
                    g = dict(x)
                    axpy(g, sx, -1)
                    if g:
                        self.generators.append((n, dict(x), g))
                        self._ech(self.group(x)).add(g)
        for slot in self.slot_list:
            weight, charge = slot
            if A.is_rep(charge):
                for x in S.vacuum_basis(*slot):
                    r = self._ech(self.group(x)).reduce(x)
                    if r:
                        self._repech(self.group(x)).add(r)

    # -- grading ---------------------------------------------------------------
    def oweight(self, x):
        W = self.S.W
        return self.S.omega_weight(W.vector_weight(x), W.vector_charge(x))

    def group(self, x):
        return (self.oweight(x), self.A.rep(self.S.W.vector_charge(x)))

    def _order(self, key):
        W = self.S.W
        ch = W.charge(key)
        return (0 if self.A.is_rep(ch) else 1, self.S.V.pairing(ch, ch), tuple(ch), W.key_order(key))

    def _ech(self, grp) -> Echelon:
        e = self._ideal.get(grp)
        if e is None:
            e = self._ideal[grp] = Echelon(self._order)
        return e

    def _repech(self, grp) -> Echelon:
        e = self._reps.get(grp)
        if e is None:
            e = self._reps[grp] = Echelon(self._order)
        return e

    def sigma(self, n, x) -> dict:
        if not any(n):
            return dict(x)
        return self.A.sigma(n).apply(self.S, x)

    # -- normal forms ----------------------------------------------------------
    def project(self, vec: Mapping) -> dict:
        """Normal form of vec modulo I^A, supported on representative charges.

        vec may mix charges of one class and one L_Omega-weight.
        """
        if not vec:
            return {}
        W = self.S.W
        grps = set()
        for k in vec:
            ch = tuple(W.charge(k))
            if ch not in self.covered:
                raise TruncationError("truncation overflow: charge outside the quotient window")
            grps.add((self.S.omega_weight(W.weight(k), ch), self.A.rep(ch)))
        if len(grps) != 1:
            raise ValueError("vector is not homogeneous in the quotient grading")
        r = self._ech(grps.pop()).reduce(vec)
        if any(not self.A.is_rep(W.charge(k)) for k in r):
            raise TruncationError("truncation overflow: no representative reached")
        return r

    def in_ideal(self, vec: Mapping) -> bool:
        return not self.project(vec)

    def groups(self) -> list:
        return sorted(self._reps, key=lambda g: (str(g[0]), g[1]))

    def basis(self, grp=None) -> list:
        if grp is None:
            return [v for g in self.groups() for v in self._reps[g].basis()]
        e = self._reps.get(grp)
        return e.basis() if e is not None else []

    def coords(self, vec: Mapping) -> dict:
        r = self.project(vec)
        if not r:
            return {}
        return coordinates(self._repech(self.group(r)), r)

    def split(self, vec: Mapping) -> list:
        """Charge-homogeneous parts of vec."""
        parts: dict = {}
        for k, c in vec.items():
            parts.setdefault(tuple(self.S.W.charge(k)), {})[k] = c
        return list(parts.values())

    def graded_dims(self) -> dict:
        return {g: len(self._reps[g]) for g in self.groups()}

    def y_coeff(self, u: Mapping, p, x: Mapping) -> dict:
        return self.project(self.S.y_coeff(u, p, x))

    def min_oweight(self, charge):
        rep = self.A.rep(charge)
        ws = [g[0] for g in self._reps if g[1] == rep]
        return min(ws) if ws else None

    def to_json(self):
        dims = [{"omega_weight": str(g[0]), "class": [str(c) for c in g[1]], "dim": d}
                for g, d in self.graded_dims().items()]
        return {"kind": "quotient", "shift_lattice": self.A.to_json(), "graded_dims": dims}


class QuotientView(VertexView):
    """Y_Omega^A on the quotient module, with the quotient algebra acting."""

    name = "quotient"

    def __init__(self, QV: OmegaQuotient, QW: OmegaQuotient | None = None):
        self.QV = QV
        self.QW = QW if QW is not None else QV
        self.truncation = self.QW.S.W.truncation

    def _q(self, on_alg):
        return self.QV if on_alg else self.QW

    def coeff(self, u, p, x, on_alg=False):
        return self._q(on_alg).y_coeff(u, p, x)

    def charge(self, x, on_alg=False):
        return tuple(self._q(on_alg).S.W.vector_charge(x))

    def weight(self, x, on_alg=False):
        return self._q(on_alg).oweight(x)

    def min_weight(self, charge, on_alg=False):
        return self._q(on_alg).min_oweight(charge)

    def pair(self, g, h):
        return self.QW.S.pair(g, h)

    def lm1(self, x, on_alg=False):
        q = self._q(on_alg)
        return q.project(q.S.L_act(-1, x))


def quotient_algebra(C: CosetAlgebra, A_basis: Sequence, top=None, radius: int = 1) -> OmegaQuotient:
    return OmegaQuotient(C, ShiftLattice(C, A_basis), top, radius)


def quotient_module(M: CosetModule, A: "ShiftLattice | Sequence", top=None, radius: int = 1) -> OmegaQuotient:
    if not isinstance(A, ShiftLattice):
        A = ShiftLattice(M.coset, A)
    return OmegaQuotient(M, A, top, radius)


# ---------------------------------------------------------------------------
# section lift

class _LiftSpace:
    """Grading data of C[A] (x) U; keys are (n, j) with n in A-coordinates and j a basis index of U."""

    def __init__(self, lift: "SectionLift"):
        self.lift = lift

    def charge(self, key):
        n, j = key
        a = self.lift.A.h_coords(n)
        return add_charge(a, self.lift.rep_charge[j])

    def weight(self, key):
        # the ambient weight an element of this charge would carry
        n, j = key
        ch = self.charge(key)
        L = self.lift
        return L.oweight[j] + L.V.pairing(ch, ch) / (2 * L._l)

    def key_order(self, key):
        return key

    def vector_charge(self, vec):
        cs = {self.charge(k) for k in vec}
        if len(cs) != 1:
            raise ValueError("vector is not charge-homogeneous")
        return cs.pop()

    def vector_weight(self, vec):
        ws = {self.weight(k) for k in vec}
        if len(ws) != 1:
            raise ValueError("vector is not weight-homogeneous")
        return ws.pop()


class SectionLift:
    """U_A = C[A] (x) U for U = Q (a quotient Omega_W^A), with

        Y_Omega(v, z)(e^a (x) w) = e^{a + t(g + s)} (x) Y^A_Omega(v, z)w,
        h(0)(e^a (x) w) = <h, a + s>(e^a (x) w),

    for v of charge g and w of representative charge s.  ``radius`` bounds
    the A-coordinates kept.
    """

    def __init__(self, Q: OmegaQuotient, radius: int = 2):
        self.Q = Q
        self.A = Q.A
        self.V = Q.V
        self.ell = Q.ell
        self._l = self.ell.constant_value() if hasattr(self.ell, "constant_value") else Fraction(self.ell)
        self.coset = Q.S.coset
        self.radius = radius
        self.ubasis = Q.basis()
        self.rep_charge = [tuple(Q.S.W.vector_charge(b)) for b in self.ubasis]
        self.oweight = [Q.oweight(b) for b in self.ubasis]
        self.W = _LiftSpace(self)
        self.hdim = Q.S.hdim

    def pair(self, a, b):
        return self.Q.S.pair(a, b)

    def omega_weight(self, weight, charge):
        return weight - self.V.pairing(charge, charge) / (2 * self._l)

    def _keys(self):
        for n in self.A.box(self.radius):
            for j in range(len(self.ubasis)):
                yield (n, j)

    def slots(self, top=None) -> list:
        out = set()
        for k in self._keys():
            out.add((self.W.weight(k), self.W.charge(k)))
        return sorted(out, key=lambda s: (s[0], s[1]))

    def vacuum_basis(self, weight, charge) -> list:
        return [{k: Fraction(1)} for k in self._keys() if self.W.charge(k) == tuple(charge) and self.W.weight(k) == weight]

    def y_coeff(self, u: Mapping, p, x: Mapping) -> dict:
        if not u or not x:
            return {}
        g = self.V.vector_charge(u)
        out: dict = {}
        for (n, j), c in x.items():
            s = self.rep_charge[j]
            tt = self.A.t(add_charge(g, s))
            m = tuple(a + b for a, b in zip(n, tt))
            if any(abs(a) > self.radius for a in m):
                raise TruncationError("truncation overflow: outside the lift window")
            y = self.Q.coords(self.Q.S.y_coeff(u, p, self.ubasis[j]))
            for piv, cy in y.items():
                jj = self._index(piv)
                axpy(out, {(m, jj): cy}, c)
        return out

    def _index(self, piv):
        for j, b in enumerate(self.ubasis):
            if piv in b and max(b, key=self.Q._order) == piv:
                return j
        raise KeyError(piv)

    def L_act(self, n: int, x: Mapping) -> dict:
        return self.y_coeff(self.coset.omega, -n - 2, x)

    def hmode0(self, i, x):
        out = {}
        h = tuple(Fraction(int(t == i)) for t in range(self.hdim))
        for k, c in x.items():
            e = self.V.pairing(h, self.W.charge(k))
            if e:
                out[k] = c * e
        return out


def check_ideal_closure(QV: OmegaQuotient, QW: OmegaQuotient | None = None, us: Iterable[Mapping] = (),
                        window: int = 2, limit: int | None = None) -> CheckReport:
    """Y_Omega(u, p)x and Y_Omega(x, p)u lie in I_V^A, and Y_Omega(x, p)w in I_W^A, for ideal generators x."""
    QW = QV if QW is None else QW
    report = CheckReport("ideal-closure", True, {"exponent_abs_max": window})
    us = list(us)
    gens = QV.generators if limit is None else QV.generators[:limit]
    SV = QV.S
    wvecs = [] if QW is QV else [b for b in QW.basis()]

    def test(q: OmegaQuotient, y, wit):
        try:
            if not q.in_ideal(y):
                report.passed = False
                report.witness = wit
                return False
        except TruncationError:
            report.skipped += 1
            return True
        report.checked += 1
        return True

    for _, x, g in gens:
        gx = SV.W.vector_charge(x)
        for u in us:
            a = SV.W.vector_charge(u)
            for p in window_exponents(-SV.pair(a, gx), window):
                try:
                    y1: dict = {}
                    for part in QV.split(g):
                        axpy(y1, SV.y_coeff(u, p, part))
                except TruncationError:
                    report.skipped += 1
                    continue
                if not test(QV, y1, {"side": "left", "u": _vec_json(u), "x": _vec_json(g), "exponent": format_exponent(p)}):
                    return report
            for p in window_exponents(-SV.pair(gx, a), window):
                try:
                    y2: dict = {}
                    for part in QV.split(g):
                        axpy(y2, SV.y_coeff(part, p, u))
                except TruncationError:
                    report.skipped += 1
                    continue
                if not test(QV, y2, {"side": "right", "u": _vec_json(u), "x": _vec_json(g), "exponent": format_exponent(p)}):
                    return report
        for w in wvecs:
            lam = QW.S.W.vector_charge(w)
            for p in window_exponents(-QW.S.pair(gx, lam), window):
                try:
                    y3: dict = {}
                    for part in QV.split(g):
                        axpy(y3, QW.S.y_coeff(part, p, w))
                except TruncationError:
                    report.skipped += 1
                    continue
                if not test(QW, y3, {"side": "module", "x": _vec_json(g), "w": _vec_json(w), "exponent": format_exponent(p)}):
                    return report
    return report


def check_quotient_jacobi(QV: OmegaQuotient, QW: OmegaQuotient | None = None, window: int = 3,
                          max_oweight=None) -> list:
    """Generalized Jacobi identity of Y_Omega^A on all triples of quotient basis vectors."""
    view = QuotientView(QV, QW)
    alg = QV.basis()
    mod = (QW or QV).basis()
    if max_oweight is not None:
        alg = [b for b in alg if QV.oweight(b) <= max_oweight]
        mod = [b for b in mod if (QW or QV).oweight(b) <= max_oweight]
    out = []
    for u in alg:
        for v in alg:
            for w in mod:
                out.append(check_jacobi(view, u, v, w, window, name="quotient-jacobi"))
    return out


def check_quotient_grading(Q: OmegaQuotient, expected_classes: Iterable | None = None) -> CheckReport:
    """Normal forms live on representative charges, one group per realized class, finite dimensions."""
    report = CheckReport("quotient-grading", True, None)
    classes = sorted({g[1] for g in Q.groups()})
    for g in Q.groups():
        for b in Q.basis(g):
            report.checked += 1
            ch = Q.S.W.vector_charge(b)
            if not Q.A.is_rep(ch) or Q.A.rep(ch) != g[1]:
                report.passed = False
                report.witness = {"group": [str(g[0]), [str(c) for c in g[1]]]}
    # t(a + lambda) = a + t(lambda)
    for lam in classes:
        for n in Q.A.box(2):
            a = Q.A.h_coords(n)
            report.checked += 1
            if Q.A.t(add_charge(a, lam)) != tuple(x + y for x, y in zip(n, Q.A.t(lam))):
                report.passed = False
                report.witness = {"reason": "t is not A-equivariant"}
    if expected_classes is not None:
        exp = sorted(tuple(Fraction(x) for x in c) for c in expected_classes)
        report.checked += 1
        if exp != classes:
            report.passed = False
            report.witness = {"classes": [[str(x) for x in c] for c in classes]}
    report.result = {"graded_dims": Q.to_json()["graded_dims"]}
    return report


def check_section_round_trip(Q: OmegaQuotient, us: Iterable[Mapping], window: int = 2, radius: int = 2) -> CheckReport:
    """(U_A)^A = U: same graded dimensions and Y_Omega tables under e^0 (x) w <-> w."""
    lift = SectionLift(Q, radius)
    Q2 = OmegaQuotient(lift, Q.A, None, 1)
    report = CheckReport("section-round-trip", True, {"exponent_abs_max": window, "lift_radius": radius})
    zero = tuple(0 for _ in range(Q.A.rank))
    report.checked += 1
    if {g: d for g, d in Q2.graded_dims().items()} != Q.graded_dims():
        report.passed = False
        report.witness = {"reason": "graded dimensions differ"}
        return report
    us = list(us)
    for j, w in enumerate(lift.ubasis):
        x = {(zero, j): Fraction(1)}
        report.checked += 1
        if Q2.project(x) != x:
            report.passed = False
            report.witness = {"reason": "lift of a basis vector is not a normal form", "index": j}
            return report
        lam = lift.rep_charge[j]
        for u in us:
            a = Q.V.vector_charge(u)
            for p in window_exponents(-Q.S.pair(a, lam), window):
                try:
                    y1 = Q.coords(Q.y_coeff(u, p, w))
                    y2 = Q2.project(lift.y_coeff(u, p, x))
                except TruncationError:
                    report.skipped += 1
                    continue
                report.checked += 1
                mapped = {}
                for piv, c in y1.items():
                    mapped[(zero, lift._index(piv))] = c
                if axpy(dict(mapped), y2, -1):
                    report.passed = False
                    report.witness = {"u": _vec_json(u), "index": j, "exponent": format_exponent(p)}
                    return report
    return report


def check_section_iso(Q: OmegaQuotient, us: Iterable[Mapping], window: int = 2, radius: int = 1) -> CheckReport:
    """eta(e^a (x) w) = sigma_a(w) intertwines Y_Omega on U_A with Y_Omega on Omega_W."""
    lift = SectionLift(Q, radius + 1)
    report = CheckReport("section-iso", True, {"exponent_abs_max": window, "lift_radius": radius})
    S = Q.S

    def eta(vec):
        out: dict = {}
        for (n, j), c in vec.items():
            axpy(out, Q.sigma(n, lift.ubasis[j]), c)
        return out

    us = list(us)
    for n in Q.A.box(radius):
        for j, w in enumerate(lift.ubasis):
            x = {(n, j): Fraction(1)}
            try:
                ex = eta(x)
            except TruncationError:
                report.skipped += 1
                continue
            lam = lift.W.charge((n, j))
            for u in us:
                a = Q.V.vector_charge(u)
                for p in window_exponents(-S.pair(a, lam), window):
                    try:
                        lhs = eta(lift.y_coeff(u, p, x))
                        rhs = S.y_coeff(u, p, ex)
                    except TruncationError:
                        report.skipped += 1
                        continue
                    report.checked += 1
                    if axpy(dict(lhs), rhs, -1):
                        report.passed = False
                        report.witness = {"shift": list(n), "index": j, "u": _vec_json(u), "exponent": format_exponent(p)}
                        return report
    return report
