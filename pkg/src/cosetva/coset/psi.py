"""The lattice subalgebra V_{lK} inside V and its commutant characterization.

V_{lK} is the lattice algebra on the basis of lK with form (1/l)<.,.>, and

    Psi(e^a (x) b_1(-n_1) ... b_r(-n_r)) = l^{-r} b_1(-n_1) ... b_r(-n_r) sigma_a(1),

with each b_i read as an element of h acting at level l.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..latvoa import Lattice, LatticeVOA
from ..linalg import Echelon, axpy, nullspace
from ..voacore import CheckReport, TruncationError, _vec_json
from .core import CosetAlgebra
from .sigma import SigmaFamily

__all__ = ["LatticeEmbedding", "psi_embed_check", "commutant_check"]


class LatticeEmbedding:
    """V_{lK} (built on ``basis``, a basis of lK in h-coordinates) and the map Psi into V."""

    def __init__(self, C: CosetAlgebra, basis: Sequence, truncation: int | None = None):
        self.C = C
        self.V = C.V
        self.family = SigmaFamily(C, basis)
        self.basis = self.family.basis
        self.truncation = self.V.truncation if truncation is None else truncation
        self.lattice = self.family.lattice
        self.VK = LatticeVOA(self.lattice, self.truncation)
        ell = C.ell
        self.ell = ell.constant_value() if hasattr(ell, "constant_value") else Fraction(ell)

    def image(self, key) -> dict:
        coords, fock = key
        alpha = self.family.h_coords(tuple(int(c) for c in coords))
        vec = dict(self.family.vector(alpha))
        for n, i in reversed(fock):
            out: dict = {}
            axpy(out, self.V.hmode_vec(self.basis[i], -n, vec), 1 / self.ell)
            vec = out
        return vec

    def apply(self, x: Mapping) -> dict:
        out: dict = {}
        for k, c in x.items():
            axpy(out, self.image(k), c)
        return out

    def generators(self, bound: int = 1) -> list:
        """Heisenberg vectors b_i(-1)1 and e^a for |coords| <= bound."""
        VK = self.VK
        gens = [dict(h) for h in VK.heisenberg]
        r = len(self.basis)
        box = [()]
        for _ in range(r):
            box = [p + (x,) for p in box for x in range(-bound, bound + 1)]
        for n in box:
            if any(n):
                gens.append(dict(VK.e(tuple(Fraction(x) for x in n))))
        return gens


def psi_embed_check(E: LatticeEmbedding, top: int = 3, modes=(-2, 3), bound: int = 1) -> CheckReport:
    """Psi(Y(x, n)y) = Y(Psi x, n)Psi y for generators x and basis vectors y of weight <= top."""
    VK, V = E.VK, E.V
    report = CheckReport("psi-embed", True, {"weight_max": top, "modes": list(modes)})
    gens = E.generators(bound)
    ys = [(w, c, k) for w in VK.weights_upto(top) for c in VK.charges_at(w) for k in VK.basis(w, c)]
    # Psi(h) = h/l on the Heisenberg generators
    for i, h in enumerate(VK.heisenberg):
        report.checked += 1
        want = {k: c / E.ell for k, c in V.hmode_vec(E.basis[i], -1, V.vacuum).items()}
        if E.apply(h) != want:
            report.passed = False
            report.witness = {"reason": "Psi(h) differs from h/l", "direction": i + 1}
            return report
    for x in gens:
        px = E.apply(x)
        for _, _, k in ys:
            py = E.image(k)
            for n in range(modes[0], modes[1] + 1):
                try:
                    lhs = E.apply(VK.ymode_vec(x, n, {k: Fraction(1)}))
                    rhs = V.ymode_vec(px, n, py)
                except TruncationError:
                    report.skipped += 1
                    continue
                report.checked += 1
                if axpy(dict(lhs), rhs, -1):
                    report.passed = False
                    report.witness = {"x": _vec_json(x), "y": _vec_json({k: 1}), "mode": n}
                    return report
    # injectivity per graded piece
    for w in VK.weights_upto(top):
        for c in VK.charges_at(w):
            ech = Echelon()
            keys = VK.basis(w, c)
            for k in keys:
                ech.add(E.image(k))
            report.checked += 1
            if len(ech) != len(keys):
                report.passed = False
                report.witness = {"reason": "Psi is not injective", "weight": str(w)}
                return report
    return report


def commutant_check(C: CosetAlgebra, E: LatticeEmbedding | None = None, top: int = 3, vtop: int | None = None) -> CheckReport:
    """Containment of Psi(V_{lK}) in the commutant of Omega_V^0, and the commutant dimension per degree.

    u commutes with every Y(v, z), v in Omega_V^0, exactly when u_n v = 0 for
    all n >= 0.  The kernel of these conditions on V_(d) is reported next to
    dim (V_{lK})_(d).
    """
    V = C.V
    vtop = V.truncation - top if vtop is None else vtop
    zero = tuple(Fraction(0) for _ in range(C.hdim))
    omega0 = [v for w in V.weights_upto(vtop) for v in C.vacuum_basis(w, zero)]
    report = CheckReport("commutant", True, {"weight_max": top, "omega0_weight_max": str(vtop)})

    def conditions(u: Mapping) -> dict:
        out: dict = {}
        wu = V.vector_weight(u)
        for j, v in enumerate(omega0):
            wv = V.vector_weight(v)
            for n in range(0, int(wu + wv)):
                for k, c in V.ymode_vec(u, n, v).items():
                    out[(j, n, k)] = c
        return out

    if E is not None:
        VK = E.VK
        for w in VK.weights_upto(top):
            for c in VK.charges_at(w):
                for k in VK.basis(w, c):
                    try:
                        cond = conditions(E.image(k))
                    except TruncationError:
                        report.skipped += 1
                        continue
                    report.checked += 1
                    if cond:
                        report.passed = False
                        report.witness = {"reason": "image of Psi fails to commute", "y": _vec_json({k: 1})}
    dims = []
    for d in range(0, top + 1):
        kern = 0
        for c in V.charges_at(d):
            keys = V.basis(d, c)
            kern += len(nullspace(keys, lambda key: conditions({key: Fraction(1)})))
        row = {"degree": d, "commutant_dim": kern}
        if E is not None:
            row["lattice_dim"] = sum(len(E.VK.basis(d, c)) for c in E.VK.charges_at(d))
            report.checked += 1
            if row["lattice_dim"] != kern:
                report.passed = False
                report.witness = row
        dims.append(row)
    report.result = {"degrees": dims, "omega0_dim": len(omega0)}
    return report
