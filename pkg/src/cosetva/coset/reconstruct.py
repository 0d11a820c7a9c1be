"""Reconstruction of a V-module E(U) = M(l) (x) U from an Omega_V-h-module U.

U is given as data: a basis with charges and L_Omega-weights, and the
coefficients of Y_Omega(u, z) on that basis for every vacuum-type generator
and primitive u of V.  On a (x) x the ambient algebra acts by

    h(n)          Heisenberg modes on a, and <h, lambda> at n = 0,
    Y(u, z)       E^-(-alpha/l, z) E^+(-alpha/l, z) a (x) Z_U(u, z) x,

where Z_U(u, z) = Y_Omega(u, z) z^{<alpha, lambda>/l}.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .._fock import colored_partitions, fock_degree
from ..exactnum import Exponent, RatFunc, format_exponent, format_scalar, int_offset, over_ell, parse_scalar
from ..heis import FockKernel, fock_key_json
from ..linalg import Echelon, axpy
from ..voacore import CheckReport, TruncationError, VertexAlgebra, VertexSpace, _key_json, _vec_json, add_charge
from .core import CosetModule

__all__ = [
    "OmegaHData",
    "EModule",
    "export_omega",
    "reconstruct_E",
    "check_reconstruction",
]


def _concrete(ell):
    if isinstance(ell, RatFunc):
        if not ell.is_constant():
            raise ValueError("reconstruction needs a concrete level")
        return ell.constant_value()
    return Fraction(ell)


def _gvec_in_h(V: VertexAlgebra, g) -> bool:
    """True if the generator lies in the span of the Heisenberg vectors."""
    ech = Echelon()
    for h in V.heisenberg:
        ech.add(h)
    return ech.contains(V.gen_vector(g))


def u_label(V: VertexAlgebra, kind: str, ident) -> str:
    if kind == "gen":
        return f"gen:{ident}"
    return "prim:" + json.dumps(_key_json(ident))


class OmegaHData:
    """An Omega_V-h-module given by tables.

    ``oweight[j]`` and ``charges[j]`` grade basis vector j; ``tables`` maps
    (u label, j) to a list of (q, {j': c}) meaning Z_U(u, q) x_j.  Entries
    are complete for outputs of ambient weight <= ``top``.
    """

    def __init__(self, charges, oweight, tables, ell, gram, top, vectors=None):
        self.charges = [tuple(Fraction(x) for x in c) for c in charges]
        self.oweight = [Fraction(w) for w in oweight]
        self.tables = tables
        self.ell = ell
        self.gram = gram
        self.top = Fraction(top)
        self.vectors = vectors
        self._l = _concrete(ell)

    def __len__(self):
        return len(self.charges)

    def pairing(self, a, b):
        return sum((a[i] * self.gram[i][j] * b[j] for i in range(len(a)) for j in range(len(b))), Fraction(0))

    def base_weight(self, j):
        c = self.charges[j]
        return self.oweight[j] + self.pairing(c, c) / (2 * self._l)

    def check_charge_rule(self, labels_charge: Mapping[str, tuple]) -> None:
        """Every table entry must land in charge alpha + lambda; raises ValueError otherwise."""
        for (lab, j), entries in self.tables.items():
            alpha = labels_charge[lab]
            want = add_charge(alpha, self.charges[j])
            for q, res in entries:
                for jj in res:
                    if self.charges[jj] != want:
                        raise ValueError(f"inconsistent input tables: charge rule violated by {lab} on basis vector {j}")

    def to_json(self):
        ys = []
        for (lab, j), entries in sorted(self.tables.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            for q, res in entries:
                alpha = self._label_charges[lab]
                p = Fraction(q) - self.pairing(alpha, self.charges[j]) / self._l
                ys.append({"u": lab, "n": format_exponent(p), "w": j,
                           "result": [[jj, format_scalar(c)] for jj, c in sorted(res.items())]})
        out = {
            "charges": [[str(x) for x in c] for c in self.charges],
            "basis": [{"index": j, "omega_weight": str(self.oweight[j]),
                       "vector": _vec_json(self.vectors[j]) if self.vectors else None} for j in range(len(self))],
            "y_tables": ys,
            "h_action": [[str(self.pairing(tuple(Fraction(int(t == i)) for t in range(len(self.gram))), c))
                          for i in range(len(self.gram))] for c in self.charges],
            "level": str(self._l),
            "gram": [[str(x) for x in row] for row in self.gram],
            "top": str(self.top),
            "u_charges": {lab: [str(x) for x in a] for lab, a in self._label_charges.items()},
        }
        return out

    @classmethod
    def from_json(cls, d: Mapping) -> "OmegaHData":
        charges = [tuple(Fraction(x) for x in c) for c in d["charges"]]
        oweight = [Fraction(b["omega_weight"]) for b in d["basis"]]
        gram = tuple(tuple(Fraction(x) for x in row) for row in d["gram"])
        ell = Fraction(d["level"])
        ucharges = {lab: tuple(Fraction(x) for x in a) for lab, a in d["u_charges"].items()}
        tables: dict = {}
        for e in d["y_tables"]:
            lab, j = e["u"], int(e["w"])
            p = Fraction(e["n"])
            q = p + sum((ucharges[lab][i] * gram[i][k] * charges[j][k] for i in range(len(gram))
                         for k in range(len(gram))), Fraction(0)) / ell
            if q.denominator != 1:
                raise ValueError("inconsistent input tables: exponent outside its coset")
            res = {int(jj): parse_scalar(c) for jj, c in e["result"]}
            tables.setdefault((lab, j), []).append((int(q), res))
        h = d.get("h_action")
        out = cls(charges, oweight, tables, ell, gram, Fraction(d["top"]))
        out._label_charges = ucharges
        if h is not None:
            for j, row in enumerate(h):
                for i, x in enumerate(row):
                    e = tuple(Fraction(int(t == i)) for t in range(len(gram)))
                    if Fraction(x) != out.pairing(e, charges[j]):
                        raise ValueError("inconsistent input tables: h(0) disagrees with the charges")
        out.check_charge_rule(ucharges)
        return out


def _omega_generators(V: VertexAlgebra, top) -> list:
    """(label, vector, charge) for vacuum-type generators and primitives of V up to weight ``top``."""
    out = []
    for g in V.generators:
        if not _gvec_in_h(V, g):
            v = V.gen_vector(g)
            out.append((u_label(V, "gen", g), dict(v), tuple(V.gen_charge(g))))
    for w in V.weights_upto(top):
        for c in V.charges_at(w):
            for k in V.basis(w, c):
                if V.decompose(k)[0] == "prim" and k != V.vacuum_key:
                    out.append((u_label(V, "prim", k), {k: Fraction(1)}, tuple(c)))
    return out


def export_omega(M: CosetModule, top=None) -> OmegaHData:
    """Tables of Omega_W: basis, charges, L_Omega-weights and Z coefficients of every vacuum-type generator."""
    W, V = M.W, M.V
    top = W.truncation + getattr(W, "top_weight", 0) if top is None else top
    vectors, charges, oweight, index = [], [], [], {}
    for slot in M.slots(top):
        for b in M.vacuum_basis(*slot):
            index[max(b)] = len(vectors)
            vectors.append(b)
            charges.append(slot[1])
            oweight.append(M.omega_weight(*slot))
    gens = _omega_generators(V, V.truncation)
    tables: dict = {}
    for lab, u, alpha in gens:
        wu = V.vector_weight(u)
        for j, x in enumerate(vectors):
            lam = charges[j]
            c = add_charge(alpha, lam)
            mw = W.min_weight(c)
            if mw is None:
                continue
            wx = W.vector_weight(x)
            entries = []
            q = int(mw - wu - wx) if (mw - wu - wx).denominator == 1 else None
            if q is None:
                continue
            while wu + wx + q <= top:
                y = M.z_coeff(u, q, x)
                if y:
                    co = M.coords(y)
                    entries.append((q, {index[p]: cc for p, cc in co.items()}))
                q += 1
            if entries:
                tables[(lab, j)] = entries
    out = OmegaHData(charges, oweight, tables, M.ell, W.gram, top, vectors)
    out._label_charges = {lab: alpha for lab, _, alpha in gens}
    return out


class EModule(VertexSpace):
    """E(U) at truncation N; keys are (Fock key, basis index of U)."""

    kind = "reconstructed"

    def __init__(self, V: VertexAlgebra, U: OmegaHData, truncation: int):
        super().__init__()
        self._algebra = V
        self.U = U
        self.ell = V.ell
        self._l = _concrete(V.ell)
        self.gram = V.gram
        self.hdim = V.hdim
        self.truncation = int(truncation)
        if Fraction(self.truncation) > U.top:
            raise ValueError("U tables do not reach the requested truncation")
        self.fock = FockKernel(V.gram, self._l)
        self._base = [U.base_weight(j) for j in range(len(U))]
        self._by_charge: dict = {}
        for j, c in enumerate(U.charges):
            self._by_charge.setdefault(c, []).append(j)
        self._h = {}
        self._gen_kind = {}
        for g in V.generators:
            self._gen_kind[g] = "h" if _gvec_in_h(V, g) else "omega"
        # coordinates of Heisenberg generators in the h-basis
        for g, kind in self._gen_kind.items():
            if kind == "h":
                self._h[g] = self._h_coords(V.gen_vector(g))
        self._zt = U.tables

    @property
    def algebra(self):
        return self._algebra

    def _h_coords(self, vec):
        out = []
        # each Heisenberg vector is beta_i(-1)1, a single key; read the coefficient
        for h in self._algebra.heisenberg:
            (k, c), = h.items()
            out.append(vec.get(k, Fraction(0)) / c)
        return tuple(out)

    # -- grading ---------------------------------------------------------------
    def weight(self, key):
        a, j = key
        return self._base[j] + fock_degree(a)

    def charge(self, key):
        return self.U.charges[key[1]]

    def min_weight(self, charge):
        js = self._by_charge.get(tuple(charge))
        if not js:
            return None
        return min(self._base[j] for j in js)

    def in_range(self, weight, charge):
        return weight <= self.truncation

    def basis(self, weight, charge):
        out = []
        for j in self._by_charge.get(tuple(charge), ()):
            d = weight - self._base[j]
            if d >= 0 and d.denominator == 1 and weight <= self.truncation:
                out.extend((a, j) for a in colored_partitions(int(d), self.hdim))
        return out

    def charges_at(self, weight):
        return sorted({c for c, js in self._by_charge.items() if self.basis(weight, c)})

    def weights_upto(self, top):
        ws = set()
        top = min(Fraction(top), Fraction(self.truncation))
        for b in self._base:
            w = b
            while w <= top:
                ws.add(w)
                w += 1
        return sorted(ws)

    # -- actions ---------------------------------------------------------------
    def hmode(self, i, n, key):
        a, j = key
        if n == 0:
            e = tuple(Fraction(int(t == i)) for t in range(self.hdim))
            c = self.pairing(e, self.U.charges[j])
            return {key: c} if c else {}
        if n < 0 and self.weight(key) - n > self.truncation:
            raise TruncationError("truncation overflow")
        return {(f, j): c for f, c in self.fock.mode(i, n, a).items()}

    def _omega_act(self, label, alpha, wt_u, n, key):
        a, j = key
        lam = self.U.charges[j]
        out_w = wt_u + self.weight(key) - n - 1
        if not self.check_out(out_w, add_charge(alpha, lam)):
            return {}
        entries = self._zt.get((label, j))
        if not entries:
            return {}
        h = tuple(-x / self._l for x in alpha)
        out: dict = {}
        for kp in range(0, fock_degree(a) + 1):
            ep = self.fock.e_plus(h, kp, a) if kp else {a: Fraction(1)}
            if not ep:
                continue
            for q, res in entries:
                km = -n - 1 - q + kp
                if km < 0:
                    continue
                for f, c in ep.items():
                    em = self.fock.e_minus(h, km, f)
                    for f2, c2 in em.items():
                        for jj, c3 in res.items():
                            k2 = (f2, jj)
                            v = out.get(k2, 0) + c * c2 * c3
                            if v:
                                out[k2] = v
                            else:
                                out.pop(k2, None)
        return out

    def gmode(self, g, n, key):
        if self._gen_kind[g] == "h":
            out: dict = {}
            for i, c in enumerate(self._h[g]):
                if c:
                    axpy(out, self.hmode(i, n, key), c)
            return out
        V = self._algebra
        return self._omega_act(u_label(V, "gen", g), tuple(V.gen_charge(g)), V.vector_weight(V.gen_vector(g)), n, key)

    def prim_ymode(self, pkey, n, key):
        V = self._algebra
        if pkey == V.vacuum_key:
            return {key: Fraction(1)} if n == -1 else {}
        return self._omega_act(u_label(V, "prim", pkey), tuple(V.charge(pkey)), V.weight(pkey), n, key)

    def descriptor(self):
        return {"type": "reconstructed", "truncation": self.truncation, "omega_dim": len(self.U)}


def reconstruct_E(V: VertexAlgebra, U: "OmegaHData | Mapping", truncation: int) -> EModule:
    if not isinstance(U, OmegaHData):
        U = OmegaHData.from_json(U)
    return EModule(V, U, truncation)


def _eta(E: EModule, W: VertexSpace, vectors: Sequence[Mapping], key) -> dict:
    """a (x) x_j -> a . x_j, applying the Heisenberg creation modes of a to x_j in W."""
    a, j = key
    vec = dict(vectors[j])
    for n, i in reversed(a):
        out: dict = {}
        for k, c in vec.items():
            axpy(out, W.hmode(i, -n, k), c)
        vec = out
    return vec


def check_reconstruction(M: CosetModule, truncation: int, us: Iterable[Mapping], modes=(-2, 3)) -> list:
    """E(Omega_W) against W: eta intertwines Y, eta is bijective per graded piece, Omega_{E(U)} = U."""
    W, V = M.W, M.V
    U = export_omega(M)
    U2 = OmegaHData.from_json(json.loads(json.dumps(U.to_json())))
    E = EModule(V, U2, truncation)
    us = list(us)
    bij = CheckReport("reconstruction-bijective", True, {"weight_max": truncation})
    hom = CheckReport("reconstruction-intertwining", True, {"modes": list(modes)})
    omg = CheckReport("reconstruction-vacuum", True, {"weight_max": truncation})
    top = truncation + getattr(W, "top_weight", 0)
    for w in E.weights_upto(top):
        for c in E.charges_at(w):
            keys = E.basis(w, c)
            ech = Echelon()
            for k in keys:
                ech.add(_eta(E, W, U.vectors, k))
            bij.checked += 1
            if len(ech) != len(keys) or len(keys) != len(W.basis(w, c)):
                bij.passed = False
                bij.witness = {"weight": str(w), "charge": [str(x) for x in c], "E_dim": len(keys),
                               "rank": len(ech), "W_dim": len(W.basis(w, c))}
            for k in keys:
                ek = _eta(E, W, U.vectors, k)
                for u in us:
                    for n in range(modes[0], modes[1] + 1):
                        try:
                            lhs: dict = {}
                            for k2, cc in E.ymode_vec(u, n, {k: Fraction(1)}).items():
                                axpy(lhs, _eta(E, W, U.vectors, k2), cc)
                            rhs = W.ymode_vec(u, n, ek)
                        except TruncationError:
                            hom.skipped += 1
                            continue
                        hom.checked += 1
                        if axpy(lhs, rhs, -1):
                            if hom.passed:
                                hom.passed = False
                                hom.witness = {"u": _vec_json(u), "mode": n, "key": [fock_key_json(k[0]), k[1]]}
    # Omega of E(U) is U, tables included
    U3 = export_omega(M.coset.module(E), truncation)
    back = {}
    for j3, vec in enumerate(U3.vectors):
        omg.checked += 1
        (k, c), = vec.items() if len(vec) == 1 else ((None, None),)
        if k is None or k[0] or c != 1:
            omg.passed = False
            omg.witness = {"reason": "vacuum vector of E(U) is not 1 (x) u", "index": j3}
            return [bij, hom, omg]
        back[j3] = k[1]
    want = sum(1 for j in range(len(U)) if U.base_weight(j) <= truncation)
    omg.checked += 1
    if want != len(back):
        omg.passed = False
        omg.witness = {"reason": "dimension mismatch", "U": want, "vacuum": len(back)}
    for (lab, j3), entries in U3.tables.items():
        ref = {q: r for q, r in U.tables.get((lab, back[j3]), [])}
        for q, res in entries:
            omg.checked += 1
            if {back[jj]: c for jj, c in res.items()} != ref.get(q, {}):
                omg.passed = False
                omg.witness = {"u": lab, "index": back[j3], "q": q}
    return [bij, hom, omg]
