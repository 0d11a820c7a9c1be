"""Heisenberg algebra, its Fock module M(l), the exponentials E^+- and omega_h."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from ._fock import colored_partitions, fock_annihilate, fock_create, fock_degree
from .exactnum import ELL, RatFunc, ScalarError, binom, format_scalar, parse_level, parse_scalar
from .formal import FormalSeries
from .linalg import axpy
from .voacore import (
    CheckReport,
    GradedVector,
    TruncationError,
    VertexAlgebra,
    check_virasoro,
)

__all__ = [
    "FockKernel",
    "HeisenbergSpace",
    "inverse_gram",
    "mode_act",
    "e_minus_apply",
    "e_plus_apply",
    "e_minus_terms",
    "e_plus_terms",
    "omega_h",
    "omega_h_in",
    "L_h_act",
    "check_lh_commutation",
    "check_highest_weight",
    "check_exchange",
    "fock_key_json",
    "fock_key_from_json",
    "heisenberg_virasoro",
]


def _gram(gram) -> tuple:
    g = tuple(tuple(parse_scalar(x) if isinstance(x, str) else Fraction(x) for x in row) for row in gram)
    d = len(g)
    if any(len(row) != d for row in g):
        raise ScalarError("gram matrix must be square")
    for i in range(d):
        for j in range(d):
            if g[i][j] != g[j][i]:
                raise ScalarError("gram matrix must be symmetric")
    return g


def inverse_gram(g) -> tuple:
    """Exact inverse by Gauss-Jordan; raises on a singular matrix."""
    d = len(g)
    m = [list(row) + [Fraction(int(i == j)) for j in range(d)] for i, row in enumerate(g)]
    for col in range(d):
        piv = next((r for r in range(col, d) if m[r][col] != 0), None)
        if piv is None:
            raise ScalarError("singular gram matrix")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / Fraction(m[col][col])
        m[col] = [x * inv for x in m[col]]
        for r in range(d):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return tuple(tuple(row[d:]) for row in m)


def fock_key_json(key):
    return [[i + 1, n] for n, i in key]


def fock_key_from_json(parts):
    key = ()
    for i, n in parts:
        key = fock_create(key, int(n), int(i) - 1)
    return key


class FockKernel:
    """Heisenberg modes and exponentials on bare Fock keys for a fixed form and level."""

    def __init__(self, gram, level):
        self.gram = gram
        self.level = level
        self.d = len(gram)
        self._em: dict = {}
        self._ep: dict = {}

    def mode(self, i, n, key) -> dict:
        """beta_i(n) on a Fock key, n != 0 (the zero mode is the caller's business)."""
        if n < 0:
            return {fock_create(key, -n, i): Fraction(1)}
        out: dict = {}
        row = self.gram[i]
        for j, count, new in fock_annihilate(key, n):
            if row[j]:
                c = count * n * row[j] * self.level
                out[new] = out.get(new, 0) + c
        return {k: v for k, v in out.items() if v}

    def mode_h(self, h, n, vec: Mapping) -> dict:
        out: dict = {}
        for i, hi in enumerate(h):
            if hi:
                for k, c in vec.items():
                    axpy(out, self.mode(i, n, k), c * hi)
        return out

    def e_minus(self, h, k, key) -> dict:
        """Coefficient of z^k in E^-(h, z) applied to a Fock key."""
        if k == 0:
            return {key: Fraction(1)}
        memo = self._em.get((h, k, key))
        if memo is not None:
            return memo
        out: dict = {}
        for m in range(1, k + 1):
            prev = self.e_minus(h, k - m, key)
            if prev:
                axpy(out, self.mode_h(h, -m, prev), Fraction(-1, k))
        self._em[(h, k, key)] = out
        return out

    def e_plus(self, h, k, key) -> dict:
        """Coefficient of z^-k in E^+(h, z) applied to a Fock key."""
        if k == 0:
            return {key: Fraction(1)}
        if k > fock_degree(key):
            return {}
        memo = self._ep.get((h, k, key))
        if memo is not None:
            return memo
        out: dict = {}
        for m in range(1, k + 1):
            prev = self.e_plus(h, k - m, key)
            if prev:
                axpy(out, self.mode_h(h, m, prev), Fraction(1, k))
        self._ep[(h, k, key)] = out
        return out


class HeisenbergSpace(VertexAlgebra):
    """The Fock module M(l) truncated at weight N, as a vertex operator algebra.

    Basis keys are Fock keys; direction indices are 0-based internally and
    1-based in serialized form.
    """

    kind = "heisenberg"

    def __init__(self, gram, level, truncation: int):
        super().__init__()
        self.gram = _gram(gram)
        self.hdim = len(self.gram)
        inverse_gram(self.gram)
        if isinstance(level, str):
            level = parse_level(level)
        if isinstance(level, int):
            level = Fraction(level)
        if not level:
            raise ScalarError("level must be nonzero")
        self.ell = level
        self.truncation = int(truncation)
        self.kernel = FockKernel(self.gram, self.ell)
        self.zero = tuple(Fraction(0) for _ in range(self.hdim))
        self.generators = tuple(range(self.hdim))
        self.vacuum_key = ()
        self.heisenberg = tuple(GradedVector.basis(((1, i),)) for i in range(self.hdim))
        self.rank = Fraction(self.hdim)
        self.omega = omega_h(self)

    @classmethod
    def standard(cls, d: int, level, truncation: int):
        return cls([[int(i == j) for j in range(d)] for i in range(d)], level, truncation)

    def descriptor(self):
        return {"type": "heisenberg", "d": self.hdim, "gram": [[str(x) for x in r] for r in self.gram],
                "level": "formal" if isinstance(self.ell, RatFunc) and self.ell == ELL else format_scalar(self.ell),
                "truncation": self.truncation}

    # grading
    def weight(self, key):
        return fock_degree(key)

    def charge(self, key):
        return self.zero

    def min_weight(self, charge):
        return 0 if tuple(charge) == self.zero else None

    def in_range(self, weight, charge):
        return weight <= self.truncation

    def basis(self, weight, charge):
        if tuple(charge) != self.zero or weight != int(weight) or not 0 <= weight <= self.truncation:
            return []
        return colored_partitions(int(weight), self.hdim)

    def charges_at(self, weight):
        return [self.zero]

    def weights_upto(self, top):
        return list(range(0, min(int(top), self.truncation) + 1))

    # actions
    def hmode(self, i, n, key):
        if n == 0:
            return {}
        if n < 0 and fock_degree(key) - n > self.truncation:
            raise TruncationError("truncation overflow")
        return self.kernel.mode(i, n, key)

    gmode = hmode

    def gen_charge(self, g):
        return self.zero

    def gen_vector(self, g):
        return self.heisenberg[g]

    def decompose(self, key):
        if not key:
            return ("prim", key)
        n, i = key[0]
        return ("gen", i, n, key[1:])

    def prim_ymode(self, pkey, n, key):
        return {key: Fraction(1)} if n == -1 else {}


def mode_act(space, i: int, n: int, v: Mapping) -> GradedVector:
    """beta_i(n) v, with a 0-based direction index."""
    out: dict = {}
    for k, c in v.items():
        axpy(out, space.hmode(i, n, k), c)
    return GradedVector(out)


def _hcoords(space, h):
    h = tuple(Fraction(x) if isinstance(x, (int, str)) and not isinstance(x, bool) else x for x in h)
    if len(h) != space.hdim:
        raise ScalarError("vector in h has the wrong dimension")
    return h


def e_minus_terms(space, h, v: Mapping, order: int) -> list:
    """[E^-_0 v, ..., E^-_order v] where E^-(h, z) = sum_k E^-_k z^k."""
    h = _hcoords(space, h)
    for k in v:
        if not space.in_range(space.weight(k) + order, space.charge(k)):
            raise TruncationError("truncation overflow")
    terms = [dict(v)]
    for k in range(1, order + 1):
        acc: dict = {}
        for m in range(1, k + 1):
            if terms[k - m]:
                axpy(acc, space.hmode_vec(h, -m, terms[k - m]), Fraction(-1, k))
        terms.append(acc)
    return terms


def e_plus_terms(space, h, v: Mapping) -> list:
    """[E^+_0 v, E^+_1 v, ...] (coefficients of z^0, z^-1, ...) until the series ends."""
    h = _hcoords(space, h)
    depth = 0
    for k in v:
        mw = space.min_weight(space.charge(k))
        depth = max(depth, space.weight(k) - mw)
    terms = [dict(v)]
    for k in range(1, int(depth) + 1):
        acc: dict = {}
        for m in range(1, k + 1):
            if terms[k - m]:
                axpy(acc, space.hmode_vec(h, m, terms[k - m]), Fraction(1, k))
        terms.append(acc)
    while len(terms) > 1 and not terms[-1]:
        terms.pop()
    return terms


def e_minus_apply(space, h, v: Mapping, order: int) -> FormalSeries:
    terms = e_minus_terms(space, h, v, order)
    return FormalSeries({(k,): GradedVector(t) for k, t in enumerate(terms)}, 1,
                        support=((0, order),), valid=((None, order),))


def e_plus_apply(space, h, v: Mapping) -> FormalSeries:
    terms = e_plus_terms(space, h, v)
    return FormalSeries({(-k,): GradedVector(t) for k, t in enumerate(terms)}, 1,
                        support=((-(len(terms) - 1), 0),))


def omega_h_in(space, heis_vectors: Sequence[Mapping] | None = None) -> dict:
    """(1/2l) sum_ij g^ij beta_i(-1) beta_j(-1) 1 inside any space carrying the Heisenberg action."""
    ginv = inverse_gram(space.gram)
    heis = space.heisenberg if heis_vectors is None else heis_vectors
    out: dict = {}
    scale = 1 / (2 * space.ell)
    for i in range(space.hdim):
        for j in range(space.hdim):
            if ginv[i][j]:
                e_i = tuple(Fraction(int(t == i)) for t in range(space.hdim))
                axpy(out, space.hmode_vec(e_i, -1, heis[j]), ginv[i][j] * scale)
    return out


def omega_h(space) -> GradedVector:
    return GradedVector(omega_h_in(space))


def L_h_act(space, n: int, v: Mapping) -> GradedVector:
    """L_h(n) v from the normal-ordered quadratic (1/2l) sum g^ij sum_m :beta_i(m) beta_j(n-m):."""
    ginv = inverse_gram(space.gram)
    out: dict = {}
    scale = 1 / (2 * space.ell)
    for key, c in v.items():
        depth = int(space.weight(key) - space.min_weight(space.charge(key)))
        x = {key: c}
        for i in range(space.hdim):
            for j in range(space.hdim):
                g = ginv[i][j]
                if not g:
                    continue
                for m in range(n - depth, depth + 1):
                    if m < 0:
                        inner = space.hmode_vec(_unit(space, j), n - m, x)
                        if inner:
                            axpy(out, space.hmode_vec(_unit(space, i), m, inner), g * scale)
                    else:
                        inner = space.hmode_vec(_unit(space, i), m, x)
                        if inner:
                            axpy(out, space.hmode_vec(_unit(space, j), n - m, inner), g * scale)
    return GradedVector(out)


def _unit(space, i):
    return tuple(Fraction(int(t == i)) for t in range(space.hdim))


# ---------------------------------------------------------------------------
# checks

def check_lh_commutation(space, modes=(-2, 2), lmode=None) -> CheckReport:
    """[L_h(m), h(n)] = -n h(m+n) on basis vectors two below the truncation."""
    lmode = lmode or (lambda m, x: L_h_act(space, m, x))
    report = CheckReport("heisenberg-virasoro-commutation", True, {"modes": list(modes)})
    lo, hi = modes
    for w in space.weights_upto(space.truncation - 2):
        for ch in space.charges_at(w):
            for key in space.basis(w, ch):
                v = {key: Fraction(1)}
                for i in range(space.hdim):
                    u = _unit(space, i)
                    for m in range(lo, hi + 1):
                        for n in range(lo, hi + 1):
                            try:
                                lhs = dict(lmode(m, space.hmode_vec(u, n, v)))
                                axpy(lhs, space.hmode_vec(u, n, lmode(m, v)), -1)
                                rhs = {k: -n * c for k, c in space.hmode_vec(u, m + n, v).items()}
                            except TruncationError:
                                report.skipped += 1
                                continue
                            report.checked += 1
                            if axpy(lhs, rhs, -1):
                                report.passed = False
                                report.witness = {"m": m, "n": n, "direction": i + 1}
                                return report
    return report


def check_highest_weight(space, vectors, lmode=None) -> CheckReport:
    """L_h(0)a = <a,a>/2l a and L_h(-1)a = (1/l) alpha(-1)a for Heisenberg highest-weight vectors a."""
    lmode = lmode or (lambda m, x: L_h_act(space, m, x))
    report = CheckReport("heisenberg-highest-weight", True, None)
    for v in vectors:
        key = next(iter(v))
        alpha = tuple(space.charge(key))
        for i in range(space.hdim):
            for n in range(1, int(space.weight(key) - space.min_weight(alpha)) + 1):
                if space.hmode_vec(_unit(space, i), n, v):
                    raise ValueError("vector is not a Heisenberg highest-weight vector")
        report.checked += 1
        norm = space.pairing(alpha, alpha)
        l0 = lmode(0, v)
        if axpy(dict(l0), v, -(norm / (2 * space.ell))):
            report.passed = False
            report.witness = {"mode": 0}
            return report
        try:
            lm1 = dict(lmode(-1, v))
            # alpha(-1) in the h-basis of coordinates: sum alpha_i beta_i(-1)
            axpy(lm1, space.hmode_vec(alpha, -1, v), -1 / space.ell)
        except TruncationError:
            report.skipped += 1
            continue
        if lm1:
            report.passed = False
            report.witness = {"mode": -1}
            return report
    return report


def check_exchange(space, h, hp, v: Mapping, order: int = 4) -> CheckReport:
    """E^+(h,z1)E^-(h',z2) = (1 - z2/z1)^{l<h,h'>} E^-(h',z2)E^+(h,z1) up to bi-order ``order``."""
    h, hp = _hcoords(space, h), _hcoords(space, hp)
    c = space.ell * space.pairing(h, hp)
    report = CheckReport("exponential-exchange", True, {"order": order})
    em_v = e_minus_terms(space, hp, v, order)
    ep_v = e_plus_terms(space, h, v)
    ep_v += [{}] * (order + 1 - len(ep_v))
    for a in range(order + 1):
        for b in range(order + 1):
            lhs: dict = {}
            if em_v[b]:
                ep = e_plus_terms(space, h, em_v[b])
                if a < len(ep):
                    lhs = dict(ep[a])
            rhs: dict = {}
            for j in range(0, min(a, b) + 1):
                if ep_v[a - j]:
                    em = e_minus_terms(space, hp, ep_v[a - j], b - j)
                    axpy(rhs, em[b - j], binom(c, j) * (-1) ** j)
            report.checked += 1
            if axpy(lhs, rhs, -1):
                report.passed = False
                report.witness = {"z1_power": -a, "z2_power": b}
                return report
    return report


def heisenberg_virasoro(space, window=(-2, 2)) -> CheckReport:
    top = space.truncation - 4
    vectors = [GradedVector.basis(k) for w in space.weights_upto(top) for c in space.charges_at(w)
               for k in space.basis(w, c)]
    return check_virasoro(lambda m, x: L_h_act(space, m, x), vectors, space.rank, window)

