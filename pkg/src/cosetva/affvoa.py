"""Affine sl2 at level l: the generalized Verma modules M(l, j), the vertex operator
algebra M(l, 0) with its Sugawara vector, the simple quotient L(l, 0) and the
theta twist.

Generators are indexed e=0, h=1, f=2.  A basis key is ``(word, t)`` where
``word`` is a PBW word of parts ``(n, g)`` meaning g(-n), sorted by descending
``n`` then generator index, and ``t`` indexes the top vector v_t of the
(j+1)-dimensional sl2-module (h v_t = (j-2t) v_t).  Charges are coordinates
in the basis {h} of the Cartan subalgebra, so e has charge 1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from ._fock import colored_partitions
from .exactnum import ELL, RatFunc, ScalarError, format_scalar, parse_level
from .linalg import Echelon, axpy
from .voacore import CheckReport, GradedVector, TruncationError, VertexAlgebra, VertexSpace, vertex_coeff

__all__ = [
    "GENERATORS",
    "AffineModule",
    "AffineVOA",
    "AffineQuotient",
    "TwistedModule",
    "gmode_act",
    "vertex_coeff_affine",
    "sugawara_omega",
    "central_charge",
    "simple_quotient",
    "theta_twist",
    "check_generator_commutation",
    "pbw_key_json",
]

GENERATORS = ("e", "h", "f")
E, H, F = 0, 1, 2
DUAL_COXETER = 2

# [a, b] as {generator: coefficient}
BRACKET = {
    (E, E): {}, (E, H): {E: -2}, (E, F): {H: 1},
    (H, E): {E: 2}, (H, H): {}, (H, F): {F: -2},
    (F, E): {H: -1}, (F, H): {F: 2}, (F, F): {},
}
FORM = {(E, F): 1, (F, E): 1, (H, H): 2}
ROOT_CHARGE = {E: Fraction(1), H: Fraction(0), F: Fraction(-1)}


def pbw_key_json(key):
    word, t = key
    return {"word": [[GENERATORS[g], n] for n, g in word], "top": t}


def central_charge(level):
    if isinstance(level, int):
        level = Fraction(level)
    if level == -DUAL_COXETER:
        raise ScalarError("critical level")
    return 3 * level / (level + DUAL_COXETER)


class AffineModule(VertexSpace):
    """The generalized Verma module M(l, j) truncated at degree N."""

    kind = "affine-module"

    def __init__(self, level, truncation: int, j: int = 0, algebra: "AffineVOA | None" = None):
        super().__init__()
        if isinstance(level, str):
            level = parse_level(level)
        if isinstance(level, int):
            level = Fraction(level)
        if not level:
            raise ScalarError("level must be nonzero")
        if level == -DUAL_COXETER:
            raise ScalarError("critical level")
        self.ell = level
        self.truncation = int(truncation)
        self.j = int(j)
        if self.j < 0:
            raise ScalarError("top weight must be a nonnegative integer")
        self.gram = ((Fraction(2),),)
        self.hdim = 1
        if self.j and isinstance(level, RatFunc) and not level.is_constant():
            raise ScalarError("a formal level is supported only for M(l, 0)")
        self.top_weight = Fraction(self.j * (self.j + 2)) / (4 * (level + DUAL_COXETER)) if self.j else Fraction(0)
        self._alg = algebra
        self._act: dict = {}
        self._bases: dict = {}

    @property
    def algebra(self):
        return self._alg

    def descriptor(self):
        lv = "formal" if isinstance(self.ell, RatFunc) and self.ell == ELL else format_scalar(self.ell)
        return {"type": "affine-sl2", "level": lv, "truncation": self.truncation, "top": self.j}

    # grading
    def top_charge(self, t):
        return Fraction(self.j - 2 * t, 2)

    def degree(self, key):
        return sum(n for n, _ in key[0])

    def weight(self, key):
        return self.degree(key) + self.top_weight

    def charge(self, key):
        word, t = key
        return (self.top_charge(t) + sum(ROOT_CHARGE[g] for _, g in word),)

    def min_weight(self, charge):
        c = charge[0]
        best = None
        for t in range(self.j + 1):
            d = c - self.top_charge(t)
            if d.denominator == 1:
                best = abs(d) if best is None else min(best, abs(d))
        return None if best is None else best + self.top_weight

    def in_range(self, weight, charge):
        return weight - self.top_weight <= self.truncation

    def _degree_basis(self, d):
        b = self._bases.get(d)
        if b is None:
            b = {}
            for word in colored_partitions(d, 3):
                for t in range(self.j + 1):
                    key = (word, t)
                    b.setdefault(self.charge(key), []).append(key)
            self._bases[d] = b
        return b

    def basis(self, weight, charge):
        d = weight - self.top_weight
        if d.denominator != 1 or not 0 <= d <= self.truncation:
            return []
        return list(self._degree_basis(int(d)).get(tuple(charge), []))

    def charges_at(self, weight):
        d = weight - self.top_weight
        if d.denominator != 1 or not 0 <= d <= self.truncation:
            return []
        return sorted(self._degree_basis(int(d)))

    def weights_upto(self, top):
        out = []
        d = 0
        while d <= self.truncation and d + self.top_weight <= top:
            out.append(d + self.top_weight)
            d += 1
        return out

    # actions
    def _top(self, g, t):
        if g == H:
            c = self.j - 2 * t
            return {((), t): Fraction(c)} if c else {}
        if g == F:
            return {((), t + 1): Fraction(1)} if t < self.j else {}
        c = t * (self.j - t + 1)
        return {((), t - 1): Fraction(c)} if c else {}

    def gmode(self, g, m, key):
        """g(m) applied to a basis key, in PBW normal form."""
        memo = self._act.get((g, m, key))
        if memo is not None:
            return memo
        if m < 0 and self.degree(key) - m > self.truncation:
            raise TruncationError("truncation overflow")
        res = self._normal(g, m, key)
        self._act[(g, m, key)] = res
        return res

    def _normal(self, g, m, key):
        word, t = key
        if m > self.degree(key):
            return {}
        if not word:
            if m < 0:
                return {(((-m, g),), t): Fraction(1)}
            if m > 0:
                return {}
            return self._top(g, t)
        n1, b = word[0]
        if m < 0 and (m, g) <= (-n1, b):
            return {(((-m, g),) + word, t): Fraction(1)}
        rest = (word[1:], t)
        out: dict = {}
        for k, c in self.gmode(g, m, rest).items():
            axpy(out, self.gmode(b, -n1, k), c)
        for gg, cc in BRACKET[(g, b)].items():
            for k, c in self.gmode(gg, m - n1, rest).items():
                axpy(out, {k: c * cc})
        if m == n1 and (g, b) in FORM:
            axpy(out, {rest: m * FORM[(g, b)] * self.ell})
        return out

    def hmode(self, i, n, key):
        return self.gmode(H, n, key)

    def prim_ymode(self, pkey, n, key):
        return {key: Fraction(1)} if n == -1 else {}


class AffineVOA(AffineModule, VertexAlgebra):
    """M(l, 0) as a vertex operator algebra with the Sugawara conformal vector."""

    kind = "affine"

    def __init__(self, level, truncation: int):
        AffineModule.__init__(self, level, truncation, 0, None)
        self._alg = self
        self.generators = (E, H, F)
        self.vacuum_key = ((), 0)
        self.heisenberg = (self.gen_vector(H),)
        self.rank = central_charge(self.ell)
        self.omega = sugawara_omega(self)

    def gen_charge(self, g):
        return (ROOT_CHARGE[g],)

    def gen_vector(self, g):
        return GradedVector.basis((((1, g),), 0))

    def decompose(self, key):
        word, t = key
        if not word:
            return ("prim", key)
        n, g = word[0]
        return ("gen", g, n, (word[1:], t))

    def module(self, j: int, truncation: int | None = None) -> AffineModule:
        return AffineModule(self.ell, self.truncation if truncation is None else truncation, j, self)


def gmode_act(space, g, n: int, v: Mapping) -> GradedVector:
    if isinstance(g, str):
        g = GENERATORS.index(g)
    return GradedVector(space.gmode_vec(g, n, v))


def vertex_coeff_affine(space, u: Mapping, n, v: Mapping) -> GradedVector:
    return vertex_coeff(space, u, n, v)


def sugawara_omega(V: AffineModule) -> GradedVector:
    """(1/2(l+2)) (1/2 h(-1)^2 + e(-1)f(-1) + f(-1)e(-1)) 1."""
    vac = {((), 0): Fraction(1)}
    acc: dict = {}
    axpy(acc, V.gmode_vec(H, -1, V.gmode_vec(H, -1, vac)), Fraction(1, 2))
    axpy(acc, V.gmode_vec(E, -1, V.gmode_vec(F, -1, vac)))
    axpy(acc, V.gmode_vec(F, -1, V.gmode_vec(E, -1, vac)))
    scale = 1 / (2 * (V.ell + DUAL_COXETER))
    return GradedVector({k: c * scale for k, c in acc.items()})


# ---------------------------------------------------------------------------
# simple quotient

class AffineQuotient(VertexAlgebra):
    """L(l, 0) = M(l, 0) / <e(-1)^{l+1} 1> for a positive integral level.

    Algebra-side keys are PBW keys of M(l, 0) (the vertex operator of any
    representative is well defined on the quotient); space-side keys are the
    standard monomials, those that are not pivots of the ideal's echelon basis.
    """

    kind = "affine-quotient"

    def __init__(self, M: AffineVOA):
        super().__init__()
        lv = M.ell
        if isinstance(lv, RatFunc) or lv.denominator != 1 or lv <= 0:
            raise ScalarError("the simple quotient needs a positive integral level")
        self.M = M
        self.ell = lv
        self.truncation = M.truncation
        self.gram = M.gram
        self.hdim = 1
        self.top_weight = Fraction(0)
        self.generators = M.generators
        self.vacuum_key = M.vacuum_key
        self.heisenberg = M.heisenberg
        self.rank = M.rank
        self._red: dict = {}
        self.ideal = self._saturate(int(lv))
        self.omega = GradedVector(self.reduce(M.omega))

    def descriptor(self):
        d = self.M.descriptor()
        d["quotient"] = True
        return d

    def _saturate(self, level):
        M = self.M
        ideal: dict = {}
        d0 = level + 1
        if d0 > M.truncation:
            return ideal
        s = {M.vacuum_key: Fraction(1)}
        for _ in range(d0):
            s = M.gmode_vec(E, -1, s)
        if M.gmode_vec(E, 0, s) or M.gmode_vec(F, 1, s):
            raise ArithmeticError("e(-1)^{l+1}1 is not singular")
        seeds = []
        v = s
        while v:
            seeds.append(v)
            v = M.gmode_vec(F, 0, v)

        def add(vec):
            key = next(iter(vec))
            slot = (M.degree(key), M.charge(key))
            ech = ideal.setdefault(slot, Echelon())
            ech.add(vec)

        for v in seeds:
            add(v)
        for d in range(d0 + 1, M.truncation + 1):
            for n in range(1, d - d0 + 1):
                for (dd, _), ech in list(ideal.items()):
                    if dd != d - n:
                        continue
                    for row in list(ech.rows.values()):
                        for g in (E, H, F):
                            add(M.gmode_vec(g, -n, row))
        return ideal

    def reduce(self, vec: Mapping) -> dict:
        out = dict(vec)
        slots = {}
        for k in vec:
            slots.setdefault((self.M.degree(k), self.M.charge(k)), None)
        for slot in slots:
            ech = self.ideal.get(slot)
            if ech is not None:
                out = ech.reduce(out)
        return out

    def ideal_basis(self, degree, charge) -> list:
        ech = self.ideal.get((degree, tuple(charge)))
        return ech.basis() if ech else []

    # grading, delegated to M on the algebra side
    def weight(self, key):
        return self.M.weight(key)

    def charge(self, key):
        return self.M.charge(key)

    def min_weight(self, charge):
        return self.M.min_weight(charge)

    def in_range(self, weight, charge):
        return self.M.in_range(weight, charge)

    def basis(self, weight, charge):
        ech = self.ideal.get((weight, tuple(charge)))
        full = self.M.basis(weight, charge)
        if ech is None:
            return full
        piv = set(ech.rows)
        return [k for k in full if k not in piv]

    def charges_at(self, weight):
        return [c for c in self.M.charges_at(weight) if self.basis(weight, c)]

    def weights_upto(self, top):
        return self.M.weights_upto(top)

    def gmode(self, g, n, key):
        memo = self._red.get((g, n, key))
        if memo is None:
            memo = self.reduce(self.M.gmode(g, n, key))
            self._red[(g, n, key)] = memo
        return memo

    def hmode(self, i, n, key):
        return self.gmode(H, n, key)

    def gen_charge(self, g):
        return self.M.gen_charge(g)

    def gen_vector(self, g):
        return self.M.gen_vector(g)

    def decompose(self, key):
        return self.M.decompose(key)

    def prim_ymode(self, pkey, n, key):
        return {key: Fraction(1)} if n == -1 else {}


def simple_quotient(level, truncation: int) -> AffineQuotient:
    return AffineQuotient(AffineVOA(level, truncation))


# ---------------------------------------------------------------------------
# theta twist

class TwistedModule(VertexSpace):
    """W with the affine action precomposed by theta_beta, beta = b*h in the coweight lattice.

    theta_beta sends e(n) to e(n + 2b), f(n) to f(n - 2b) and h(n) to
    h(n) + 2bl delta_{n,0}.  Charges move by l*b and weights by 2b*c + l*b^2.
    """

    kind = "affine-twisted"

    def __init__(self, base: VertexSpace, b):
        super().__init__()
        b = Fraction(b)
        if (2 * b).denominator != 1:
            raise ScalarError("non-integral pairing of beta with the roots")
        if isinstance(base.ell, RatFunc):
            raise ScalarError("theta twist needs a concrete level")
        self.base = base
        self.b = b
        self.ell = base.ell
        self.gram = base.gram
        self.hdim = 1
        self.truncation = base.truncation
        self.shift = int(2 * b)

    @property
    def algebra(self):
        return self.base.algebra

    def _wshift(self, c_old):
        return 2 * self.b * c_old + self.ell * self.b * self.b

    def _old(self, charge):
        return (charge[0] - self.ell * self.b,)

    def weight(self, key):
        return self.base.weight(key) + self._wshift(self.base.charge(key)[0])

    def charge(self, key):
        return (self.base.charge(key)[0] + self.ell * self.b,)

    def min_weight(self, charge):
        old = self._old(charge)
        mw = self.base.min_weight(old)
        return None if mw is None else mw + self._wshift(old[0])

    def in_range(self, weight, charge):
        old = self._old(charge)
        return self.base.in_range(weight - self._wshift(old[0]), old)

    def basis(self, weight, charge):
        old = self._old(charge)
        return self.base.basis(weight - self._wshift(old[0]), old)

    def charges_at(self, weight):
        out = []
        for w in self.base.weights_upto(self.truncation + self.base.top_weight):
            for c in self.base.charges_at(w):
                if w + self._wshift(c[0]) == weight:
                    out.append((c[0] + self.ell * self.b,))
        return sorted(set(out))

    def weights_upto(self, top):
        ws = set()
        for w in self.base.weights_upto(self.truncation + self.base.top_weight):
            for c in self.base.charges_at(w):
                nw = w + self._wshift(c[0])
                if nw <= top:
                    ws.add(nw)
        return sorted(ws)

    def gmode(self, g, n, key):
        if g == E:
            return self.base.gmode(E, n + self.shift, key)
        if g == F:
            return self.base.gmode(F, n - self.shift, key)
        out = dict(self.base.gmode(H, n, key))
        if n == 0:
            axpy(out, {key: 2 * self.b * self.ell})
        return out

    def hmode(self, i, n, key):
        return self.gmode(H, n, key)

    def prim_ymode(self, pkey, n, key):
        return {key: Fraction(1)} if n == -1 else {}


def theta_twist(b, module: VertexSpace) -> TwistedModule:
    """Twist by beta = b*h; ``b`` must make <alpha, beta> = 2b integral."""
    return TwistedModule(module, b)


# ---------------------------------------------------------------------------
# checks

def check_generator_commutation(space, lmode=None, modes=(-2, 2)) -> CheckReport:
    """[L(m), a(n)] = -n a(m+n) for a in {e, h, f} on basis vectors two below the truncation."""
    lmode = lmode or space.lmode
    lo, hi = modes
    report = CheckReport("affine-virasoro-commutation", True, {"modes": [lo, hi]})
    for w in space.weights_upto(space.truncation - 2 + space.top_weight):
        for c in space.charges_at(w):
            for key in space.basis(w, c):
                v = {key: Fraction(1)}
                for g in (E, H, F):
                    for m in range(lo, hi + 1):
                        for n in range(lo, hi + 1):
                            try:
                                lhs = dict(lmode(m, space.gmode_vec(g, n, v)))
                                axpy(lhs, space.gmode_vec(g, n, lmode(m, v)), -1)
                                axpy(lhs, space.gmode_vec(g, m + n, v), n)
                            except TruncationError:
                                report.skipped += 1
                                continue
                            report.checked += 1
                            if lhs:
                                report.passed = False
                                report.witness = {"generator": GENERATORS[g], "m": m, "n": n}
                                return report
    return report
