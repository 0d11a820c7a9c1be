"""Rational lattices, 2-cocycles and the lattice vertex algebra V_L with its modules V_{L+lambda}.

Charges are coordinates in the lattice basis, which doubles as the basis of h
(level 1, form given by the gram matrix).  A basis key is ``(coords, fock)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from ._fock import colored_partitions, fock_degree
from .exactnum import ScalarError, format_scalar, parse_scalar
from .formal import FormalSeries
from .heis import FockKernel, _gram, inverse_gram, omega_h_in
from .linalg import axpy
from .voacore import GradedVector, TruncationError, VertexAlgebra, VertexSpace, add_charge

__all__ = [
    "Lattice",
    "DualLattice",
    "Cocycle",
    "dual_lattice",
    "make_cocycle",
    "LatticeModule",
    "LatticeVOA",
    "lattice_vertex_coeff",
    "lattice_key",
    "lattice_from_json",
    "partition_count",
    "graded_dims_by_enumeration",
]


class Lattice:
    """A nondegenerate rational lattice given by its gram matrix."""

    def __init__(self, gram, labels: Sequence[str] | None = None, pairing=None):
        self.gram = _gram(gram)
        self.rank = len(self.gram)
        self.inverse = inverse_gram(self.gram)
        self.labels = tuple(labels) if labels else tuple(f"a{i + 1}" for i in range(self.rank))
        # integral pairing used for the cocycle; defaults to the form itself
        self.cocycle_pairing = _gram(pairing) if pairing is not None else self.gram

    def pairing(self, a, b):
        total = Fraction(0)
        for i, x in enumerate(a):
            if x:
                row = self.gram[i]
                for j, y in enumerate(b):
                    if y:
                        total += x * row[j] * y
        return total

    def norm(self, a):
        return self.pairing(a, a)

    def is_positive_definite(self) -> bool:
        # Sylvester's criterion with exact leading minors
        for k in range(1, self.rank + 1):
            if _det([row[:k] for row in self.gram[:k]]) <= 0:
                return False
        return True

    def vectors_up_to(self, bound, offset=None) -> list:
        """Points of offset + L with <x,x>/2 <= bound (positive definite lattices only)."""
        if not self.is_positive_definite():
            raise ScalarError("lattice enumeration needs a positive definite form")
        offset = tuple(Fraction(x) for x in (offset or (0,) * self.rank))
        # |x_i| <= sqrt(<x,x> * ginv_ii)
        ranges = []
        for i in range(self.rank):
            r = math.isqrt(int(2 * bound * self.inverse[i][i]) + 1) + 1
            lo = math.floor(-r - offset[i])
            hi = math.ceil(r - offset[i])
            ranges.append(range(lo, hi + 1))
        out = []

        def rec(i, acc):
            if i == self.rank:
                x = tuple(acc)
                if self.norm(x) / 2 <= bound:
                    out.append(x)
                return
            for k in ranges[i]:
                rec(i + 1, acc + [offset[i] + k])

        rec(0, [])
        return sorted(out, key=lambda x: (self.norm(x), x))

    def to_json(self):
        return {"gram": [[str(x) for x in row] for row in self.gram]}


def _det(m):
    m = [list(map(Fraction, row)) for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


class DualLattice:
    """L-dual: ``basis[j]`` are coordinates (in the basis of L) of the dual basis vectors."""

    def __init__(self, lattice: Lattice):
        self.lattice = lattice
        self.basis = tuple(tuple(row) for row in lattice.inverse)
        self.gram = lattice.inverse

    def contains(self, coords) -> bool:
        L = self.lattice
        for i in range(L.rank):
            e = tuple(Fraction(int(t == i)) for t in range(L.rank))
            if L.pairing(e, coords).denominator != 1:
                return False
        return True


def dual_lattice(L: Lattice) -> DualLattice:
    return DualLattice(L)


class Cocycle:
    """Bimultiplicative +-1 cocycle fixed by basis order.

    eps(a_i, a_j) = (-1)^{pairing(a_i, a_j)} for i > j and 1 otherwise.
    """

    def __init__(self, lattice: Lattice):
        p = lattice.cocycle_pairing
        for i, row in enumerate(p):
            for x in row:
                if x.denominator != 1:
                    raise ScalarError("cocycle pairing must be integral")
            if p[i][i] % 2 != 0:
                raise ScalarError("not an even lattice for this pairing")
        self.lattice = lattice
        self.matrix = tuple(tuple(int(p[i][j]) % 2 if i > j else 0 for j in range(len(p))) for i in range(len(p)))

    def __call__(self, a, b) -> int:
        s = 0
        for i, x in enumerate(a):
            if x:
                row = self.matrix[i]
                for j, y in enumerate(b):
                    if y and row[j]:
                        s += x * y
        if Fraction(s).denominator != 1:
            raise ScalarError("cocycle evaluated off the lattice")
        return -1 if int(s) % 2 else 1

    def commutator(self, a, b) -> int:
        return self(a, b) * self(b, a)


def make_cocycle(L: Lattice) -> Cocycle:
    return Cocycle(L)


def lattice_key(coords, fock=()):
    return (tuple(Fraction(x) for x in coords), tuple(fock))


class LatticeModule(VertexSpace):
    """V_{L+lambda} = M(1) (x) C[L+lambda] truncated at weight N, as a module for ``algebra``."""

    kind = "lattice-module"

    def __init__(self, algebra: "LatticeVOA", offset=None, truncation: int | None = None):
        super().__init__()
        self._algebra = algebra
        L = algebra.lattice
        self.lattice = L
        self.gram = L.gram
        self.hdim = L.rank
        self.ell = Fraction(1)
        self.truncation = algebra.truncation if truncation is None else int(truncation)
        offset = tuple(Fraction(x) for x in (offset or (0,) * L.rank))
        if not dual_lattice(L).contains(offset):
            raise ScalarError("module offset must lie in the dual lattice")
        # lexicographically smallest representative with coordinates in [0, 1)
        self.offset = tuple(x - math.floor(x) for x in offset)
        self.kernel = algebra.kernel
        self.cocycle = algebra.cocycle
        self._charges = L.vectors_up_to(self.truncation, self.offset)
        self._charge_set = set(self._charges)

    @property
    def algebra(self):
        return self._algebra

    def descriptor(self):
        return {"type": "lattice-module", "offset": [str(x) for x in self.offset], "truncation": self.truncation}

    def on_coset(self, coords) -> bool:
        return all((c - o).denominator == 1 for c, o in zip(coords, self.offset))

    def weight(self, key):
        coords, fock = key
        return self.lattice.norm(coords) / 2 + fock_degree(fock)

    def charge(self, key):
        return key[0]

    def min_weight(self, charge):
        if not self.on_coset(charge):
            return None
        return self.lattice.norm(charge) / 2

    def in_range(self, weight, charge):
        return weight <= self.truncation

    def basis(self, weight, charge):
        charge = tuple(charge)
        mw = self.min_weight(charge)
        if mw is None or weight > self.truncation:
            return []
        d = weight - mw
        if d < 0 or d.denominator != 1:
            return []
        return [(charge, f) for f in colored_partitions(int(d), self.hdim)]

    def charges_at(self, weight):
        return [c for c in self._charges if (weight - self.lattice.norm(c) / 2).denominator == 1
                and self.lattice.norm(c) / 2 <= weight]

    def weights_upto(self, top):
        ws = set()
        top = min(Fraction(top), Fraction(self.truncation))
        for c in self._charges:
            w = self.lattice.norm(c) / 2
            while w <= top:
                ws.add(w)
                w += 1
        return sorted(ws)

    def hmode(self, i, n, key):
        coords, fock = key
        if n == 0:
            e = tuple(Fraction(int(t == i)) for t in range(self.hdim))
            c = self.lattice.pairing(e, coords)
            return {key: c} if c else {}
        if n < 0 and self.weight(key) - n > self.truncation:
            raise TruncationError("truncation overflow")
        return {(coords, f): c for f, c in self.kernel.mode(i, n, fock).items()}

    gmode = hmode

    def prim_ymode(self, pkey, n, key):
        """Coefficient of z^{-n-1} in Y(e^alpha, z) = E^-(-alpha,z) E^+(-alpha,z) e_alpha z^{alpha(0)}."""
        alpha, _ = pkey
        if not any(alpha):
            return {key: Fraction(1)} if n == -1 else {}
        mu, fock = key
        s = self.lattice.pairing(alpha, mu)
        eps = self.cocycle(alpha, tuple(m - o for m, o in zip(mu, self.offset)))
        new = add_charge(alpha, mu)
        neg = tuple(-a for a in alpha)
        # z^{s + k_minus - k_plus} = z^{-n-1}
        if s.denominator != 1:
            raise ScalarError("non-integral pairing between charges")
        target = -n - 1 - int(s)
        out: dict = {}
        kp = 0
        deg = fock_degree(fock)
        while kp <= deg:
            km = target + kp
            if km >= 0:
                plus = self.kernel.e_plus(neg, kp, fock)
                for f, c in plus.items():
                    for g, d in self.kernel.e_minus(neg, km, f).items():
                        axpy(out, {(new, g): d}, c * eps)
            kp += 1
        return out


class LatticeVOA(LatticeModule, VertexAlgebra):
    """The lattice vertex algebra V_L of an even lattice, truncated at weight N."""

    kind = "lattice"

    def __init__(self, lattice: Lattice, truncation: int):
        self.lattice = lattice
        self.truncation = int(truncation)
        self.kernel = FockKernel(lattice.gram, Fraction(1))
        self.cocycle = make_cocycle(lattice)
        for i in range(lattice.rank):
            if lattice.gram[i][i] % 2 != 0 or any(x.denominator != 1 for x in lattice.gram[i]):
                raise ScalarError("lattice vertex algebra needs an even integral lattice")
        LatticeModule.__init__(self, self, None, truncation)
        d = lattice.rank
        self.zero = tuple(Fraction(0) for _ in range(d))
        self.generators = tuple(range(d))
        self.vacuum_key = (self.zero, ())
        self.heisenberg = tuple(GradedVector.basis((self.zero, ((1, i),))) for i in range(d))
        self.rank = Fraction(d)
        self.omega = GradedVector(omega_h_in(self))

    @classmethod
    def from_gram(cls, gram, truncation: int):
        return cls(Lattice(gram), truncation)

    def descriptor(self):
        return {"type": "lattice", "gram": [[format_scalar(x) for x in r] for r in self.lattice.gram],
                "truncation": self.truncation}

    def decompose(self, key):
        coords, fock = key
        if not fock:
            return ("prim", key)
        n, i = fock[0]
        return ("gen", i, n, (coords, fock[1:]))

    def gen_charge(self, g):
        return self.zero

    def gen_vector(self, g):
        return self.heisenberg[g]

    def e(self, coords) -> GradedVector:
        """The vector e^alpha."""
        return GradedVector.basis(lattice_key(coords))

    def module(self, offset, truncation: int | None = None) -> LatticeModule:
        return LatticeModule(self, offset, truncation)


def lattice_vertex_coeff(space: LatticeModule, alpha, window: tuple, v) -> FormalSeries:
    """Y(e^alpha, z)v restricted to exponents lo..hi of z (lattice exponents are integral)."""
    lo, hi = window
    alpha = tuple(Fraction(x) for x in alpha)
    terms = {}
    for p in range(lo, hi + 1):
        out: dict = {}
        for k, c in v.items():
            axpy(out, space.ymode(lattice_key(alpha), -p - 1, k), c)
        if out:
            terms[(p,)] = GradedVector(out)
    return FormalSeries(terms, 1, support=((lo, hi),), valid=((lo, hi),))


def lattice_from_json(obj) -> Lattice:
    gram = [[parse_scalar(x) if isinstance(x, str) else Fraction(x) for x in row] for row in obj["gram"]]
    return Lattice(gram, pairing=obj.get("pairing"))



def partition_count(n: int) -> int:
    """Number of partitions of n, by Euler's pentagonal recurrence."""
    if n < 0:
        return 0
    p = [1] + [0] * n
    for m in range(1, n + 1):
        k, s = 1, 0
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            s += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                s += sign * p[m - g2]
            k += 1
        p[m] = s
    return p[n]


def graded_dims_by_enumeration(lattice: Lattice, top, offset=None) -> dict:
    """weight -> sum over charges of p_d(weight - <a,a>/2), independent of the vertex-algebra code."""
    out: dict = {}
    for c in lattice.vectors_up_to(top, offset):
        w = lattice.norm(c) / 2
        r = 0
        while w + r <= top:
            out[w + r] = out.get(w + r, 0) + _colored_partition_count(r, lattice.rank)
            r += 1
    return dict(sorted(out.items()))


def _colored_partition_count(n: int, d: int) -> int:
    # coefficient of q^n in prod (1-q^k)^{-d}
    coeffs = [1] + [0] * n
    for k in range(1, n + 1):
        for _ in range(d):
            for m in range(k, n + 1):
                coeffs[m] += coeffs[m - k]
    return coeffs[n]

