"""Exact scalars and exponents.

Three scalar kinds are used throughout the package:

* ``fractions.Fraction`` (and ``int``) for rational arithmetic,
* :class:`RatFunc`, a reduced rational function in one formal parameter
  ``l`` standing for the level,
* :class:`Cyclotomic`, an element of Q(zeta) with zeta = exp(pi*i/m), used
  only for the phase factors of skew symmetry.

Exponents of formal variables are rationals, or :class:`Exponent` pairs
``a + b*l^-1`` when the level is formal.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

__all__ = [
    "Fraction",
    "RatFunc",
    "Cyclotomic",
    "Exponent",
    "ELL",
    "ScalarError",
    "binom",
    "exponent_residue",
    "is_integral",
    "int_offset",
    "over_ell",
    "phase",
    "parse_scalar",
    "format_scalar",
    "parse_exponent",
    "format_exponent",
    "parse_level",
    "specialize",
]


class ScalarError(ValueError):
    pass


# ---------------------------------------------------------------------------
# univariate polynomials over Q, stored low degree first with no trailing zeros

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(p, q):
    n = max(len(p), len(q))
    return _trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def _pneg(p):
    return tuple(-c for c in p)


def _pmul(p, q):
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _pscale(p, c):
    if c == 0:
        return ()
    return tuple(a * c for a in p)


def _pdivmod(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    quo = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    lead = Fraction(q[-1])
    while len(r) >= len(q) and r:
        c = r[-1] / lead
        k = len(r) - len(q)
        quo[k] = c
        for i, b in enumerate(q):
            r[k + i] -= c * b
        r = list(_trim(r))
    return _trim(quo), _trim(r)


def _pmonic(p):
    if not p:
        return p
    lead = Fraction(p[-1])
    return tuple(Fraction(c) / lead for c in p)


def _pgcd(p, q):
    while q:
        p, q = q, _pdivmod(p, q)[1]
    return _pmonic(p)


def _peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pformat(p, var="l"):
    if not p:
        return "0"
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        elif mag == 1:
            body = var if k == 1 else f"{var}^{k}"
        else:
            body = f"{mag}*{var}" if k == 1 else f"{mag}*{var}^{k}"
        terms.append(("-" if c < 0 else "+", body))
    sign, body = terms[0]
    s = ("-" if sign == "-" else "") + body
    for sign, body in terms[1:]:
        s += sign + body
    return s


class RatFunc:
    """Reduced quotient num/den of polynomials in the level ``l``.

    The denominator is monic; a zero value has numerator ``()`` and
    denominator ``(1,)``.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=(), den=(1,), _reduced=False):
        num = _trim(Fraction(c) for c in num)
        den = _trim(Fraction(c) for c in den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if not num:
                den = (Fraction(1),)
            else:
                g = _pgcd(num, den)
                if len(g) > 1:
                    num = _pdivmod(num, g)[0]
                    den = _pdivmod(den, g)[0]
                lead = den[-1]
                if lead != 1:
                    num = _pscale(num, 1 / lead)
                    den = _pscale(den, 1 / lead)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def variable(cls):
        return cls((0, 1), (1,), _reduced=True)

    @classmethod
    def const(cls, c):
        c = Fraction(c)
        return cls((c,) if c else (), (1,), _reduced=True)

    @staticmethod
    def _coerce(x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, Fraction)):
            return RatFunc.const(x)
        return None

    def is_constant(self):
        return len(self.num) <= 1 and len(self.den) == 1

    def constant_value(self):
        if not self.is_constant():
            raise ScalarError("rational function is not constant")
        return self.num[0] if self.num else Fraction(0)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            return RatFunc(_padd(self.num, o.num), self.den)
        return RatFunc(_padd(_pmul(self.num, o.den), _pmul(o.num, self.den)), _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(_pneg(self.num), self.den, _reduced=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RatFunc()
            return RatFunc(_pscale(self.num, Fraction(other)), self.den, _reduced=True)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = RatFunc.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    def evaluate(self, x):
        x = Fraction(x)
        d = _peval(self.den, x)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at l = {x}")
        return _peval(self.num, x) / d

    def integer_form(self):
        """(num, den) scaled to integer coefficients, den leading coeff > 0."""
        dens = [c.denominator for c in self.num + self.den]
        m = 1
        for d in dens:
            m = m * d // math.gcd(m, d)
        num = [int(c * m) for c in self.num]
        den = [int(c * m) for c in self.den]
        g = 0
        for c in num + den:
            g = math.gcd(g, c)
        if g > 1:
            num = [c // g for c in num]
            den = [c // g for c in den]
        return tuple(num), tuple(den)

    def __str__(self):
        num, den = self.integer_form()
        if den == (1,):
            return _pformat(num)
        return f"({_pformat(num)})/({_pformat(den)})"

    def __repr__(self):
        return f"RatFunc({self})"


ELL = RatFunc.variable()


# ---------------------------------------------------------------------------
# cyclotomic numbers

@lru_cache(maxsize=None)
def _cyclotomic_poly(n):
    """Phi_n with Fraction coefficients, low degree first."""
    p = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    p = _trim(p)
    for d in range(1, n):
        if n % d == 0:
            p = _pdivmod(p, _cyclotomic_poly(d))[0]
    return p


class Cyclotomic:
    """Element of Q(zeta), zeta = exp(pi*i/m), a primitive 2m-th root of unity."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m, coeffs):
        if m < 1:
            raise ScalarError("cyclotomic order must be positive")
        self.m = m
        c = _trim(Fraction(x) for x in coeffs)
        phi = _cyclotomic_poly(2 * m)
        if len(c) >= len(phi):
            c = _pdivmod(c, phi)[1]
        self.coeffs = c

    @classmethod
    def zeta_power(cls, m, k):
        k %= 2 * m
        return cls(m, [0] * k + [1])

    def _lift(self, m2):
        if m2 == self.m:
            return self
        step = m2 // self.m
        out = [Fraction(0)] * (step * len(self.coeffs))
        for i, c in enumerate(self.coeffs):
            out[i * step] = c
        return Cyclotomic(m2, out)

    def _pair(self, other):
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic(self.m, [other])
        if isinstance(other, Cyclotomic):
            if other.m == self.m:
                return self, other
            m2 = self.m * other.m // math.gcd(self.m, other.m)
            return self._lift(m2), other._lift(m2)
        return None, None

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.m, _padd(a.coeffs, b.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.m, _pneg(self.coeffs))

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.m, _padd(a.coeffs, _pneg(b.coeffs)))

    def __rsub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.m, _padd(b.coeffs, _pneg(a.coeffs)))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.m, _pscale(self.coeffs, Fraction(other)))
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.m, _pmul(a.coeffs, b.coeffs))

    __rmul__ = __mul__

    def inverse(self):
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        # extended Euclid against Phi_{2m}
        phi = _cyclotomic_poly(2 * self.m)
        r0, r1 = phi, self.coeffs
        s0, s1 = (), (Fraction(1),)
        while r1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _padd(s0, _pneg(_pmul(q, s1)))
        # r0 is a nonzero constant since Phi is irreducible
        return Cyclotomic(self.m, _pscale(s0, 1 / r0[0]))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return b * a.inverse()

    def is_rational(self):
        return len(self.coeffs) <= 1

    def rational_value(self):
        if not self.is_rational():
            raise ScalarError("cyclotomic number is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.rational_value())
        return hash((self.m, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __str__(self):
        if self.is_rational():
            return str(self.rational_value())
        parts = []
        for k, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}*z{self.m}^{k}" if k else str(c))
        return "+".join(parts).replace("+-", "-")

    def __repr__(self):
        return f"Cyclotomic({self.m}: {self})"


# ---------------------------------------------------------------------------
# exponents

Scalar = Union[int, Fraction, RatFunc, Cyclotomic]


@dataclass(frozen=True)
class Exponent:
    """The exponent ``a + b*l^-1`` for a formal level ``l``."""

    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @staticmethod
    def _coerce(x):
        if isinstance(x, Exponent):
            return x
        if isinstance(x, (int, Fraction)):
            return Exponent(Fraction(x))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Exponent(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Exponent(-self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Exponent(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Exponent(o.a - self.a, o.b - self.b)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            return None
        if o.b != self.b:
            raise ScalarError("formal exponents with different l^-1 parts are not comparable")
        return self.a - o.a

    def __lt__(self, other):
        d = self._cmp(other)
        return NotImplemented if d is None else d < 0

    def __le__(self, other):
        d = self._cmp(other)
        return NotImplemented if d is None else d <= 0

    def __gt__(self, other):
        d = self._cmp(other)
        return NotImplemented if d is None else d > 0

    def __ge__(self, other):
        d = self._cmp(other)
        return NotImplemented if d is None else d >= 0

    def collapse(self):
        """Return a plain Fraction when the l^-1 part vanishes."""
        return self.a if self.b == 0 else self

    def value(self, ell):
        """Scalar value for a concrete or formal level."""
        return self.a + self.b / ell if self.b else self.a

    def __str__(self):
        return format_exponent(self)

    def __repr__(self):
        return f"Exponent({self})"


def is_integral(e) -> bool:
    if isinstance(e, int):
        return True
    if isinstance(e, Fraction):
        return e.denominator == 1
    if isinstance(e, Exponent):
        return e.b == 0 and e.a.denominator == 1
    raise TypeError(f"not an exponent: {e!r}")


def int_offset(e, base) -> int:
    """The integer ``e - base``; raises if the two lie in different Z-cosets."""
    d = e - base
    if not is_integral(d):
        raise ScalarError(f"exponents {e} and {base} lie in different Z-cosets")
    if isinstance(d, Exponent):
        return int(d.a)
    return int(d)


def over_ell(c, ell):
    """The exponent c/l, kept symbolic when the level is formal."""
    c = Fraction(c)
    if isinstance(ell, RatFunc):
        if ell.is_constant():
            return c / ell.constant_value()
        return Exponent(0, c).collapse()
    return c / ell


def _exp_scalar(e):
    if isinstance(e, Exponent):
        return e.value(ELL) if e.b else e.a
    return e


def binom(e, i: int):
    """Generalized binomial coefficient e(e-1)...(e-i+1)/i!."""
    if i < 0:
        raise ScalarError("binomial index must be nonnegative")
    if i == 0:
        return Fraction(1)
    x = _exp_scalar(e)
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction) and x.denominator == 1:
        n = int(x)
        if n >= 0:
            return Fraction(math.comb(n, i)) if i <= n else Fraction(0)
        return Fraction((-1) ** i * math.comb(-n + i - 1, i))
    acc = Fraction(1)
    for j in range(i):
        acc = acc * (x - j)
    return acc / math.factorial(i)


def exponent_residue(e, modulus: int = 1):
    """Class of e in Q/Z or Q/2Z, as the representative in [0, modulus)."""
    if modulus not in (1, 2):
        raise ScalarError("modulus must be 1 or 2")
    if isinstance(e, Exponent):
        if e.b != 0:
            raise ScalarError("residue undefined in formal mode")
        e = e.a
    e = Fraction(e)
    return e - modulus * math.floor(e / modulus)


def phase(r, allow_cyclotomic: bool = True):
    """exp(pi*i*r) for rational r.

    Integral r gives +-1 as a Fraction; otherwise a Cyclotomic number, or a
    ScalarError when cyclotomic scalars are disabled.
    """
    if isinstance(r, Exponent):
        if r.b != 0:
            raise ScalarError("phase of a formal exponent is undefined")
        r = r.a
    r = Fraction(r)
    if r.denominator == 1:
        return Fraction(-1) ** int(r)
    if not allow_cyclotomic:
        raise ScalarError("cyclotomic mode required but disabled")
    m = r.denominator
    return Cyclotomic.zeta_power(m, int(r * m))


# ---------------------------------------------------------------------------
# text encodings

def _eval_ast(node):
    if isinstance(node, ast.Expression):
        return _eval_ast(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Fraction(node.value)
    if isinstance(node, ast.Name) and node.id in ("l", "ell"):
        return ELL
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_ast(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _eval_ast(node.left)
            ex = _eval_ast(node.right)
            if not (isinstance(ex, Fraction) and ex.denominator == 1):
                raise ScalarError("only integer powers are allowed")
            return base ** int(ex)
        left, right = _eval_ast(node.left), _eval_ast(node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if isinstance(left, Fraction) and isinstance(right, Fraction):
                return left / right
            return RatFunc._coerce(left) / right
    raise ScalarError("unsupported token in scalar expression")


def parse_scalar(text: str):
    """Parse "p/q" or a rational function in l such as "(3*l)/(l+2)"."""
    if not isinstance(text, str):
        if isinstance(text, (int, Fraction)):
            return Fraction(text)
        raise ScalarError(f"expected a string scalar, got {text!r}")
    s = text.strip().replace("ℓ", "l").replace("^", "**")
    try:
        return Fraction(s)
    except ValueError:
        pass
    try:
        tree = ast.parse(s, mode="eval")
    except SyntaxError as exc:
        raise ScalarError(f"cannot parse scalar {text!r}") from exc
    value = _eval_ast(tree)
    if isinstance(value, RatFunc) and value.is_constant():
        return value.constant_value()
    return value


def format_scalar(x) -> str:
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, RatFunc):
        if x.is_constant():
            return str(x.constant_value())
        return str(x)
    if isinstance(x, Cyclotomic):
        return str(x)
    raise TypeError(f"not a scalar: {x!r}")


def format_exponent(e) -> str:
    if isinstance(e, Exponent):
        if e.b == 0:
            return str(e.a)
        return f"{e.a}+{e.b}*invl" if e.b >= 0 else f"{e.a}-{-e.b}*invl"
    return str(Fraction(e))


def parse_exponent(text: str):
    s = text.strip().replace(" ", "")
    if "invl" not in s:
        return Fraction(s)
    head, _, _ = s.rpartition("*invl")
    # split head into a and b at the last +/- not at position 0
    for k in range(len(head) - 1, 0, -1):
        if head[k] in "+-" and head[k - 1] not in "/e":
            a, b = head[:k], head[k:]
            return Exponent(Fraction(a), Fraction(b.lstrip("+"))).collapse()
    return Exponent(0, Fraction(head)).collapse()


def parse_level(text):
    """Level string: "p/q" or "formal"."""
    if isinstance(text, str) and text.strip() == "formal":
        return ELL
    x = parse_scalar(text)
    if x == 0:
        raise ScalarError("level must be nonzero")
    return x


def specialize(x, ell):
    """Evaluate a formal-level scalar or exponent at a concrete level."""
    if isinstance(x, RatFunc):
        return x.evaluate(ell)
    if isinstance(x, Exponent):
        return x.a + x.b / Fraction(ell)
    return x
