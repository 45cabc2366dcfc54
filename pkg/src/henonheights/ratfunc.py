"""Elements of Q(t) as reduced quotients of :class:`UniPoly`."""

from fractions import Fraction

from .unipoly import ONE, ZERO, UniPoly, poly_gcd


class RatFunc:
    """Reduced fraction ``num/den`` with ``den`` monic and ``gcd(num, den) = 1``."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None, *, _reduced=False):
        num = _as_poly(num)
        if den is None:
            self.num, self.den = num, ONE
            self._hash = None
            return
        den = _as_poly(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if not num:
                den = ONE
            elif not den.is_constant():
                g = poly_gcd(num, den)
                if not g.is_one():
                    num = num.exquo(g)
                    den = den.exquo(g)
            lc = den.lc
            if lc != 1:
                num = num * (1 / lc)
                den = den * (1 / lc)
        self.num, self.den = num, den
        self._hash = None

    @classmethod
    def coerce(cls, v):
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, (int, Fraction, UniPoly)):
            return cls(v)
        raise TypeError(f"cannot coerce {type(v).__name__} to RatFunc")

    @classmethod
    def gen(cls):
        return cls(UniPoly.gen())

    # -- inspection ----------------------------------------------------------

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    def is_polynomial(self):
        return self.den.is_one()

    def is_constant(self):
        return self.den.is_one() and self.num.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.coeff(0)

    @property
    def height(self):
        """max(deg num, deg den); 0 for zero."""
        if not self.num:
            return 0
        return max(self.num.degree, self.den.degree)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, UniPoly)):
            return self == RatFunc(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self
            return RatFunc(self.num + self.den * other, self.den, _reduced=True)
        if isinstance(other, UniPoly):
            other = RatFunc(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        b, d = self.den, other.den
        if b.is_one() and d.is_one():
            return RatFunc(self.num + other.num)
        if b.is_one():
            return RatFunc(self.num * d + other.num, d, _reduced=True)
        if d.is_one():
            return RatFunc(self.num + other.num * b, b, _reduced=True)
        g = poly_gcd(b, d)
        if g.is_one():
            return RatFunc(self.num * d + other.num * b, b * d, _reduced=True)
        b1, d1 = b.exquo(g), d.exquo(g)
        num = self.num * d1 + other.num * b1
        if not num:
            return RatFunc()
        h = poly_gcd(num, g)
        if not h.is_one():
            num = num.exquo(h)
            g = g.exquo(h)
        return RatFunc(num, (b1 * d1 * g).monic(), _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, UniPoly)):
            other = RatFunc(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RatFunc.coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFunc()
            return RatFunc(self.num * other, self.den, _reduced=True)
        if isinstance(other, UniPoly):
            other = RatFunc(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if not self.num or not other.num:
            return RatFunc()
        a, b, c, d = self.num, self.den, other.num, other.den
        if b.is_one() and d.is_one():
            return RatFunc(a * c)
        g1 = poly_gcd(a, d) if not d.is_one() else ONE
        g2 = poly_gcd(c, b) if not b.is_one() else ONE
        if not g1.is_one():
            a, d = a.exquo(g1), d.exquo(g1)
        if not g2.is_one():
            c, b = c.exquo(g2), b.exquo(g2)
        den = b * d
        lc = den.lc
        if lc != 1:
            return RatFunc(a * c * (1 / lc), den * (1 / lc), _reduced=True)
        return RatFunc(a * c, den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num, _reduced=False)

    def __truediv__(self, other):
        other = RatFunc.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("integer exponents only")
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, _reduced=True)

    # -- evaluation ----------------------------------------------------------

    def __call__(self, t):
        """Evaluate at a rational (exact) or numeric value."""
        d = self.den(t)
        if not d:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(t) / d

    def evaluate_numeric(self, t):
        return self.num.evaluate_numeric(t) / self.den.evaluate_numeric(t)

    def to_str(self, var="t"):
        n = self.num.to_str(var)
        if self.den.is_one():
            return n
        d = self.den.to_str(var)
        if " " in n or "*" in n or "/" in n:
            n = f"({n})"
        if " " in d or "*" in d or "^" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"RatFunc({self.to_str()!r})"


def _as_poly(v):
    if isinstance(v, UniPoly):
        return v
    if isinstance(v, (int, Fraction)):
        return UniPoly((v,)) if v else ZERO
    raise TypeError(f"cannot use {type(v).__name__} as a polynomial")


RZERO = RatFunc()
RONE = RatFunc(1)
