"""Dense univariate polynomials over Q.

A :class:`UniPoly` stores an integer coefficient tuple (lowest power first)
together with one positive integer denominator, so ``c_0 + c_1 t + ...`` is
``(n_0 + n_1 t + ...) / den``.  The representation is canonical: no trailing
zero coefficients, ``den > 0`` and ``gcd(content, den) == 1``.  The zero
polynomial is ``((), 1)`` and its degree is ``-inf``.

Large products go through Kronecker substitution on GMP integers; gcds use a
heuristic integer gcd that is verified by exact division, with the
subresultant PRS as the fallback.
"""

import math
from fractions import Fraction
from numbers import Rational

import gmpy2

NEG_INF = float("-inf")

_KRONECKER_MIN = 24


# ---------------------------------------------------------------------------
# integer coefficient-list kernels (lowest power first, no trailing zeros)
# ---------------------------------------------------------------------------

def _trim(c):
    while c and not c[-1]:
        c.pop()
    return c


def _slot_bytes(bound):
    return (int(bound).bit_length() + 2 + 7) // 8


def _pack(c, nbytes):
    pos = b"".join((x if x > 0 else 0).to_bytes(nbytes, "little") for x in c)
    neg = b"".join((-x if x < 0 else 0).to_bytes(nbytes, "little") for x in c)
    return gmpy2.mpz(int.from_bytes(pos, "little")) - gmpy2.mpz(int.from_bytes(neg, "little"))


def _unpack(n, nbytes, m):
    """Balanced base-2^(8*nbytes) digits of ``n``; None if they do not fit in m slots."""
    half = 1 << (8 * nbytes - 1)
    offset = int.from_bytes((b"\x00" * (nbytes - 1) + b"\x80") * m, "little")
    total = int(n) + offset
    if total < 0:
        return None
    try:
        raw = total.to_bytes(nbytes * m, "little")
    except OverflowError:
        return None
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half for i in range(m)]


def _imul(a, b):
    if not a or not b:
        return []
    if min(len(a), len(b)) < _KRONECKER_MIN:
        r = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    r[i + j] += ai * bj
        return _trim(r)
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    nb = _slot_bytes(bound)
    prod = _pack(a, nb) * _pack(b, nb)
    return _trim(_unpack(prod, nb, len(a) + len(b) - 1))


def _iadd(a, b):
    if len(a) < len(b):
        a, b = b, a
    r = list(a)
    for i, x in enumerate(b):
        r[i] += x
    return _trim(r)


def _iscale(a, k):
    if not k:
        return []
    return [k * x for x in a]


def _content(c):
    return math.gcd(*c) if c else 0


def _primitive(c):
    g = _content(c)
    if g == 0:
        return []
    if c[-1] < 0:
        g = -g
    return [x // g for x in c] if g != 1 else list(c)


def _ieval(c, x):
    acc = gmpy2.mpz(0)
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def _iexquo_long(a, b):
    m = len(b)
    r = list(a)
    lc = b[-1]
    q = [0] * (len(a) - m + 1)
    for i in range(len(a) - m, -1, -1):
        t = r[i + m - 1]
        if t:
            qi, rem = divmod(t, lc)
            if rem:
                return None
            q[i] = qi
            for j in range(m):
                r[i + j] -= qi * b[j]
    if any(r[: m - 1]):
        return None
    return q


def _iexquo(a, b):
    """Exact quotient a/b in Z[x], or None when b does not divide a there."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if not a:
        return []
    if len(a) < len(b):
        return None
    if len(b) == 1:
        lc = b[0]
        if any(x % lc for x in a):
            return None
        return [x // lc for x in a]
    if len(b) < _KRONECKER_MIN or len(a) - len(b) < 8:
        return _iexquo_long(a, b)
    dq = len(a) - len(b)
    # Mignotte-type bound: |q_i| <= 2^deg(q) * ||a||_2
    abound = max(map(abs, a)) * (math.isqrt(len(a)) + 1)
    nb = _slot_bytes(abound << (dq + 1))
    qq, rr = divmod(_pack(a, nb), _pack(b, nb))
    if rr:
        return None
    # a true quotient fits the slots, so a failed check means b does not divide a
    q = _unpack(qq, nb, dq + 1)
    if q is None or _imul(q, b) != list(a):
        return None
    return q


def _iprem(a, b):
    """Pseudo-remainder of a by b: lc(b)^(deg a - deg b + 1) * a mod b."""
    m = len(b)
    lc = b[-1]
    r = list(a)
    if len(r) < m:
        return r
    for i in range(len(a) - m, -1, -1):
        t = r[i + m - 1]
        r = [lc * c for c in r[: i + m - 1]]
        if t:
            for j in range(m - 1):
                r[i + j] -= t * b[j]
    return _trim(r)


def _subresultant_gcd(f, g):
    """gcd of two primitive integer polynomials via the subresultant PRS."""
    if len(f) < len(g):
        f, g = g, f
    a, b = f, g
    gg = hh = 1
    while True:
        delta = len(a) - len(b)
        r = _iprem(a, b)
        if not r:
            return _primitive(b)
        if len(r) == 1:
            return [1]
        div = gg * hh ** delta
        a, b = b, [x // div for x in r]
        gg = a[-1]
        if delta == 1:
            hh = gg
        elif delta > 1:
            hh = gg ** delta // hh ** (delta - 1)


def _interpolate_int(h, x):
    half = x // 2
    out = []
    while h:
        d = h % x
        if d > half:
            d -= x
        out.append(int(d))
        h = (h - d) // x
    return _trim(out)


def _eval_pow2(c, nbytes):
    """c(2^(8 nbytes)) by splitting in halves; coefficients may exceed the base."""
    k = 8 * nbytes
    if len(c) <= 16:
        acc = gmpy2.mpz(0)
        for coef in reversed(c):
            acc = (acc << k) + coef
        return acc
    mid = len(c) // 2
    return _eval_pow2(c[:mid], nbytes) + (_eval_pow2(c[mid:], nbytes) << (k * mid))


def _interpolate_pow2(h, nbytes):
    if not h:
        return []
    m = (int(abs(h)).bit_length() + 8 * nbytes) // (8 * nbytes) + 1
    return _trim(_unpack(h, nbytes, m))


def _heu_gcd(f, g):
    """Heuristic gcd (evaluate at a large integer, lift the integer gcd back).

    The evaluation point is a power 2^(8k), so evaluation and interpolation
    are byte packing.
    """
    fn = max(map(abs, f))
    gn = max(map(abs, g))
    B = 2 * min(fn, gn) + 29
    x = max(min(B, 99 * math.isqrt(B)),
            2 * min(fn // abs(f[-1]), gn // abs(g[-1])) + 2)
    for _ in range(6):
        nb = (int(x).bit_length() + 8) // 8
        ff = _eval_pow2(f, nb)
        gv = _eval_pow2(g, nb)
        if ff and gv:
            h = gmpy2.gcd(ff, gv)
            cand = _primitive(_interpolate_pow2(h, nb))
            if cand and _iexquo(f, cand) is not None and _iexquo(g, cand) is not None:
                return cand
            for cof, poly, other in ((ff // h, f, g), (gv // h, g, f)):
                cp = _interpolate_pow2(cof, nb)
                if not cp:
                    continue
                hq = _iexquo(poly, cp)
                if hq:
                    hq = _primitive(hq)
                    if _iexquo(other, hq) is not None:
                        return hq
        x = 73794 * x * math.isqrt(math.isqrt(x)) // 27011
    return None


def _gcd_primitive(f, g):
    if len(f) == 1 or len(g) == 1:
        return [1]
    h = _heu_gcd(f, g)
    if h is None:
        h = _subresultant_gcd(f, g)
    return h


# ---------------------------------------------------------------------------
# generic dense polynomials over an integral domain (lists, lowest first)
# ---------------------------------------------------------------------------

def _gtrim(c):
    while c and not c[-1]:
        c.pop()
    return c


def prem(a, b):
    """Pseudo-remainder of coefficient lists over any commutative ring."""
    m = len(b)
    lc = b[-1]
    r = list(a)
    if len(r) < m:
        return _gtrim(r)
    for i in range(len(a) - m, -1, -1):
        t = r[i + m - 1]
        r = [lc * c for c in r[: i + m - 1]]
        if t:
            for j in range(m - 1):
                r[i + j] = r[i + j] - t * b[j]
    return _gtrim(r)


def resultant(a, b, exquo=None):
    """Resultant of two coefficient lists via the subresultant algorithm.

    Coefficients may live in any integral domain whose elements support
    ``+ - *`` and ``**``; ``exquo(p, q)`` must return the exact quotient
    (defaults to ``p // q``).  Returns a domain element (or the int 0).
    """
    if exquo is None:
        exquo = lambda p, q: p // q  # noqa: E731
    a = _gtrim(list(a))
    b = _gtrim(list(b))
    if not a or not b:
        return 0
    s = 1
    if len(a) < len(b):
        a, b = b, a
        if (len(a) - 1) % 2 and (len(b) - 1) % 2:
            s = -s
    if len(b) == 1:
        return b[0] ** (len(a) - 1) * s
    g = h = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = prem(a, b)
        if not r:
            return 0
        div = g * h ** delta
        a = b
        b = [exquo(c, div) for c in r]
        g = a[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = exquo(g ** delta, h ** (delta - 1))
        if len(b) == 1:
            break
    da = len(a) - 1
    if da == 1:
        res = b[0]
    else:
        res = exquo(b[0] ** da, h ** (da - 1))
    return res * s


# ---------------------------------------------------------------------------
# UniPoly
# ---------------------------------------------------------------------------

def _as_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        raise TypeError("floating-point coefficients are not exact")
    raise TypeError(f"cannot use {type(v).__name__} as a rational coefficient")


class UniPoly:
    """Polynomial in one variable with rational coefficients."""

    __slots__ = ("_c", "_den", "_hash")

    def __init__(self, coeffs=()):
        fr = [_as_fraction(v) for v in coeffs]
        den = 1
        for q in fr:
            den = den * q.denominator // math.gcd(den, q.denominator)
        ints = [q.numerator * (den // q.denominator) for q in fr]
        self._set(ints, den)

    def _set(self, ints, den):
        ints = _trim(list(ints))
        if not ints:
            self._c, self._den = (), 1
        else:
            if den < 0:
                ints = [-x for x in ints]
                den = -den
            g = math.gcd(_content(ints), den)
            if g != 1:
                ints = [x // g for x in ints]
                den //= g
            self._c, self._den = tuple(ints), den
        self._hash = None

    @classmethod
    def _from_ints(cls, ints, den=1):
        obj = cls.__new__(cls)
        obj._set(ints, den)
        return obj

    @classmethod
    def constant(cls, value):
        return cls((value,))

    @classmethod
    def monomial(cls, degree, coeff=1):
        return cls([0] * degree + [coeff])

    @classmethod
    def gen(cls):
        """The variable itself."""
        return cls._from_ints([0, 1])

    # -- inspection ----------------------------------------------------------

    @property
    def coeffs(self):
        return tuple(Fraction(c, self._den) for c in self._c)

    @property
    def int_coeffs(self):
        """Integer numerator coefficients; the polynomial is this over ``den``."""
        return self._c

    @property
    def den(self):
        return self._den

    @property
    def degree(self):
        return len(self._c) - 1 if self._c else NEG_INF

    def __len__(self):
        return len(self._c)

    @property
    def lc(self):
        return Fraction(self._c[-1], self._den) if self._c else Fraction(0)

    def coeff(self, k):
        if 0 <= k < len(self._c):
            return Fraction(self._c[k], self._den)
        return Fraction(0)

    def is_zero(self):
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def is_constant(self):
        return len(self._c) <= 1

    def is_one(self):
        return self._c == (1,) and self._den == 1

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self._c == other._c and self._den == other._den
        if isinstance(other, (int, Fraction)):
            return self == UniPoly((other,))
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._c, self._den))
        return self._hash

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly((other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._c:
            return self
        if not self._c:
            return o
        if self._den == o._den:
            return UniPoly._from_ints(_iadd(list(self._c), o._c), self._den)
        g = math.gcd(self._den, o._den)
        ma, mb = o._den // g, self._den // g
        return UniPoly._from_ints(_iadd(_iscale(self._c, ma), _iscale(o._c, mb)), self._den * ma)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly._from_ints([-x for x in self._c], self._den)

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
        if isinstance(other, int):
            return UniPoly._from_ints(_iscale(self._c, other), self._den)
        if isinstance(other, Fraction):
            return UniPoly._from_ints(_iscale(self._c, other.numerator), self._den * other.denominator)
        if not isinstance(other, UniPoly):
            return NotImplemented
        return UniPoly._from_ints(_imul(self._c, other._c), self._den * other._den)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = UniPoly._from_ints([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._c:
            raise ZeroDivisionError("polynomial division by zero")
        if len(self._c) < len(o._c):
            return UniPoly(), self
        r = list(self.coeffs)
        b = o.coeffs
        lc = b[-1]
        m = len(b)
        q = [Fraction(0)] * (len(r) - m + 1)
        for i in range(len(r) - m, -1, -1):
            t = r[i + m - 1]
            if t:
                qi = t / lc
                q[i] = qi
                for j in range(m):
                    r[i + j] -= qi * b[j]
        return UniPoly(q), UniPoly(r[: m - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exquo(self, other):
        """Exact quotient; raises ``ArithmeticError`` if ``other`` does not divide."""
        o = self._coerce(other)
        if o is None:
            raise TypeError("exquo needs a polynomial or rational")
        if not o._c:
            raise ZeroDivisionError("polynomial division by zero")
        if not self._c:
            return self
        cb = _content(o._c)
        if o._c[-1] < 0:
            cb = -cb
        bprim = [x // cb for x in o._c] if cb != 1 else list(o._c)
        q = _iexquo(list(self._c), bprim)
        if q is None:
            raise ArithmeticError("inexact polynomial division")
        # self/o = (a/da) / ((cb/db) * bprim) = (a/bprim) * db / (da*cb)
        return UniPoly._from_ints(_iscale(q, o._den), self._den * cb)

    def divides(self, other):
        try:
            o = self._coerce(other)
            o.exquo(self)
        except ArithmeticError:
            return False
        return True

    def monic(self):
        if not self._c:
            return self
        return UniPoly._from_ints(list(self._c), self._c[-1])

    def primitive(self):
        """Return (content, primitive integer coefficient list) with self = content * prim."""
        if not self._c:
            return Fraction(0), []
        g = _content(self._c)
        if self._c[-1] < 0:
            g = -g
        return Fraction(g, self._den), [x // g for x in self._c]

    def derivative(self):
        return UniPoly._from_ints([i * c for i, c in enumerate(self._c)][1:], self._den)

    def truncate(self, n):
        """Reduce modulo t^n."""
        return UniPoly._from_ints(list(self._c[:n]), self._den)

    def compose(self, other):
        """self(other(t))."""
        result = UniPoly()
        for c in reversed(self.coeffs):
            result = result * other + c
        return result

    def shift(self, a):
        """self(t + a) for a rational a."""
        a = _as_fraction(a)
        c = list(self.coeffs)
        n = len(c)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] += a * c[j + 1]
        return UniPoly(c)

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            num = 0
            for c in reversed(self._c):
                num = num * x + c
            return Fraction(num) / self._den
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def float_coeffs(self):
        """Coefficients as floats, highest power first (numpy.polyval order)."""
        return [float(c) for c in reversed(self.coeffs)]

    def evaluate_numeric(self, x):
        """Horner evaluation at a float/complex scalar or numpy array."""
        acc = 0.0
        for c in self.float_coeffs():
            acc = acc * x + c
        return acc

    # -- printing ------------------------------------------------------------

    def to_str(self, var="t"):
        if not self._c:
            return "0"
        parts = []
        for k in range(len(self._c) - 1, -1, -1):
            c = Fraction(self._c[k], self._den)
            if not c:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"UniPoly({self.to_str()!r})"


ZERO = UniPoly()
ONE = UniPoly._from_ints([1])
T = UniPoly.gen()


def poly_gcd(a, b):
    """Monic gcd of two polynomials over Q (gcd(0, 0) = 0)."""
    if not a._c:
        return b.monic()
    if not b._c:
        return a.monic()
    if len(a._c) == 1 or len(b._c) == 1:
        return ONE
    _, pa = a.primitive()
    _, pb = b.primitive()
    if pa == pb:
        return a.monic()
    return UniPoly._from_ints(_gcd_primitive(pa, pb)).monic()


def subresultant_gcd(a, b):
    """Monic gcd computed only through the subresultant PRS (reference path)."""
    if not a._c:
        return b.monic()
    if not b._c:
        return a.monic()
    if len(a._c) == 1 or len(b._c) == 1:
        return ONE
    _, pa = a.primitive()
    _, pb = b.primitive()
    return UniPoly._from_ints(_subresultant_gcd(pa, pb)).monic()


def poly_lcm(a, b):
    if not a._c or not b._c:
        return ZERO
    return (a * b.exquo(poly_gcd(a, b))).monic()


def poly_resultant(a, b):
    """Resultant over Q of two UniPolys (a Fraction)."""
    if not a._c or not b._c:
        return Fraction(0)
    ca, pa = a.primitive()
    cb, pb = b.primitive()
    r = resultant(pa, pb)
    return Fraction(int(r)) * ca ** (len(pb) - 1) * cb ** (len(pa) - 1)


def extended_gcd(a, b):
    """Return (g, s, t) with s*a + t*b = g, g monic (plain Euclid over Q)."""
    r0, r1 = a, b
    s0, s1 = ONE, ZERO
    t0, t1 = ZERO, ONE
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return r0, s0, t0
    lc = r0.lc
    return r0 * (1 / lc), s0 * (1 / lc), t0 * (1 / lc)


def interpolate(xs, ys):
    """Unique polynomial of degree < len(xs) through the rational points (xs, ys)."""
    xs = [_as_fraction(x) for x in xs]
    coef = [_as_fraction(y) for y in ys]
    n = len(xs)
    if len(set(xs)) != n:
        raise ValueError("interpolation nodes must be distinct")
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    p = UniPoly((coef[-1],)) if n else ZERO
    for i in range(n - 2, -1, -1):
        p = p * UniPoly((-xs[i], 1)) + coef[i]
    return p


def squarefree_part(a):
    """Monic product of the distinct irreducible factors of a."""
    if a.is_constant():
        return ONE if a else ZERO
    return a.exquo(poly_gcd(a, a.derivative())).monic()
