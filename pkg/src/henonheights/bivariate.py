"""Sparse polynomials in x, y with coefficients in Q(t)."""

from fractions import Fraction

from .ratfunc import RONE, RatFunc
from .unipoly import UniPoly


def _coeff(v):
    if isinstance(v, RatFunc):
        return v
    return RatFunc.coerce(v)


class BivarPoly:
    """Map ``(i, j) -> coefficient of x^i y^j``; zero coefficients are never stored."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for k, v in terms.items():
                c = _coeff(v)
                if c:
                    clean[(int(k[0]), int(k[1]))] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def x(cls):
        return cls._raw({(1, 0): RONE})

    @classmethod
    def y(cls):
        return cls._raw({(0, 1): RONE})

    @classmethod
    def poly_in_y(cls, coeffs):
        """sum coeffs[j] * y^j."""
        return cls({(0, j): c for j, c in enumerate(coeffs)})

    # -- inspection ----------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or set(self.terms) == {(0, 0)}

    def constant_term(self):
        return self.terms.get((0, 0), RatFunc())

    def coefficient(self, i, j):
        return self.terms.get((i, j), RatFunc())

    @property
    def total_degree(self):
        return max((i + j for i, j in self.terms), default=float("-inf"))

    @property
    def deg_x(self):
        return max((i for i, _ in self.terms), default=float("-inf"))

    @property
    def deg_y(self):
        return max((j for _, j in self.terms), default=float("-inf"))

    def top_form(self):
        """Homogeneous component of top total degree."""
        d = self.total_degree
        return BivarPoly._raw({k: v for k, v in self.terms.items() if k[0] + k[1] == d})

    def is_monomial_form(self, i, j):
        return set(self.terms) == {(i, j)}

    def coeffs_in_x(self):
        """List indexed by x-power of {y-power: coefficient} dicts."""
        if not self.terms:
            return []
        out = [dict() for _ in range(self.deg_x + 1)]
        for (i, j), c in self.terms.items():
            out[i][j] = c
        return out

    def coefficient_functions(self):
        return list(self.terms.values())

    def __eq__(self, other):
        if isinstance(other, BivarPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, UniPoly, RatFunc)):
            return self == BivarPoly.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _lift(other):
        if isinstance(other, BivarPoly):
            return other
        if isinstance(other, (int, Fraction, UniPoly, RatFunc)):
            return BivarPoly.const(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in o.terms.items():
            if k in out:
                s = out[k] + v
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = v
        return BivarPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly._raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, UniPoly, RatFunc)):
            c = _coeff(other)
            if not c:
                return BivarPoly()
            return BivarPoly._raw({k: v * c for k, v in self.terms.items()})
        if not isinstance(other, BivarPoly):
            return NotImplemented
        out = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                p = c1 * c2
                if k in out:
                    out[k] = out[k] + p
                else:
                    out[k] = p
        return BivarPoly._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = BivarPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def diff_x(self):
        return BivarPoly._raw({(i - 1, j): v * i for (i, j), v in self.terms.items() if i})

    def diff_y(self):
        return BivarPoly._raw({(i, j - 1): v * j for (i, j), v in self.terms.items() if j})

    def substitute(self, u, v):
        """self(u, v) where u, v are BivarPolys or field elements."""
        if not self.terms:
            return u * 0 if isinstance(u, BivarPoly) else RatFunc()
        maxi = self.deg_x
        maxj = self.deg_y
        one = BivarPoly.const(1) if isinstance(u, BivarPoly) or isinstance(v, BivarPoly) else RONE
        upow = [one]
        for _ in range(maxi):
            upow.append(upow[-1] * u)
        vpow = [one]
        for _ in range(maxj):
            vpow.append(vpow[-1] * v)
        acc = one * 0
        for (i, j), c in sorted(self.terms.items()):
            acc = acc + upow[i] * vpow[j] * c
        return acc

    def __call__(self, u, v):
        return self.substitute(u, v)

    def specialize(self, lam):
        """Numeric coefficient dict at the parameter value ``lam``."""
        return {k: c.evaluate_numeric(lam) for k, c in self.terms.items()}

    def to_str(self, var="t"):
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, key=lambda k: (-(k[0] + k[1]), -k[0])):
            c = self.terms[(i, j)]
            mono = "*".join(
                s for s in (
                    "" if i == 0 else ("x" if i == 1 else f"x^{i}"),
                    "" if j == 0 else ("y" if j == 1 else f"y^{j}"),
                ) if s
            )
            cs = c.to_str(var)
            if not mono:
                parts.append(f"({cs})" if (" " in cs) else cs)
            elif c == RONE:
                parts.append(mono)
            elif c == -RONE:
                parts.append(f"-{mono}")
            else:
                parts.append(f"({cs})*{mono}" if (" " in cs or "/" in cs) else f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"BivarPoly({self.to_str()!r})"


X = BivarPoly.x()
Y = BivarPoly.y()
