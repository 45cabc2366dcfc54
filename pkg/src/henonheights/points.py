"""Points of the affine plane over Q(t) and their naive height."""

from dataclasses import dataclass
from fractions import Fraction

from .ratfunc import RatFunc
from .unipoly import UniPoly, poly_gcd


@dataclass(frozen=True)
class PointK:
    x: RatFunc
    y: RatFunc

    def __post_init__(self):
        object.__setattr__(self, "x", RatFunc.coerce(self.x))
        object.__setattr__(self, "y", RatFunc.coerce(self.y))

    def is_constant(self):
        return self.x.is_constant() and self.y.is_constant()

    def evaluate(self, lam):
        return (self.x(lam), self.y(lam))

    def evaluate_numeric(self, lam):
        return (self.x.evaluate_numeric(lam), self.y.evaluate_numeric(lam))

    def to_strs(self, var="t"):
        return (self.x.to_str(var), self.y.to_str(var))

    def __str__(self):
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class ProjPointK:
    """[X:Y:W] with coprime polynomial coordinates."""

    X: UniPoly
    Y: UniPoly
    W: UniPoly

    def __iter__(self):
        return iter((self.X, self.Y, self.W))

    @property
    def height(self):
        return max(int(c.degree) for c in self if c)


def homogenize(z):
    dx, dy = z.x.den, z.y.den
    g = poly_gcd(dx, dy)
    L = dx * dy.exquo(g)
    X = z.x.num * L.exquo(dx)
    Y = z.y.num * L.exquo(dy)
    W = L
    for c in (X, Y, W):
        if c:
            lc = c.lc
            break
    if lc != 1:
        inv = Fraction(1) / lc
        X, Y, W = X * inv, Y * inv, W * inv
    return ProjPointK(X, Y, W)


def naive_height(z):
    """Max degree of the coprime homogeneous coordinates of z."""
    dx, dy = z.x.den, z.y.den
    if dx.is_one() and dy.is_one():
        return max(z.x.num.degree if z.x else 0, z.y.num.degree if z.y else 0, 0)
    dl = dx.degree + dy.degree - poly_gcd(dx, dy).degree
    h = dl
    if z.x:
        h = max(h, z.x.num.degree + dl - dx.degree)
    if z.y:
        h = max(h, z.y.num.degree + dl - dy.degree)
    return int(h)
