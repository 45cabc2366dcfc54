"""Algebraic families of regular polynomial automorphisms given by factor lists.

A family is a list of elementary factors applied in list order, so
``[F1, F2, F3]`` is the map ``F3 ∘ F2 ∘ F1``.  A Hénon factor is
``(x, y) -> (a*y, x + p(y))`` with ``deg p >= 2``; an affine factor is
``z -> M z + v``.  Both carry an exact inverse, which makes the composed map
invertible by construction.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bivariate import BivarPoly
from .errors import BadParameter, ConfigError, NotRegular, ParseError
from .parsing import parse_poly_in_y, parse_ratfunc
from .points import PointK
from .ratfunc import RONE, RZERO, RatFunc
from .unipoly import ONE, UniPoly, poly_lcm, squarefree_part

BAD_PARAM_TOL = 1e-9


def _horner(coeffs, y):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * y + c
    return acc


@dataclass(frozen=True)
class HenonFactor:
    a: RatFunc
    p: tuple

    def __post_init__(self):
        a = RatFunc.coerce(self.a)
        p = [RatFunc.coerce(c) for c in self.p]
        while p and not p[-1]:
            p.pop()
        if not a:
            raise NotRegular("henon-factor", "coefficient a must be nonzero")
        if len(p) - 1 < 2:
            raise NotRegular("henon-factor", "p must have degree at least 2 in y")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "p", tuple(p))

    @property
    def degree(self):
        return len(self.p) - 1

    def apply(self, x, y):
        return (y * self.a, x + _horner(self.p, y))

    def apply_inverse(self, u, v):
        y = u * self.a.inverse()
        return (v - _horner(self.p, y), y)

    def jacobian(self, x, y):
        dp = [c * k for k, c in enumerate(self.p)][1:]
        return ((RZERO, self.a), (RONE, _horner(dp, y)))

    def coefficient_functions(self):
        return [self.a, *self.p]


@dataclass(frozen=True)
class AffineFactor:
    matrix: tuple
    translation: tuple = (RZERO, RZERO)

    def __post_init__(self):
        m = tuple(tuple(RatFunc.coerce(c) for c in row) for row in self.matrix)
        if len(m) != 2 or any(len(r) != 2 for r in m):
            raise ConfigError("affine matrix must be 2x2")
        t = tuple(RatFunc.coerce(c) for c in self.translation)
        if len(t) != 2:
            raise ConfigError("affine translation must have 2 entries")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "translation", t)
        if not self.det:
            raise NotRegular("affine-factor", "matrix determinant is zero")

    degree = 1

    @property
    def det(self):
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def apply(self, x, y):
        (a, b), (c, d) = self.matrix
        return (x * a + y * b + self.translation[0], x * c + y * d + self.translation[1])

    def apply_inverse(self, u, v):
        (a, b), (c, d) = self.matrix
        inv = self.det.inverse()
        u = u - self.translation[0]
        v = v - self.translation[1]
        return ((u * d - v * b) * inv, (v * a - u * c) * inv)

    def jacobian(self, x, y):
        return self.matrix

    def coefficient_functions(self):
        return [c for row in self.matrix for c in row] + list(self.translation)


def _matmul(A, B):
    return tuple(
        tuple(A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)) for i in range(2)
    )


@dataclass
class BadParams:
    """Finite bad parameter locus: zeros of ``poly`` plus possibly infinity."""

    poly: UniPoly
    roots: np.ndarray
    infinity: bool

    def near(self, lam, tol=BAD_PARAM_TOL):
        lam = complex(lam)
        if self.roots.size and np.min(np.abs(self.roots - lam)) <= tol:
            return True
        if self.poly.degree >= 1:
            return abs(self.poly.evaluate_numeric(lam)) == 0.0
        return False

    def distance(self, lam):
        """Elementwise distance to the nearest finite bad parameter (inf if none)."""
        lam = np.asarray(lam, dtype=complex)
        if not self.roots.size:
            return np.full(lam.shape, np.inf)
        return np.min(np.abs(lam[..., None] - self.roots), axis=-1)

    def to_dict(self, var="t"):
        return {
            "polynomial": self.poly.to_str(var),
            "roots": [[float(r.real), float(r.imag)] for r in self.roots],
            "infinity": self.infinity,
        }


class RegularFamily:
    """Composition of elementary factors over Q(t)."""

    def __init__(self, factors, param="t"):
        factors = list(factors)
        if not factors:
            raise NotRegular("empty-factor-list", "at least one Hénon factor is required")
        for f in factors:
            if not isinstance(f, (HenonFactor, AffineFactor)):
                raise TypeError(f"unsupported factor {f!r}")
        self.factors = tuple(factors)
        self.param = param
        self.d = math.prod(f.degree for f in factors)
        if self.d < 2:
            raise NotRegular("degree", f"composed degree {self.d} < 2 (no Hénon factor)")
        self._forward = None
        self._inverse = None
        self._bad = None

    def __repr__(self):
        return f"RegularFamily(d={self.d}, factors={len(self.factors)})"

    # -- exact maps ----------------------------------------------------------

    def apply_xy(self, x, y):
        for f in self.factors:
            x, y = f.apply(x, y)
        return x, y

    def apply_inverse_xy(self, x, y):
        for f in reversed(self.factors):
            x, y = f.apply_inverse(x, y)
        return x, y

    def apply(self, z):
        return PointK(*self.apply_xy(z.x, z.y))

    def apply_inverse(self, z):
        return PointK(*self.apply_inverse_xy(z.x, z.y))

    def forward_map(self):
        if self._forward is None:
            self._forward = self.apply_xy(BivarPoly.x(), BivarPoly.y())
        return self._forward

    def inverse_map(self):
        if self._inverse is None:
            self._inverse = self.apply_inverse_xy(BivarPoly.x(), BivarPoly.y())
        return self._inverse

    def iterate_map(self, n):
        """Symbolic (P_n, Q_n) with f^n = (P_n, Q_n)."""
        u, v = BivarPoly.x(), BivarPoly.y()
        P, Q = self.forward_map()
        for _ in range(n):
            u, v = P.substitute(u, v), Q.substitute(u, v)
        return u, v

    def jacobian(self, z):
        """Jacobian matrix of f at z as nested tuples of RatFunc."""
        x, y = z.x, z.y
        J = ((RONE, RZERO), (RZERO, RONE))
        for f in self.factors:
            J = _matmul(f.jacobian(x, y), J)
            x, y = f.apply(x, y)
        return J

    def jacobian_det(self):
        det = RONE
        for f in self.factors:
            if isinstance(f, HenonFactor):
                det = det * (-f.a)
            else:
                det = det * f.det
        return det

    def coefficient_functions(self):
        return [c for f in self.factors for c in f.coefficient_functions()]

    def is_constant(self):
        return all(c.is_constant() for c in self.coefficient_functions())

    # -- parameter locus -----------------------------------------------------

    def bad_params(self):
        if self._bad is None:
            polys = []
            for f in self.factors:
                if isinstance(f, HenonFactor):
                    crit = [f.a, f.p[-1]]
                    dens = [c.den for c in f.p]
                else:
                    crit = [f.det]
                    dens = [c.den for c in f.coefficient_functions()]
                for c in crit:
                    polys += [c.num, c.den]
                polys += dens
            acc = ONE
            for q in polys:
                if q.degree >= 1:
                    acc = poly_lcm(acc, squarefree_part(q))
            acc = squarefree_part(acc) if acc.degree >= 1 else ONE
            roots = np.roots([complex(c) for c in acc.float_coeffs()]) if acc.degree >= 1 else np.zeros(0, complex)
            infinity = not self.is_constant()
            self._bad = BadParams(acc, np.asarray(roots, dtype=complex), infinity)
        return self._bad


@dataclass
class ValidationReport:
    d: int
    bad_params: BadParams
    top_coefficient: RatFunc
    inverse_top_coefficient: RatFunc
    conditions: list = field(default_factory=list)

    def to_dict(self, var="t"):
        return {
            "valid": True,
            "d": self.d,
            "top_coefficient": self.top_coefficient.to_str(var),
            "inverse_top_coefficient": self.inverse_top_coefficient.to_str(var),
            "bad_params": self.bad_params.to_dict(var),
            "conditions": self.conditions,
        }


def compose(factors, param="t"):
    return RegularFamily(factors, param)


def validate_regular(F):
    """Check deg p < deg q = deg_y q with top form c*y^d, and the mirror for the inverse."""
    d = F.d
    P, Q = F.forward_map()
    checks = []
    if Q.total_degree != d:
        raise NotRegular("degree", f"deg q = {Q.total_degree} but factor degrees multiply to {d}")
    if not P.total_degree < Q.total_degree:
        raise NotRegular("deg p < deg q", f"deg p = {P.total_degree}, deg q = {Q.total_degree}")
    checks.append("deg p < deg q")
    if Q.deg_y != Q.total_degree:
        raise NotRegular("deg q = deg_y q", f"deg_y q = {Q.deg_y}")
    top = Q.top_form()
    if not top.is_monomial_form(0, d):
        raise NotRegular("top form of q", f"top-degree part {top} is not a multiple of y^{d}")
    checks.append("deg q = deg_y q")
    checks.append("I+ = [1:0:0]")
    Pi, Qi = F.inverse_map()
    if Pi.total_degree != d:
        raise NotRegular("inverse degree", f"deg of inverse first coordinate is {Pi.total_degree}")
    if not Qi.total_degree < Pi.total_degree:
        raise NotRegular("inverse: deg q- < deg p-", "")
    itop = Pi.top_form()
    if not itop.is_monomial_form(d, 0):
        raise NotRegular("inverse top form", f"top-degree part {itop} is not a multiple of x^{d}")
    checks.append("I- = [0:1:0]")
    return ValidationReport(
        d=d,
        bad_params=F.bad_params(),
        top_coefficient=top.coefficient(0, d),
        inverse_top_coefficient=itop.coefficient(d, 0),
        conditions=checks,
    )


# ---------------------------------------------------------------------------
# numeric specialization
# ---------------------------------------------------------------------------

class NumericMap:
    """Double-precision f_λ and its inverse for a scalar or an array of λ.

    Coefficients are complex scalars or arrays broadcasting against the
    point coordinates; :meth:`take` restricts array coefficients to a subset.
    """

    def __init__(self, factors, d, lam):
        self.factors = factors
        self.d = d
        self.lam = lam

    @classmethod
    def from_family(cls, F, lam):
        lam_arr = np.asarray(lam, dtype=complex)
        scalar = lam_arr.ndim == 0

        def ev(c):
            if c.is_constant():
                return complex(c.constant_value())
            v = c.evaluate_numeric(lam_arr)
            return complex(v) if scalar else np.asarray(v, dtype=complex)

        out = []
        for f in F.factors:
            if isinstance(f, HenonFactor):
                out.append(("henon", ev(f.a), [ev(c) for c in f.p]))
            else:
                (a, b), (c, d) = f.matrix
                out.append(("affine", [ev(a), ev(b), ev(c), ev(d)], [ev(t) for t in f.translation]))
        return cls(out, F.d, complex(lam_arr) if scalar else lam_arr)

    def apply(self, x, y):
        for f in self.factors:
            if f[0] == "henon":
                _, a, p = f
                x, y = a * y, x + _horner(p, y)
            else:
                (a, b, c, d), (t0, t1) = f[1], f[2]
                x, y = a * x + b * y + t0, c * x + d * y + t1
        return x, y

    def apply_inverse(self, u, v):
        for f in reversed(self.factors):
            if f[0] == "henon":
                _, a, p = f
                y = u / a
                u, v = v - _horner(p, y), y
            else:
                (a, b, c, d), (t0, t1) = f[1], f[2]
                det = a * d - b * c
                u0, v0 = u - t0, v - t1
                u, v = (d * u0 - b * v0) / det, (a * v0 - c * u0) / det
        return u, v

    def jacobian(self, x, y):
        """Jacobian of f at (x, y) as a nested 2x2 list."""
        J = [[1.0, 0.0], [0.0, 1.0]]
        for f in self.factors:
            if f[0] == "henon":
                _, a, p = f
                dp = [c * k for k, c in enumerate(p)][1:]
                Jf = [[0.0, a], [1.0, _horner(dp, y)]]
                x, y = a * y, x + _horner(p, y)
            else:
                (a, b, c, d), (t0, t1) = f[1], f[2]
                Jf = [[a, b], [c, d]]
                x, y = a * x + b * y + t0, c * x + d * y + t1
            J = [[Jf[i][0] * J[0][j] + Jf[i][1] * J[1][j] for j in range(2)] for i in range(2)]
        return J

    def take(self, idx):
        def pick(c):
            return c[idx] if isinstance(c, np.ndarray) else c

        out = []
        for f in self.factors:
            if f[0] == "henon":
                out.append(("henon", pick(f[1]), [pick(c) for c in f[2]]))
            else:
                out.append(("affine", [pick(c) for c in f[1]], [pick(c) for c in f[2]]))
        lam = self.lam[idx] if isinstance(self.lam, np.ndarray) else self.lam
        return NumericMap(out, self.d, lam)


def specialize(F, lam, check=True):
    """Numeric evaluator for f at the parameter value(s) ``lam``.

    Raises BadParameter if a scalar ``lam`` lies within 1e-9 of a bad parameter.
    """
    if check and np.ndim(lam) == 0:
        if F.bad_params().near(lam):
            raise BadParameter(f"parameter {lam} is within {BAD_PARAM_TOL} of a bad parameter")
    return NumericMap.from_family(F, lam)


def composed_numeric(F, lam):
    """Numeric coefficient dicts of the composed (p, q) at λ (scalar or array)."""
    P, Q = F.forward_map()
    lam = np.asarray(lam, dtype=complex)

    def ev(c):
        if c.is_constant():
            return complex(c.constant_value())
        v = c.evaluate_numeric(lam)
        return complex(v) if lam.ndim == 0 else np.asarray(v, dtype=complex)

    return ({k: ev(c) for k, c in P.terms.items()}, {k: ev(c) for k, c in Q.terms.items()})


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

_FAMILY_KEYS = {"parameter", "factors"}
_HENON_KEYS = {"type", "a", "p"}
_AFFINE_KEYS = {"type", "matrix", "translation"}


def _expr(v, param, where):
    if isinstance(v, bool):
        raise ConfigError(f"{where}: expected an expression, got a boolean")
    if isinstance(v, int):
        return RatFunc(v)
    if isinstance(v, str):
        try:
            return parse_ratfunc(v, param)
        except ParseError as e:
            e.where = where
            raise
    raise ConfigError(f"{where}: expected an expression string")


def family_from_config(cfg):
    """Build a :class:`RegularFamily` from the JSON family format."""
    if not isinstance(cfg, dict):
        raise ConfigError("family must be an object")
    unknown = set(cfg) - _FAMILY_KEYS
    if unknown:
        raise ConfigError(f"unknown family keys: {sorted(unknown)}")
    param = cfg.get("parameter", "t")
    if not isinstance(param, str) or not param.isidentifier() or param in ("x", "y"):
        raise ConfigError("parameter must be an identifier other than x and y")
    raw = cfg.get("factors")
    if not isinstance(raw, list) or not raw:
        raise ConfigError("factors must be a nonempty list")
    factors = []
    for k, fc in enumerate(raw):
        where = f"factors[{k}]"
        if not isinstance(fc, dict):
            raise ConfigError(f"{where} must be an object")
        kind = fc.get("type")
        if kind == "henon":
            unknown = set(fc) - _HENON_KEYS
            if unknown:
                raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
            if "p" not in fc:
                raise ConfigError(f"{where}: missing 'p'")
            a = _expr(fc.get("a", "1"), param, f"{where}.a")
            ptext = fc["p"]
            if not isinstance(ptext, str):
                raise ConfigError(f"{where}.p: expected an expression string")
            try:
                p = parse_poly_in_y(ptext, param)
            except ParseError as e:
                e.where = f"{where}.p"
                raise
            factors.append(HenonFactor(a, tuple(p)))
        elif kind == "affine":
            unknown = set(fc) - _AFFINE_KEYS
            if unknown:
                raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
            m = fc.get("matrix")
            if not (isinstance(m, list) and len(m) == 2 and all(isinstance(r, list) and len(r) == 2 for r in m)):
                raise ConfigError(f"{where}.matrix must be a 2x2 list")
            mat = tuple(tuple(_expr(c, param, f"{where}.matrix") for c in row) for row in m)
            tr = fc.get("translation", ["0", "0"])
            if not (isinstance(tr, list) and len(tr) == 2):
                raise ConfigError(f"{where}.translation must have two entries")
            factors.append(AffineFactor(mat, tuple(_expr(c, param, f"{where}.translation") for c in tr)))
        else:
            raise ConfigError(f"{where}: type must be 'henon' or 'affine'")
    return RegularFamily(factors, param)


def henon(p, a=1, param="t"):
    """Convenience: single-factor family (a*y, x + p(y)) from a y-polynomial string."""
    coeffs = parse_poly_in_y(p, param) if isinstance(p, str) else list(p)
    a = parse_ratfunc(a, param) if isinstance(a, str) else RatFunc.coerce(a)
    return RegularFamily([HenonFactor(a, tuple(coeffs))], param)


def parse_point(xs, ys, param="t"):
    return PointK(parse_ratfunc(str(xs), param), parse_ratfunc(str(ys), param))


# ---------------------------------------------------------------------------
# random families for property tests
# ---------------------------------------------------------------------------

def _random_ratfunc(rng, coeff_degree, bound, allow_zero=True, den_degree=0):
    while True:
        num = UniPoly([rng.randint(-bound, bound) for _ in range(rng.randint(0, coeff_degree) + 1)])
        if num or allow_zero:
            break
    if den_degree and rng.random() < 0.3:
        den = UniPoly([rng.randint(-bound, bound) for _ in range(den_degree)] + [1])
        return RatFunc(num, den)
    return RatFunc(num)


def random_henon_factor(rng, max_degree=3, coeff_degree=1, bound=3):
    deg = rng.randint(2, max_degree)
    p = [_random_ratfunc(rng, coeff_degree, bound) for _ in range(deg)]
    lead = Fraction(rng.choice([-2, -1, 1, 2]))
    p.append(RatFunc(lead))
    a = RatFunc(Fraction(rng.choice([-2, -1, 1, 2, 3])))
    if coeff_degree and rng.random() < 0.3:
        a = a + RatFunc(UniPoly([0, rng.choice([-1, 1])]))
    return HenonFactor(a, tuple(p))


def random_lower_affine(rng, bound=3):
    """Affine factor [[α, 0], [γ, δ]] + v, which keeps the regular normalization."""
    al = Fraction(rng.choice([-2, -1, 1, 2, 3]))
    de = Fraction(rng.choice([-3, -1, 1, 2]))
    ga = Fraction(rng.randint(-bound, bound))
    v = (Fraction(rng.randint(-bound, bound)), Fraction(rng.randint(-bound, bound)))
    return AffineFactor(((al, 0), (ga, de)), v)


def random_family(rng, max_factors=3, max_degree=3, coeff_degree=1, bound=3, max_d=None):
    """Seeded random regular family: Hénon factors, optionally interleaved with
    lower-triangular affine factors after the first Hénon factor."""
    while True:
        n = rng.randint(1, max_factors)
        factors = []
        nh = 0
        for k in range(n):
            if nh and rng.random() < 0.3:
                factors.append(random_lower_affine(rng, bound))
            else:
                factors.append(random_henon_factor(rng, max_degree, coeff_degree, bound))
                nh += 1
        F = RegularFamily(factors)
        if max_d is None or F.d <= max_d:
            return F


def random_point(rng, max_degree=2, bound=3, den_degree=0):
    return PointK(
        _random_ratfunc(rng, max_degree, bound, den_degree=den_degree),
        _random_ratfunc(rng, max_degree, bound, den_degree=den_degree),
    )
