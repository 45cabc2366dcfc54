"""Exact roots of polynomials over Q and over K = Q(t).

Rational roots are found p-adically: roots of the squarefree part modulo a
good prime are Hensel-lifted and turned back into fractions by rational
reconstruction, then checked exactly.

For R(y) in Q[t][y] a root in K is a rational function u/v whose degrees are
bounded through Gauss's lemma (v divides the leading coefficient, u the
lowest nonzero one).  At a generic rational t0 each such root specializes to
a rational root of R(t0, y); Newton iteration in Q[[t - t0]] recovers the
branch through it and a Padé approximant of the bounded type recovers u/v.
Every candidate is verified by exact substitution, so the output is sound;
completeness rests on the genericity of the chosen t0.
"""

import math
from fractions import Fraction

import numpy as np

from .ratfunc import RatFunc
from .unipoly import ONE, ZERO, UniPoly, _gcd_primitive, _iexquo, _primitive, _trim

_SAMPLE_POINTS = [Fraction(v) for v in (0, 1, -1, 2, -2, 3, -3, 5)] + [
    Fraction(1, 2), Fraction(-1, 3), Fraction(7, 2), Fraction(-5, 3),
]


def _primes_from(start):
    n = max(start, 3) | 1
    while True:
        if all(n % q for q in range(3, math.isqrt(n) + 1, 2)):
            yield n
        n += 2


def _roots_mod_p(c, p):
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for coef in reversed(c):
        acc = (acc * xs + (coef % p)) % p
    return [int(r) for r in np.nonzero(acc == 0)[0]]


def _poly_gcd_mod_p(a, b, p):
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            q = a[-1] * inv % p
            shift = len(a) - len(b)
            for i, bc in enumerate(b):
                a[shift + i] = (a[shift + i] - q * bc) % p
            _trim(a)
            if not a:
                break
        a, b = b, a
    return a


def _eval_mod(c, r, m):
    acc = 0
    for coef in reversed(c):
        acc = (acc * r + coef) % m
    return acc


def _rat_reconstruct(r, m, bound):
    r0, r1 = m, r % m
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    u, v = r1, t1
    if v < 0:
        u, v = -u, -v
    if math.gcd(u, v) != 1:
        return None
    return Fraction(u, v)


def _is_root(c, q):
    u, v = q.numerator, q.denominator
    n = len(c) - 1
    return sum(ci * u ** i * v ** (n - i) for i, ci in enumerate(c)) == 0


def _squarefree_int(c):
    dc = [i * x for i, x in enumerate(c)][1:]
    g = _gcd_primitive(_primitive(c), _primitive(dc)) if len(dc) > 1 else [1]
    if len(g) == 1:
        return _primitive(c)
    return _primitive(_iexquo(_primitive(c), g))


def _squarefree_rational_roots(s):
    """Rational roots of a squarefree primitive integer polynomial."""
    if len(s) == 2:
        return [Fraction(-s[0], s[1])]
    lc, c0 = s[-1], s[0]
    bound = max(abs(lc), abs(c0))
    need = 2 * bound * bound + 1
    ds = [i * x for i, x in enumerate(s)][1:]
    for p in _primes_from(max(101, 8 * len(s))):
        if lc % p == 0:
            continue
        if len(_poly_gcd_mod_p(s, ds, p)) > 1:
            continue
        break
    out = []
    for r in _roots_mod_p(s, p):
        m = p
        while m < need:
            m2 = m * m
            fr = _eval_mod(s, r, m2)
            dr = _eval_mod(ds, r, m2)
            r = (r - fr * pow(dr, -1, m2)) % m2
            m = m2
        q = _rat_reconstruct(r, m, bound)
        if q is not None and _is_root(s, q):
            out.append(q)
    return sorted(set(out))


def rational_roots(poly):
    """Rational roots of a UniPoly (or int list) with multiplicities, as a sorted list."""
    if not isinstance(poly, UniPoly):
        poly = UniPoly(poly)
    if not poly:
        raise ValueError("the zero polynomial has every rational root")
    _, c = poly.primitive()
    out = []
    k = 0
    while c[k] == 0:
        k += 1
    if k:
        out.append((Fraction(0), k))
        c = c[k:]
    if len(c) == 1:
        return out
    s = _squarefree_int(c)
    for q in _squarefree_rational_roots(s):
        lin = [-q.numerator, q.denominator]
        m = 0
        cur = c
        while True:
            nxt = _iexquo(cur, lin)
            if nxt is None:
                break
            cur = nxt
            m += 1
        out.append((q, m))
    return sorted(out)


def distinct_root_count(poly):
    """Number of distinct complex roots (degree of the squarefree part)."""
    _, c = poly.primitive()
    if len(c) <= 1:
        return 0
    return len(_squarefree_int(c)) - 1


# ---------------------------------------------------------------------------
# power series in Q[[t]] stored as truncated UniPolys
# ---------------------------------------------------------------------------

def series_inverse(a, n):
    a0 = a.coeff(0)
    if not a0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    b = UniPoly((1 / a0,))
    m = 1
    while m < n:
        m = min(2 * m, n)
        b = (b * (2 - (a.truncate(m) * b).truncate(m))).truncate(m)
    return b


def _eval_series(coeffs, y, n):
    acc = coeffs[-1].truncate(n)
    for c in reversed(coeffs[:-1]):
        acc = (acc * y).truncate(n) + c.truncate(n)
    return acc


def newton_lift(coeffs, y0, n):
    """Power series root y(t) = y0 + O(t) of sum coeffs[j](t) y^j, modulo t^n.

    y0 must be a simple root of the specialization at t = 0.
    """
    deriv = [c * j for j, c in enumerate(coeffs)][1:]
    y = UniPoly((y0,))
    m = 1
    while m < n:
        m = min(2 * m, n)
        g = _eval_series(coeffs, y, m)
        gp = _eval_series(deriv, y, m)
        y = (y - (g * series_inverse(gp, m)).truncate(m)).truncate(m)
    return y


def pade(s, n, du, dv):
    """(u, v) with u = v*s mod t^n, deg u <= du, deg v <= dv; None if no such pair."""
    if s.degree <= du:
        return s, ONE
    r0, r1 = UniPoly.monomial(n), s.truncate(n)
    t0, t1 = ZERO, ONE
    while r1 and r1.degree > du:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, t0 - q * t1
    if t1.degree > dv or not t1.coeff(0):
        return None
    return r1, t1


# ---------------------------------------------------------------------------
# roots in K = Q(t)
# ---------------------------------------------------------------------------

def evaluate_in_k(coeffs, y):
    """sum coeffs[j] * y^j for UniPoly/RatFunc coefficients and y in K."""
    acc = RatFunc.coerce(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = acc * y + RatFunc.coerce(c)
    return acc


def _y_derivative(coeffs, k):
    out = list(coeffs)
    for _ in range(k):
        out = [c * j for j, c in enumerate(out)][1:]
    return out


def k_multiplicity(coeffs, y):
    m = 0
    cur = list(coeffs)
    while len(cur) > 1 and not evaluate_in_k(cur, y):
        m += 1
        cur = _y_derivative(cur, 1)
    return m


def _choose_samples(coeffs, count=2):
    lead, low = coeffs[-1], coeffs[0]
    scored = []
    for t0 in _SAMPLE_POINTS:
        if not lead(t0) or not low(t0):
            continue
        spec = UniPoly([c(t0) for c in coeffs])
        scored.append((-distinct_root_count(spec), len(scored), t0, spec))
    scored.sort(key=lambda x: (x[0], x[1]))
    if not scored:
        raise ArithmeticError("no admissible specialization point found")
    best = scored[0][0]
    return [(t0, spec) for s, _, t0, spec in scored if s == best][:count]


def k_rational_roots(coeffs):
    """Roots in Q(t) of R(y) = sum coeffs[j] y^j (coefficients UniPoly in t).

    Returns a list of (RatFunc root, multiplicity) sorted by string form.
    """
    coeffs = [c if isinstance(c, UniPoly) else UniPoly((c,)) for c in coeffs]
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    if not coeffs:
        raise ValueError("zero polynomial")
    found = {}
    j0 = 0
    while not coeffs[j0]:
        j0 += 1
    if j0:
        found[RatFunc()] = j0
        coeffs = coeffs[j0:]
    if len(coeffs) == 1:
        return sorted(found.items(), key=lambda kv: kv[0].to_str())
    du = int(coeffs[0].degree)
    dv = int(coeffs[-1].degree)
    prec = du + dv + 1
    for t0, spec in _choose_samples(coeffs):
        shifted = [c.shift(t0) for c in coeffs]
        for y0, m in rational_roots(spec):
            g = _y_derivative(shifted, m - 1)
            series = newton_lift(g, y0, prec)
            pq = pade(series, prec, du, dv)
            if pq is None:
                continue
            u, v = pq
            cand = RatFunc(u.shift(-t0), v.shift(-t0))
            if cand in found:
                continue
            if not evaluate_in_k(coeffs, cand):
                found[cand] = k_multiplicity(coeffs, cand)
    return sorted(found.items(), key=lambda kv: kv[0].to_str())


def clear_denominators(coeffs):
    """Scale RatFunc coefficients by the lcm of their denominators; returns UniPolys."""
    from .unipoly import poly_lcm

    L = ONE
    for c in coeffs:
        c = RatFunc.coerce(c)
        if not c.den.is_one():
            L = poly_lcm(L, c.den)
    out = []
    for c in coeffs:
        c = RatFunc.coerce(c)
        out.append(c.num * L.exquo(c.den))
    return out


def k_roots_of_ratfunc_poly(coeffs):
    """K-roots of a polynomial with RatFunc coefficients."""
    return k_rational_roots(clear_denominators(coeffs))
