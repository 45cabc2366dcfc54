"""Periodicity detection, periodic-point enumeration and non-isotriviality certificates."""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import NotACycle, ResultantDegenerate
from .points import PointK, naive_height
from .ratfunc import RONE, RZERO, RatFunc
from .roots import clear_denominators, evaluate_in_k, k_rational_roots
from .unipoly import ONE, UniPoly, interpolate, poly_gcd, resultant

DEFAULT_FIXED_POINT_BOUND = 16


# ---------------------------------------------------------------------------
# periodicity
# ---------------------------------------------------------------------------

@dataclass
class PeriodicityVerdict:
    status: str
    period: int = None
    reason: str = None
    witness: list = field(default_factory=list)
    guard: int = 0
    steps: int = 0

    def to_dict(self, var="t"):
        d = {"status": self.status, "degreeGuardUsed": self.guard, "steps": self.steps}
        if self.status == "Periodic":
            d["period"] = self.period
            d["preperiod"] = 0
            d["witness"] = [list(p.to_strs(var)) for p in self.witness]
        if self.reason is not None:
            d["reason"] = self.reason
        return d


def default_guard(z):
    return max(16 * (naive_height(z) + 1), 64)


def _bit_size(z):
    total = 0
    for c in (z.x, z.y):
        for poly in (c.num, c.den):
            if poly:
                total += max(abs(v).bit_length() for v in poly.int_coeffs) + poly.den.bit_length()
    return total


def detect_periodic(F, z, guard=None, budget=None, bit_cap=None):
    """Iterate exactly until the orbit repeats, the degree exceeds ``guard``,
    coefficients exceed ``bit_cap`` bits, or ``budget`` steps pass."""
    h0 = naive_height(z)
    if guard is None:
        guard = default_guard(z)
    if guard < h0:
        raise ValueError(f"guard {guard} is below h(z) = {h0}")
    if budget is None:
        budget = 10 * guard + 64
    if bit_cap is None:
        bit_cap = max(4096, 64 * guard)
    orbit = [z]
    cur = z
    for n in range(1, budget + 1):
        cur = F.apply(cur)
        if cur == z:
            period = n
            for q in range(1, n):
                if n % q == 0 and orbit[q] == z:
                    period = q
                    break
            return PeriodicityVerdict("Periodic", period, None, orbit[:period], guard, n)
        if naive_height(cur) > guard:
            return PeriodicityVerdict("NotPeriodic", None, "degree-blow-up", [], guard, n)
        if _bit_size(cur) > bit_cap:
            return PeriodicityVerdict("Inconclusive", None, "coefficient-size-cap", [], guard, n)
        orbit.append(cur)
    return PeriodicityVerdict("Inconclusive", None, "iteration-budget", [], guard, budget)


# ---------------------------------------------------------------------------
# periodic points through resultants
# ---------------------------------------------------------------------------

def _clear_bivar(bp):
    """BivarPoly over K -> {(i, j): UniPoly} over Q[t] after clearing denominators."""
    keys = sorted(bp.terms)
    polys = clear_denominators([bp.terms[k] for k in keys])
    return dict(zip(keys, polys))


def _x_coeff_lists(A, lam):
    """Specialize at t = lam and return coefficients in x as UniPolys in y."""
    dx = max(i for i, _ in A)
    out = [dict() for _ in range(dx + 1)]
    for (i, j), c in A.items():
        v = c(lam)
        if v:
            out[i][j] = v
    lists = []
    for row in out:
        if row:
            m = max(row)
            lists.append(UniPoly([row.get(j, 0) for j in range(m + 1)]))
        else:
            lists.append(UniPoly())
    return lists


def resultant_x(A, B):
    """Res_x(A, B) for {(i,j): UniPoly} polynomials; returns y-coefficients in Q[t].

    Computed at rational samples of t that keep both x-degrees, with the
    subresultant algorithm over Q[y], and interpolated in t.
    """
    dxa = max(i for i, _ in A)
    dxb = max(i for i, _ in B)
    ea = max(int(c.degree) for c in A.values())
    eb = max(int(c.degree) for c in B.values())
    bound = dxb * ea + dxa * eb
    samples, values = [], []
    k = 0
    while len(samples) < bound + 1:
        lam = Fraction((k + 1) // 2 * (1 if k % 2 else -1)) if k else Fraction(0)
        k += 1
        ca = _x_coeff_lists(A, lam)
        cb = _x_coeff_lists(B, lam)
        if not ca[-1] or not cb[-1]:
            continue
        r = resultant(ca, cb, exquo=lambda p, q: p.exquo(q) if isinstance(p, UniPoly) else p // q)
        if not isinstance(r, UniPoly):
            r = UniPoly((r,))
        samples.append(lam)
        values.append(r)
    dy = max((int(v.degree) for v in values if v), default=-1)
    return [interpolate(samples, [v.coeff(j) for v in values]) for j in range(dy + 1)]


def _divide_out_root(coeffs, root):
    """Synthetic division of a K[y] polynomial by (y - root)."""
    out = [RZERO] * (len(coeffs) - 1)
    acc = RZERO
    for j in range(len(coeffs) - 1, 0, -1):
        acc = acc * root + coeffs[j]
        out[j - 1] = acc
    return out


def _primitive_in_t(coeffs):
    polys = clear_denominators(coeffs)
    g = None
    for p in polys:
        if p:
            g = p.monic() if g is None else poly_gcd(g, p)
    if g is not None and not g.is_one():
        polys = [p.exquo(g) for p in polys]
    if polys and polys[-1] and polys[-1].lc < 0:
        polys = [-p for p in polys]
    return polys


def format_y_poly(coeffs, var="t", name="y"):
    parts = []
    for j in range(len(coeffs) - 1, -1, -1):
        c = coeffs[j]
        if not c:
            continue
        cs = c.to_str(var)
        mono = "" if j == 0 else (name if j == 1 else f"{name}^{j}")
        if not mono:
            parts.append(cs if " " not in cs else f"({cs})")
        elif cs == "1":
            parts.append(mono)
        elif cs == "-1":
            parts.append(f"-{mono}")
        else:
            parts.append(f"({cs})*{mono}" if (" " in cs) else f"{cs}*{mono}")
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


@dataclass
class FixedPointResult:
    n: int
    points: list
    y_roots: list
    resultant: list
    residual: list
    residual_degree: int

    def to_dict(self, var="t"):
        return {
            "n": self.n,
            "points": [list(p.to_strs(var)) for p in self.points],
            "y_roots": [[r.to_str(var), m] for r, m in self.y_roots],
            "resultant_degree": len(self.resultant) - 1,
            "residual_degree": self.residual_degree,
            "residual": format_y_poly(self.residual, var) if self.residual_degree else "1",
        }


def _specialize_x_poly(A, y0):
    """Coefficient list in x of A(x, y0) over K."""
    dx = max(i for i, _ in A)
    out = [RZERO] * (dx + 1)
    for (i, j), c in A.items():
        out[i] = out[i] + y0 ** j * c if j else out[i] + RatFunc(c)
    while out and not out[-1]:
        out.pop()
    return out


def _point_key(p):
    xs, ys = p.x.to_str(), p.y.to_str()
    return (xs.lstrip("-"), xs.startswith("-"), ys.lstrip("-"), ys.startswith("-"))


def fixed_points(F, n, bound=DEFAULT_FIXED_POINT_BOUND):
    """All K-rational points with f^n(z) = z, plus the non-rational residual degree."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if F.d ** n > bound:
        raise ValueError(f"d^n = {F.d ** n} exceeds the configured bound {bound}")
    from .bivariate import BivarPoly

    P, Q = F.iterate_map(n)
    A = _clear_bivar(P - BivarPoly.x())
    B = _clear_bivar(Q - BivarPoly.y())
    if not A or not B:
        raise ResultantDegenerate("f^n - id has an identically vanishing coordinate")
    R = resultant_x(A, B)
    if not R or not any(R):
        raise ResultantDegenerate("resultant of the fixed-point equations vanishes identically")
    y_roots = k_rational_roots(R)
    points = []
    for y0, _ in y_roots:
        xa = _specialize_x_poly(A, y0)
        xb = _specialize_x_poly(B, y0)
        primary = xa if len(xa) > 1 else xb
        if len(primary) <= 1:
            if not primary:
                raise ResultantDegenerate("fixed-point curve found (x undetermined)")
            continue
        for x0, _ in k_rational_roots(clear_denominators(primary)):
            if xa and evaluate_in_k(xa, x0):
                continue
            if xb and evaluate_in_k(xb, x0):
                continue
            z = PointK(x0, y0)
            w = z
            for _ in range(n):
                w = F.apply(w)
            if w == z:
                points.append(z)
    residual = [RatFunc(c) for c in R]
    for y0, m in y_roots:
        for _ in range(m):
            residual = _divide_out_root(residual, y0)
    residual = _primitive_in_t(residual)
    points = sorted(set(points), key=_point_key)
    return FixedPointResult(n, points, y_roots, R, residual, len(residual) - 1)


# ---------------------------------------------------------------------------
# multipliers
# ---------------------------------------------------------------------------

@dataclass
class CycleData:
    points: list
    trace: RatFunc
    det: RatFunc

    def to_dict(self, var="t"):
        return {
            "points": [list(p.to_strs(var)) for p in self.points],
            "multiplierTrace": self.trace.to_str(var),
            "jacobianDet": self.det.to_str(var),
        }


def _mat_mul(A, B):
    return tuple(tuple(A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)) for i in range(2))


def cycle_multiplier(F, cycle):
    """Exact Jacobian product along a cycle (list of PointK in orbit order)."""
    pts = list(cycle.points if isinstance(cycle, CycleData) else cycle)
    if not pts:
        raise NotACycle("empty cycle")
    for i, p in enumerate(pts):
        if F.apply(p) != pts[(i + 1) % len(pts)]:
            raise NotACycle(f"f(point {i}) is not point {(i + 1) % len(pts)}")
    J = ((RONE, RZERO), (RZERO, RONE))
    for p in pts:
        J = _mat_mul(F.jacobian(p), J)
    tr = J[0][0] + J[1][1]
    det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
    return CycleData(pts, tr, det)


def cycle_of(F, z, max_period=64):
    """Orbit list of a periodic point z."""
    pts = [z]
    w = F.apply(z)
    while w != z:
        pts.append(w)
        if len(pts) > max_period:
            raise NotACycle("point is not periodic within the search length")
        w = F.apply(w)
    return pts


# ---------------------------------------------------------------------------
# non-isotriviality
# ---------------------------------------------------------------------------

NONISO = "Certified-NonIsotrivial"
UNKNOWN = "Unknown"


@dataclass
class IsotrivialityCertificate:
    status: str
    method: str = None
    witness: dict = field(default_factory=dict)

    def to_dict(self):
        d = {"status": self.status}
        if self.method:
            d["method"] = self.method
        if self.witness:
            d["witness"] = self.witness
        return d


def _polish(nm, x, y, n, iters=30):
    for _ in range(iters):
        u, v = x, y
        J = [[1.0, 0.0], [0.0, 1.0]]
        for _ in range(n):
            Jk = nm.jacobian(u, v)
            J = [[Jk[i][0] * J[0][j] + Jk[i][1] * J[1][j] for j in range(2)] for i in range(2)]
            u, v = nm.apply(u, v)
        fx, fy = u - x, v - y
        a, b, c, d = J[0][0] - 1, J[0][1], J[1][0], J[1][1] - 1
        det = a * d - b * c
        if det == 0:
            break
        dx = (d * fx - b * fy) / det
        dy = (a * fy - c * fx) / det
        x, y = x - dx, y - dy
        if abs(dx) + abs(dy) < 1e-15 * (1 + abs(x) + abs(y)):
            break
    return x, y


def numeric_cycle_traces(F, lam, n=1, data=None):
    """Traces of D(f^n) at all numerically located points of period dividing n."""
    from .bivariate import BivarPoly
    from .family import specialize

    if data is None:
        P, Q = F.iterate_map(n)
        A = _clear_bivar(P - BivarPoly.x())
        B = _clear_bivar(Q - BivarPoly.y())
        data = (A, B, resultant_x(A, B))
    A, B, R = data
    lam = Fraction(lam)
    rc = [c(lam) for c in R]
    while rc and not rc[-1]:
        rc.pop()
    if len(rc) < 2:
        return []
    nm = specialize(F, complex(lam))
    traces = []
    for y0 in np.roots([float(c) for c in reversed(rc)]):
        dx = max(i for i, _ in A)
        xc = [0j] * (dx + 1)
        for (i, j), c in A.items():
            xc[i] += float(c(lam)) * y0 ** j
        while len(xc) > 1 and abs(xc[-1]) < 1e-14:
            xc.pop()
        if len(xc) > 1:
            cands = np.roots(list(reversed(xc)))
        else:
            cands = np.array([0j])
        best = None
        for x0 in cands:
            bv = sum(float(c(lam)) * x0 ** i * y0 ** j for (i, j), c in B.items())
            if best is None or abs(bv) < best[0]:
                best = (abs(bv), x0)
        x0, y1 = _polish(nm, complex(best[1]), complex(y0), n)
        J = [[1.0, 0.0], [0.0, 1.0]]
        u, v = x0, y1
        for _ in range(n):
            Jk = nm.jacobian(u, v)
            J = [[Jk[i][0] * J[0][j] + Jk[i][1] * J[1][j] for j in range(2)] for i in range(2)]
            u, v = nm.apply(u, v)
        traces.append(complex(J[0][0] + J[1][1]))
    return traces


def _spectra_differ(a, b, tol):
    if len(a) != len(b) or not a:
        return False
    a = np.asarray(a)
    b = np.asarray(b)
    for k in range(1, len(a) + 1):
        pa = np.sum(a ** k)
        pb = np.sum(b ** k)
        scale = 1.0 + max(np.sum(np.abs(a) ** k), np.sum(np.abs(b) ** k))
        if abs(pa - pb) > tol * scale:
            return True
    return False


DEFAULT_NUMERIC_SAMPLES = (Fraction(-1), Fraction(-4), Fraction(2), Fraction(3), Fraction(1, 2))


def nonisotriviality_certificate(F, max_period=3, bound=DEFAULT_FIXED_POINT_BOUND,
                                 samples=DEFAULT_NUMERIC_SAMPLES, tol=1e-6):
    """Sufficient test: a parameter-dependent affine-conjugacy invariant."""
    var = F.param
    if F.is_constant():
        return IsotrivialityCertificate(UNKNOWN, None, {"reason": "family has constant coefficients"})
    det = F.jacobian_det()
    if not det.is_constant():
        return IsotrivialityCertificate(NONISO, "jacobian-determinant", {"jacobianDet": det.to_str(var)})
    checked = []
    for n in range(1, max_period + 1):
        if F.d ** n > bound:
            break
        res = fixed_points(F, n, bound)
        for z in res.points:
            cyc = cycle_multiplier(F, cycle_of(F, z))
            if not cyc.trace.is_constant():
                w = cyc.to_dict(var)
                w["n"] = n
                return IsotrivialityCertificate(NONISO, "cycle-trace", w)
        checked.append(n)
    # numeric fallback on fixed points of f
    from .bivariate import BivarPoly

    P, Q = F.forward_map()
    A = _clear_bivar(P - BivarPoly.x())
    B = _clear_bivar(Q - BivarPoly.y())
    data = (A, B, resultant_x(A, B))
    bad = F.bad_params()
    usable = [s for s in samples if not bad.near(complex(s), 1e-6)]
    spectra = []
    for s in usable:
        spectra.append((s, numeric_cycle_traces(F, s, 1, data)))
    for i in range(len(spectra)):
        for j in range(i + 1, len(spectra)):
            (s1, t1), (s2, t2) = spectra[i], spectra[j]
            if _spectra_differ(t1, t2, tol):
                return IsotrivialityCertificate(NONISO, "numeric-multiplier-spectrum", {
                    "samples": [str(s1), str(s2)],
                    "traces": [[[v.real, v.imag] for v in sorted(t1, key=lambda c: (c.real, c.imag))],
                               [[v.real, v.imag] for v in sorted(t2, key=lambda c: (c.real, c.imag))]],
                })
    return IsotrivialityCertificate(UNKNOWN, None, {"periods_checked": checked})
