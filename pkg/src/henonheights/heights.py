"""Degree sequences, canonical heights and arithmetic degrees of K-points.

Canonical heights are limits of d^-n h(f^n z).  They are certified by
observing the exact affine recursion ``h_{n+1} = d h_n + c`` for ``2k``
consecutive steps (``k`` to detect, ``k`` to verify); the limit is then
``alpha`` in ``h_n = alpha d^n + beta``.  Such values are tagged
``Certified-Empirical``.  Otherwise an interval built from the last Cauchy
difference is returned and tagged ``Empirical``.
"""

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegreeCapExceeded, Unresolved
from .points import naive_height

CERTIFIED = "Certified-Empirical"
EMPIRICAL = "Empirical"

DEFAULT_N = 12
DEFAULT_CAP = 4096
DEFAULT_WINDOW = 3


def iterate_orbit(F, z, direction="forward"):
    """Yield z, f(z), f^2(z), ... (or the backward orbit)."""
    if direction not in ("forward", "backward"):
        raise ValueError("direction must be 'forward' or 'backward'")
    step = F.apply if direction == "forward" else F.apply_inverse
    while True:
        yield z
        z = step(z)


def orbit_degrees(F, z, N, direction="forward", cap=DEFAULT_CAP):
    """[h(z), h(f z), ..., h(f^N z)]; raises DegreeCapExceeded above ``cap``."""
    if N < 0:
        raise ValueError("N must be non-negative")
    out = []
    for n, w in enumerate(iterate_orbit(F, z, direction)):
        h = naive_height(w)
        out.append(h)
        if cap is not None and h > cap:
            raise DegreeCapExceeded(n, out, cap)
        if n == N:
            return out


@dataclass
class HeightEstimate:
    """Canonical height value or enclosing interval ``[lower, upper]``."""

    lower: Fraction
    upper: Fraction
    certificate: str
    degrees: list = field(default_factory=list)
    cap_exceeded: bool = False
    recursion: tuple = None

    @property
    def exact(self):
        return self.certificate == CERTIFIED

    @property
    def value(self):
        """Exact value when certified, interval midpoint otherwise."""
        if self.lower == self.upper:
            return self.lower
        return (self.lower + self.upper) / 2

    def is_positive(self):
        return self.lower > 0 or self.cap_exceeded

    def is_zero(self):
        return self.exact and self.lower == 0

    def contains(self, v):
        return self.lower <= v <= self.upper

    def scaled(self, s):
        s = Fraction(s)
        return HeightEstimate(self.lower * s, self.upper * s, self.certificate, [], self.cap_exceeded)

    def overlaps(self, other):
        return self.lower <= other.upper and other.lower <= self.upper

    def __add__(self, other):
        cert = CERTIFIED if self.exact and other.exact else EMPIRICAL
        return HeightEstimate(
            self.lower + other.lower,
            self.upper + other.upper,
            cert,
            [],
            self.cap_exceeded or other.cap_exceeded,
        )

    def to_dict(self):
        d = {"certificate": self.certificate, "cap_exceeded": self.cap_exceeded}
        if self.lower == self.upper:
            d["value"] = str(self.lower)
        else:
            d["interval"] = [str(self.lower), str(self.upper)]
            d["value"] = str(self.value)
        if self.recursion is not None:
            d["recursion"] = {"c": self.recursion[0], "from_n": self.recursion[1]}
        return d


def _detect_recursion(h, d, k):
    """Start index m with c_m = ... = c_{m+2k-1}, c_n = h_{n+1} - d h_n."""
    need = 2 * k
    if len(h) < need + 1:
        return None
    c = [h[i + 1] - d * h[i] for i in range(len(h) - 1)]
    run = 1
    for i in range(1, len(c)):
        run = run + 1 if c[i] == c[i - 1] else 1
        if run >= need:
            return i - need + 1, c[i]
    return None


def _interval(h, d):
    n = len(h) - 1
    cur = Fraction(h[n], d ** n)
    if n == 0:
        eps = Fraction(0) if h[0] == 0 else cur
    else:
        prev = Fraction(h[n - 1], d ** (n - 1))
        eps = abs(cur - prev) * Fraction(d, d - 1)
    return max(Fraction(0), cur - eps), cur + eps


def _canonical(F, z, direction, N, cap, k):
    d = F.d
    h = []
    try:
        for n, w in enumerate(iterate_orbit(F, z, direction)):
            hv = naive_height(w)
            h.append(hv)
            if cap is not None and hv > cap:
                raise DegreeCapExceeded(n, h, cap)
            found = _detect_recursion(h, d, k)
            if found is not None:
                m, c = found
                beta = Fraction(-c, d - 1)
                alpha = (h[m] - beta) / Fraction(d) ** m
                if alpha >= 0:
                    return HeightEstimate(alpha, alpha, CERTIFIED, h, False, (c, m))
            if n >= N:
                break
    except DegreeCapExceeded:
        lo, hi = _interval(h[:-1] if len(h) > 1 else h, d)
        # the blown-up degree itself is a sharper lower bound for d^-n h_n
        last = Fraction(h[-1], d ** (len(h) - 1))
        return HeightEstimate(lo, max(hi, last), EMPIRICAL, h, True)
    lo, hi = _interval(h, d)
    return HeightEstimate(lo, hi, EMPIRICAL, h, False)


def canonical_height_plus(F, z, N=DEFAULT_N, cap=DEFAULT_CAP, k=DEFAULT_WINDOW):
    return _canonical(F, z, "forward", N, cap, k)


def canonical_height_minus(F, z, N=DEFAULT_N, cap=DEFAULT_CAP, k=DEFAULT_WINDOW):
    return _canonical(F, z, "backward", N, cap, k)


def canonical_height(F, z, N=DEFAULT_N, cap=DEFAULT_CAP, k=DEFAULT_WINDOW):
    """ĥ = ĥ⁺ + ĥ⁻ with interval arithmetic on the certificates."""
    return canonical_height_plus(F, z, N, cap, k) + canonical_height_minus(F, z, N, cap, k)


def arithmetic_degree(F, z, hplus=None, guard=None, **kw):
    """α_f(z) in {1, d}; raises Unresolved when neither branch can be decided."""
    if hplus is None:
        hplus = canonical_height_plus(F, z, **kw)
    if hplus.is_positive():
        return F.d
    from .northcott import detect_periodic

    verdict = detect_periodic(F, z, guard)
    if verdict.status == "Periodic":
        return 1
    data = {"hPlus": hplus.to_dict(), "periodicity": verdict.to_dict()}
    raise Unresolved("arithmetic degree undecided", data)


def kawaguchi_gap(F, z):
    """h(f z) + h(f^-1 z) - (d + 1/d) h(z), exactly."""
    d = F.d
    return (
        Fraction(naive_height(F.apply(z)) + naive_height(F.apply_inverse(z)))
        - (d + Fraction(1, d)) * naive_height(z)
    )


def empirical_constant(gaps):
    """C_emp = max(0, -min gap) over a sample."""
    gaps = list(gaps)
    if not gaps:
        return Fraction(0)
    return max(Fraction(0), -min(gaps))


@dataclass
class HeightReport:
    d: int
    degrees_forward: list
    degrees_backward: list
    h_plus: HeightEstimate
    h_minus: HeightEstimate
    h_total: HeightEstimate
    alpha_f: int = None
    alpha_status: str = "Resolved"

    @property
    def certificate(self):
        return self.h_total.certificate

    def to_dict(self):
        return {
            "d": self.d,
            "degreeSeqForward": self.degrees_forward,
            "degreeSeqBackward": self.degrees_backward,
            "hPlus": self.h_plus.to_dict(),
            "hMinus": self.h_minus.to_dict(),
            "hTotal": self.h_total.to_dict(),
            "certificate": self.certificate,
            "alphaF": self.alpha_f,
            "alphaStatus": self.alpha_status,
        }

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "h_forward", "h_backward"])
        n = max(len(self.degrees_forward), len(self.degrees_backward))
        for i in range(n):
            hf = self.degrees_forward[i] if i < len(self.degrees_forward) else ""
            hb = self.degrees_backward[i] if i < len(self.degrees_backward) else ""
            w.writerow([i, hf, hb])
        return buf.getvalue()


def _degrees_upto(F, z, direction, N, cap):
    try:
        return orbit_degrees(F, z, N, direction, cap)
    except DegreeCapExceeded as e:
        return e.degrees


def height_report(F, z, N=DEFAULT_N, cap=DEFAULT_CAP, k=DEFAULT_WINDOW, guard=None):
    hp = canonical_height_plus(F, z, N, cap, k)
    hm = canonical_height_minus(F, z, N, cap, k)
    report = HeightReport(
        d=F.d,
        degrees_forward=_degrees_upto(F, z, "forward", N, cap),
        degrees_backward=_degrees_upto(F, z, "backward", N, cap),
        h_plus=hp,
        h_minus=hm,
        h_total=hp + hm,
    )
    try:
        report.alpha_f = arithmetic_degree(F, z, hplus=hp, guard=guard)
    except Unresolved:
        report.alpha_status = "Unresolved"
    return report
