"""Fiberwise Green functions, bifurcation mass and the stability probe.

Error model.  Write f = (p, q) with q = c*y^d + (terms of degree < d) and
deg p < d.  Let S_q be the sum of the moduli of the lower coefficients of q
and S_p that of all coefficients of p.  On the region

    |y| >= |x|,  |y| >= R_cert = max(1, 2 S_q/|c|, 2 S_p/|c|, (2/|c|)^(1/(d-1)))

one step satisfies |q| >= |c||y|^d / 2 >= max(|p|, |y|), so the region is
forward invariant, and q = c y^d (1 + e) with |e| <= S_q/(|c||y|) <= 1/2.
With L_n = log|y_n| + log|c|/(d-1) this gives L_{n+1} = d L_n + eta_n,
|eta_n| <= 2 S_q / (|c||y_n|), hence

    |G - d^-N L_N| <= d^-N * eta_N / (d - 1).

Orbits that never enter the region within ``max_iter`` steps get G = 0 and
the bound d^-M (log+|f^M z| + log+(S)/(d-1)), S the sum of all coefficient
moduli of p and q, which follows from log+|f(w)| <= d log+|w| + log+ S.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import BadParameter, InsufficientGrid, NearBadParam
from .family import BAD_PARAM_TOL, HenonFactor, composed_numeric, specialize

CONVERGED = "Converged"
TRUNCATED = "Truncated"
NEAR_BAD = "NearBadParam"
_FLAG_CODES = {0: CONVERGED, 1: TRUNCATED, 2: NEAR_BAD}

_OVERFLOW = 1e100
_ROUNDING = 1e-14


@dataclass
class EscapeParams:
    """Iteration controls.

    Parameters
    ----------
    max_iter : int
        Iteration budget per point (>= 1).
    radius : float or callable, optional
        Escape radius R(λ) >= 2, or a function of λ.  Defaults to
        :func:`escape_radius`.  The certified radius of the error model is
        always enforced on top of it.
    tail_constant : float, optional
        If given, the closing error is ``tail_constant * d^-N / (d-1)``
        instead of the certified per-point bound.
    """

    max_iter: int = 200
    radius: object = None
    tail_constant: float = None

    def __post_init__(self):
        if int(self.max_iter) < 1:
            raise ValueError("max_iter must be at least 1")
        self.max_iter = int(self.max_iter)
        if self.radius is not None and not callable(self.radius) and float(self.radius) < 2:
            raise ValueError("escape radius must be at least 2")
        if self.tail_constant is not None and float(self.tail_constant) < 0:
            raise ValueError("tail constant must be non-negative")


class GreenValue(NamedTuple):
    value: float
    err_bound: float
    flag: str


def _check_param(F, lam):
    if F.bad_params().near(lam):
        raise NearBadParam(f"parameter {lam} is within {BAD_PARAM_TOL} of a bad parameter")


def _factor_radius(a, p):
    d = len(p) - 1
    c = abs(p[-1])
    lower = [abs(v) for v in p[:-1]]
    R = max(2.0, 1.0 + abs(a) + sum(lower))

    def ok(R):
        psi = c * R / 2 - R ** (2 - d) - sum(m * R ** (j - d + 1) for j, m in enumerate(lower))
        return psi >= 0 and c * R ** (d - 1) / 2 >= abs(a)

    while not ok(R):
        R *= 2
    return R


def escape_radius(F, lam):
    """Radius R >= 2 such that for each Hénon factor (a y, x + p(y)), |y| >= R and
    |y| >= |x| imply |y'| >= |c||y|^d/2 and |y'| >= |x'| (c the leading coefficient)."""
    if np.ndim(lam) == 0:
        _check_param(F, lam)
    nm = specialize(F, lam, check=False)
    R = 2.0
    for f in nm.factors:
        if f[0] == "henon":
            _, a, p = f
            if np.ndim(a) or any(np.ndim(v) for v in p):
                av = np.broadcast_to(a, np.shape(lam))
                ps = [np.broadcast_to(v, np.shape(lam)) for v in p]
                Rf = np.array([_factor_radius(av.flat[i], [q.flat[i] for q in ps]) for i in range(av.size)])
                R = np.maximum(R, Rf.reshape(np.shape(lam)))
            else:
                R = np.maximum(R, _factor_radius(a, p))
    return float(R) if np.ndim(R) == 0 else R


def _region_constants(F, lam):
    P, Q = composed_numeric(F, lam)
    d = F.d
    c = Q[(0, d)]
    shape = np.shape(lam)
    zero = np.zeros(shape)
    Sq = sum((np.abs(v) for k, v in Q.items() if k != (0, d)), zero)
    Sp = sum((np.abs(v) for v in P.values()), zero)
    ac = np.abs(c) + zero
    with np.errstate(divide="ignore", invalid="ignore"):
        Rc = np.maximum.reduce([
            np.ones(shape) if shape else np.ones(()),
            2 * Sq / ac,
            2 * Sp / ac,
            (2 / ac) ** (1.0 / (d - 1)),
        ])
    S = Sq + Sp + ac
    return ac, Sq, Rc, S


def _green_core(F, lam, x, y, params):
    """Vectorized G+ at parameters lam (1-d array) and points (x, y) (1-d arrays)."""
    d = F.d
    n_pts = lam.shape[0]
    nm = specialize(F, lam, check=False)
    ac, Sq, Rc, S = _region_constants(F, lam)
    if params.radius is None:
        Ru = escape_radius(F, lam)
    elif callable(params.radius):
        Ru = np.array([float(params.radius(v)) for v in lam])
    else:
        Ru = np.full(n_pts, float(params.radius))
    Resc = np.maximum(Ru, Rc)
    close_at = 10.0 ** min(30.0, 250.0 / d)
    logc = np.log(ac) / (d - 1)
    logS = np.log(np.maximum(S, 1.0)) / (d - 1)

    G = np.zeros(n_pts)
    err = np.zeros(n_pts)
    flag = np.zeros(n_pts, dtype=np.int8)
    x = np.asarray(x, dtype=complex).copy()
    y = np.asarray(y, dtype=complex).copy()
    idx = np.arange(n_pts)
    in_region = np.zeros(n_pts, dtype=bool)
    m = nm
    for n in range(params.max_iter + 1):
        ay, ax = np.abs(y), np.abs(x)
        reg = (ay >= ax) & (ay >= Resc[idx])
        in_region[idx] = reg
        done = reg & (ay >= close_at)
        big = ~reg & (np.maximum(ax, ay) > _OVERFLOW)
        last = n == params.max_iter
        if last:
            done = done | reg
        scale = float(d) ** (-n)
        if done.any():
            k = idx[done]
            ly = np.log(ay[done])
            L = ly + logc[k]
            G[k] = scale * L
            if params.tail_constant is not None:
                e = params.tail_constant * scale / (d - 1)
            else:
                eta = 2 * Sq[k] / (ac[k] * ay[done])
                e = scale * eta / (d - 1)
            err[k] = e + _ROUNDING * scale * (np.abs(ly) + 1)
            flag[k] = 0
        nonfinite = ~np.isfinite(ax) | ~np.isfinite(ay)
        crude = big | (nonfinite & ~done)
        if crude.any():
            k = idx[crude]
            with np.errstate(over="ignore", invalid="ignore"):
                lw = np.log(np.maximum(ax[crude], ay[crude]))
            lw = np.where(np.isfinite(lw), lw, np.nan)
            upper = scale * (lw + logS[k])
            G[k] = upper / 2
            err[k] = upper / 2
            flag[k] = np.where(np.isfinite(upper), 0, 1)
            crude_nan = ~np.isfinite(upper)
            if crude_nan.any():
                G[k[crude_nan]] = np.nan
                err[k[crude_nan]] = np.inf
        if last:
            rest = ~(done | crude)
            k = idx[rest]
            lw = np.log(np.maximum(1.0, np.maximum(ax[rest], ay[rest])))
            G[k] = 0.0
            err[k] = scale * (lw + logS[k])
            flag[k] = 1
            break
        keep = ~(done | crude)
        if not keep.all():
            idx = idx[keep]
            x, y = x[keep], y[keep]
            m = nm.take(idx)
        if idx.size == 0:
            break
        with np.errstate(over="ignore", invalid="ignore"):
            x, y = m.apply(x, y)
    return G, err, flag


def green_plus(F, lam, point, params=None):
    """G+_λ(point) as GreenValue(value, err_bound, flag)."""
    params = params or EscapeParams()
    _check_param(F, lam)
    lam_a = np.array([complex(lam)])
    G, err, flag = _green_core(F, lam_a, np.array([complex(point[0])]), np.array([complex(point[1])]), params)
    return GreenValue(float(G[0]), float(err[0]), _FLAG_CODES[int(flag[0])])


def green_plus_array(F, lam, x, y, params=None):
    """Vectorized green_plus without the bad-parameter check (arrays of equal shape)."""
    params = params or EscapeParams()
    lam = np.asarray(lam, dtype=complex)
    shape = lam.shape
    G, err, flag = _green_core(
        F, lam.ravel(), np.broadcast_to(np.asarray(x, complex), shape).ravel(),
        np.broadcast_to(np.asarray(y, complex), shape).ravel(), params,
    )
    return G.reshape(shape), err.reshape(shape), flag.reshape(shape)


# ---------------------------------------------------------------------------
# grids over parameter charts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Chart:
    """Square chart of half-width ``half_width`` around ``center``.

    With ``at_infinity`` the chart coordinate is s = 1/λ.
    """

    center: complex = 0j
    half_width: float = 8.0
    at_infinity: bool = False

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")

    def coordinates(self, resolution):
        k = (2 * np.arange(resolution) + 1) / resolution - 1
        re = self.center.real + self.half_width * k
        im = self.center.imag + self.half_width * k
        S = re[:, None] + 1j * im[None, :]
        return S

    def spacing(self, resolution):
        return 2 * self.half_width / resolution

    def to_lambda(self, s):
        if not self.at_infinity:
            return s
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(s == 0, np.inf, 1 / np.where(s == 0, 1, s))

    def to_dict(self):
        return {
            "center": [self.center.real, self.center.imag],
            "half_width": self.half_width,
            "at_infinity": self.at_infinity,
        }


def parse_chart(text):
    """'cx,cy,hw' for a finite chart or 'inf,hw' for the chart at infinity."""
    parts = [p.strip() for p in text.split(",")]
    if parts and parts[0].lower() in ("inf", "infinity"):
        if len(parts) != 2:
            raise ValueError("chart at infinity is written 'inf,halfwidth'")
        return Chart(0j, float(parts[1]), True)
    if len(parts) != 3:
        raise ValueError("chart is written 'cx,cy,halfwidth'")
    return Chart(complex(float(parts[0]), float(parts[1])), float(parts[2]), False)


def default_charts():
    return [Chart(0j, 8.0, False), Chart(0j, 0.125, True)]


@dataclass
class GreenGrid:
    chart: Chart
    resolution: int
    G: np.ndarray
    err: np.ndarray
    flags: np.ndarray
    coords: np.ndarray
    bad_points: list = field(default_factory=list)

    @property
    def center(self):
        return self.chart.center

    @property
    def half_width(self):
        return self.chart.half_width

    @property
    def spacing(self):
        return self.chart.spacing(self.resolution)

    @property
    def lam(self):
        return self.chart.to_lambda(self.coords)

    def valid_mask(self):
        return (self.flags != 2) & np.isfinite(self.G) & np.isfinite(self.err)

    def flag_names(self):
        return np.vectorize(_FLAG_CODES.get)(self.flags)

    @classmethod
    def from_function(cls, fn, chart, resolution, err=0.0, exclude=None):
        """Synthetic grid G = fn(s) on chart coordinates; ``exclude(s)`` marks NearBadParam cells."""
        S = chart.coordinates(resolution)
        with np.errstate(divide="ignore", invalid="ignore"):
            G = np.asarray(fn(S), dtype=float)
        flags = np.zeros(S.shape, dtype=np.int8)
        if exclude is not None:
            flags[np.asarray(exclude(S), dtype=bool)] = 2
        flags[~np.isfinite(G)] = 2
        E = np.broadcast_to(np.asarray(err, dtype=float), S.shape).copy()
        return cls(chart, resolution, np.where(flags == 2, np.nan, G), E, flags, S)

    def rows(self):
        lam = self.lam
        names = self.flag_names()
        R = self.resolution
        for j in range(R):
            for i in range(R):
                lv = lam[i, j]
                yield (float(np.real(lv)), float(np.imag(lv)), float(self.G[i, j]),
                       float(self.err[i, j]), str(names[i, j]))

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re(λ)", "im(λ)", "G", "errBound", "flag"])
        for r in self.rows():
            w.writerow([repr(r[0]), repr(r[1]), repr(r[2]), repr(r[3]), r[4]])
        return buf.getvalue()

    def to_dict(self):
        names = self.flag_names()
        return {
            "chart": self.chart.to_dict(),
            "resolution": self.resolution,
            "G": [[_jsonable(v) for v in row] for row in self.G.tolist()],
            "errBound": [[_jsonable(v) for v in row] for row in self.err.tolist()],
            "flag": names.tolist(),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _jsonable(v):
    return v if math.isfinite(v) else None


def _chart_bad_points(F, z, chart):
    """Bad parameters of the marked family in chart coordinates."""
    bad = F.bad_params()
    pts = list(bad.roots)
    for c in (z.x, z.y):
        if c.den.degree >= 1:
            pts += list(np.roots(c.den.float_coeffs()))
    at_inf = bad.infinity or not z.is_constant()
    if not chart.at_infinity:
        return [complex(p) for p in pts]
    out = [complex(1 / p) for p in pts if abs(p) > 0]
    if at_inf:
        out.append(0j)
    return out


def _is_exact_cycle(F, z, guard=16):
    from .northcott import detect_periodic

    try:
        v = detect_periodic(F, z, guard=guard, budget=64, bit_cap=2048)
    except ValueError:
        return False
    return v.status == "Periodic"


def green_marked(F, z, chart, resolution, params=None, margin=None):
    """Grid of λ -> G+_λ(z(λ)) over one chart.

    Cells within ``margin`` (chart units, default 1.5 cell widths) of a bad
    parameter are flagged NearBadParam.  An exactly periodic marked point
    short-circuits to G = 0 with zero error.
    """
    if isinstance(chart, str):
        chart = parse_chart(chart)
    params = params or EscapeParams()
    resolution = int(resolution)
    if resolution < 3:
        raise ValueError("resolution must be at least 3")
    S = chart.coordinates(resolution)
    h = chart.spacing(resolution)
    margin = 1.5 * h if margin is None else float(margin)
    bad_pts = _chart_bad_points(F, z, chart)
    flags = np.zeros(S.shape, dtype=np.int8)
    for b in bad_pts:
        flags[np.abs(S - b) <= margin] = 2
    lam = chart.to_lambda(S)
    flags[~np.isfinite(lam)] = 2
    G = np.full(S.shape, np.nan)
    E = np.full(S.shape, np.inf)
    ok = flags != 2
    if _is_exact_cycle(F, z):
        G[ok] = 0.0
        E[ok] = 0.0
    else:
        lam_ok = lam[ok]
        with np.errstate(all="ignore"):
            x0 = z.x.evaluate_numeric(lam_ok)
            y0 = z.y.evaluate_numeric(lam_ok)
        g, e, fl = _green_core(F, lam_ok, np.broadcast_to(x0, lam_ok.shape), np.broadcast_to(y0, lam_ok.shape), params)
        G[ok] = g
        E[ok] = e
        sub = flags[ok]
        sub[:] = fl
        flags[ok] = sub
        bad = ~np.isfinite(G) & ok
        flags[bad] = 2
    return GreenGrid(chart, resolution, G, E, flags, S, bad_pts)


# ---------------------------------------------------------------------------
# bifurcation mass
# ---------------------------------------------------------------------------

@dataclass
class MassReport:
    mass: float
    err_bound: float
    cell_error: float = 0.0
    discretization: float = 0.0
    hole_error: float = 0.0
    interior_cells: int = 0
    poles: list = field(default_factory=list)

    def to_dict(self):
        return {
            "mass": self.mass,
            "errBound": self.err_bound,
            "components": {
                "cell_error": self.cell_error,
                "discretization": self.discretization,
                "excluded_regions": self.hole_error,
            },
            "interior_cells": self.interior_cells,
            "poles": self.poles,
        }

    def __iter__(self):
        return iter((self.mass, self.err_bound))


def _interior(valid):
    inner = np.zeros_like(valid)
    inner[1:-1, 1:-1] = (
        valid[1:-1, 1:-1] & valid[2:, 1:-1] & valid[:-2, 1:-1] & valid[1:-1, 2:] & valid[1:-1, :-2]
    )
    return inner


def _laplacian_sum(G, inner):
    L = np.zeros_like(G)
    c = G[1:-1, 1:-1]
    L[1:-1, 1:-1] = G[2:, 1:-1] + G[:-2, 1:-1] + G[1:-1, 2:] + G[1:-1, :-2] - 4 * c
    return math.fsum(L[inner].tolist())


def _flux_error(E, inner):
    """Sum of (e_C + e_N) over edges from interior cells to non-interior neighbours."""
    total = []
    R0, R1 = inner.shape
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        src = np.zeros_like(inner)
        dst_inner = np.zeros_like(inner)
        a = slice(max(0, -di), R0 - max(0, di))
        b = slice(max(0, -dj), R1 - max(0, dj))
        an = slice(max(0, di), R0 - max(0, -di))
        bn = slice(max(0, dj), R1 - max(0, -dj))
        src[a, b] = inner[a, b]
        dst_inner[a, b] = inner[an, bn]
        edge = src & ~dst_inner
        En = np.zeros_like(E)
        En[a, b] = E[an, bn]
        total.append(math.fsum((E[edge] + En[edge]).tolist()))
    return math.fsum(total)


def _label(mask):
    """4-connected component labels of a boolean array (0 = background)."""
    lab = np.zeros(mask.shape, dtype=np.int32)
    cur = 0
    R0, R1 = mask.shape
    for i0, j0 in zip(*np.nonzero(mask)):
        if lab[i0, j0]:
            continue
        cur += 1
        stack = [(i0, j0)]
        lab[i0, j0] = cur
        while stack:
            i, j = stack.pop()
            for a, b in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
                if 0 <= a < R0 and 0 <= b < R1 and mask[a, b] and not lab[a, b]:
                    lab[a, b] = cur
                    stack.append((a, b))
    return lab, cur


def _dilate(mask):
    out = mask.copy()
    out[1:, :] |= mask[:-1, :]
    out[:-1, :] |= mask[1:, :]
    out[:, 1:] |= mask[:, :-1]
    out[:, :-1] |= mask[:, 1:]
    return out


def _hole_terms(grid, valid, inner):
    """Mass estimates for excluded regions enclosed by valid cells.

    For each enclosed component H, the flux through the curve between the
    first and second rings of valid cells around H measures 2π times the
    mass inside it, pole included.  A least-squares fit
    ``G ~ a + b log|s - s0| + linear`` on the first three rings estimates the
    pole part b; the difference is the unresolved mass near the pole.
    """
    excluded = ~valid
    lab, n = _label(excluded)
    R0, R1 = excluded.shape
    out = []
    for k in range(1, n + 1):
        comp = lab == k
        ii, jj = np.nonzero(comp)
        if ii.min() == 0 or jj.min() == 0 or ii.max() == R0 - 1 or jj.max() == R1 - 1:
            continue
        ring1 = _dilate(comp) & ~comp
        ring2 = _dilate(comp | ring1) & ~(comp | ring1)
        ring3 = _dilate(comp | ring1 | ring2) & ~(comp | ring1 | ring2)
        if not (valid[ring1].all() and valid[ring2].all() and valid[ring3].all()):
            continue
        # flux through the curve separating ring2 from ring1
        flux = []
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            for i, j in zip(*np.nonzero(ring2)):
                a, b = i + di, j + dj
                if 0 <= a < R0 and 0 <= b < R1 and ring1[a, b]:
                    flux.append(grid.G[i, j] - grid.G[a, b])
        F2 = math.fsum(flux)
        S = grid.coords
        cs = S[comp]
        s0 = complex(np.mean(cs))
        if grid.bad_points:
            cand = [b for b in grid.bad_points if np.min(np.abs(cs - b)) <= 2 * grid.spacing]
            if cand:
                s0 = complex(cand[0])
        fitmask = ring1 | ring2 | ring3
        sv = S[fitmask] - s0
        A = np.column_stack([np.ones(sv.size), np.log(np.abs(sv)), sv.real, sv.imag])
        coef, *_ = np.linalg.lstsq(A, grid.G[fitmask], rcond=None)
        b = float(coef[1])
        enclosed = F2 / (2 * math.pi)
        out.append({
            "location": [s0.real, s0.imag],
            "pole_coefficient": -b,
            "enclosed_mass": enclosed,
            "unresolved_mass": enclosed - b,
            "cells": int(comp.sum()),
        })
    return out


def _mass_only(G, valid):
    inner = _interior(valid)
    return _laplacian_sum(np.where(valid, G, 0.0), inner) / (2 * math.pi), inner


def bif_mass(grid):
    """Total dd^c mass of the grid values with an error bound.

    mass = sum over interior cells of the 5-point Laplacian / 2π, so that
    dd^c log|λ| is the unit point mass.  Interior means the cell and its four
    neighbours are valid (Converged or Truncated).  Point masses at excluded
    cells enclosed by valid ones are not counted: the discrete flux around
    such a hole is replaced by the fitted logarithmic pole.
    """
    valid = grid.valid_mask()
    G = np.where(valid, grid.G, 0.0)
    E = np.where(valid, grid.err, 0.0)
    inner = _interior(valid)
    count = int(inner.sum())
    if count < 9:
        raise InsufficientGrid(f"only {count} valid interior cells (need 9)")
    mass = _laplacian_sum(G, inner) / (2 * math.pi)
    cell_err = _flux_error(E, inner) / (2 * math.pi)
    disc = 0.0
    if grid.resolution >= 12:
        coarse_valid = valid[::2, ::2]
        if int(_interior(coarse_valid).sum()) >= 9:
            m2, _ = _mass_only(G[::2, ::2], coarse_valid)
            disc = abs(mass - m2)
    holes = _hole_terms(grid, valid, inner)
    # replace the discrete flux around each hole by the fitted pole flux, so
    # the reported mass excludes point masses at excluded parameters
    correction = math.fsum(h["unresolved_mass"] for h in holes)
    hole_err = math.fsum(abs(h["unresolved_mass"]) for h in holes)
    total = cell_err + disc + hole_err
    return MassReport(mass + correction, total, cell_err, disc, hole_err, count, holes)


def total_mass(grids):
    reports = [bif_mass(g) for g in grids]
    mass = math.fsum(r.mass for r in reports)
    err = math.fsum(r.err_bound for r in reports)
    return mass, err, reports


# ---------------------------------------------------------------------------
# stability probe
# ---------------------------------------------------------------------------

@dataclass
class StabilityReport:
    degrees_bounded: bool
    green_constant: bool
    mass_matches_height: bool
    stable_by_mass: bool
    h_plus: str
    mass: float
    mass_err: float
    green_mean: float
    green_variance: float
    verdict: str
    charts: list = field(default_factory=list)

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "degrees_bounded": self.degrees_bounded,
            "green_constant": self.green_constant,
            "stable_by_mass": self.stable_by_mass,
            "mass_matches_height": self.mass_matches_height,
            "hPlus": self.h_plus,
            "mass": self.mass,
            "massErrBound": self.mass_err,
            "green_mean": self.green_mean,
            "green_variance": self.green_variance,
            "charts": self.charts,
        }


def stability_probe(F, z, charts=None, resolution=200, params=None, tolerance=1e-6,
                    relative_slack=0.1, hplus=None, grids=None):
    """Run the three stability tests and report whether they agree.

    (a) bounded degree sequence (certified ĥ⁺ = 0), (b) G+ of the marked
    point constant over the charts (variance <= tolerance * max(mean², 1)),
    (c) |ĥ⁺ - mass| <= errBound + relative_slack * ĥ⁺.
    """
    from .heights import canonical_height_plus

    charts = default_charts() if charts is None else charts
    if hplus is None:
        hplus = canonical_height_plus(F, z)
    if grids is None:
        grids = [green_marked(F, z, c, resolution, params) for c in charts]
    mass, err, reports = total_mass(grids)
    vals = np.concatenate([g.G[g.valid_mask()] for g in grids])
    mean = float(np.mean(vals)) if vals.size else 0.0
    var = float(np.var(vals)) if vals.size else 0.0
    bounded = hplus.is_zero()
    constant = var <= tolerance * max(mean * mean, 1.0)
    hv = float(hplus.value)
    matches = abs(hv - mass) <= err + relative_slack * hv
    stable_mass = abs(mass) <= err + tolerance
    consistent = (bounded == constant == stable_mass) and matches
    return StabilityReport(
        degrees_bounded=bounded,
        green_constant=constant,
        mass_matches_height=matches,
        stable_by_mass=stable_mass,
        h_plus=str(hplus.value),
        mass=mass,
        mass_err=err,
        green_mean=mean,
        green_variance=var,
        verdict="Consistent" if consistent else "Discrepant",
        charts=[dict(chart=c.to_dict(), **r.to_dict()) for c, r in zip(charts, reports)],
    )
