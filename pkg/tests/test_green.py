import math

import numpy as np
import pytest

from henonheights.errors import InsufficientGrid, NearBadParam
from henonheights.family import henon, parse_point, specialize
from henonheights.green import (
    CONVERGED,
    _factor_radius,
    Chart,
    EscapeParams,
    GreenGrid,
    bif_mass,
    escape_radius,
    green_marked,
    green_plus,
    green_plus_array,
    parse_chart,
    stability_probe,
    total_mass,
)

F = henon("y^2 + t")
G = henon("y^2 - t^2")
ORIGIN = parse_point("0", "0")
FIXED = parse_point("t", "t")


def test_escape_radius_examples():
    assert escape_radius(henon("y^2"), 0) == 2
    assert escape_radius(F, 100) == 102
    with pytest.raises(NearBadParam):
        escape_radius(henon("y^2", a="t"), 0)


def test_escape_params_validation():
    with pytest.raises(ValueError):
        EscapeParams(max_iter=0)
    with pytest.raises(ValueError):
        EscapeParams(radius=1.5)


def test_green_examples():
    g = green_plus(henon("y^2"), 0, (0, 1e6))
    assert abs(g.value - math.log(1e6)) <= 1e-6 and g.flag == CONVERGED
    g = green_plus(G, 1.5, (1.5, 1.5))
    assert g.value == 0 and g.err_bound < 1e-12


def test_dominance_property():
    rng = np.random.default_rng(0)
    checked = 0
    for _ in range(1000):
        d = int(rng.integers(2, 5))
        a = complex(rng.normal(), rng.normal()) * 2
        p = [complex(rng.normal(), rng.normal()) * 3 for _ in range(d)] + [complex(rng.choice([-2, 1, 3]))]
        R = _factor_radius(a, p)
        r = R * (1 + rng.exponential())
        ang = rng.uniform(0, 2 * math.pi, 2)
        y = r * np.exp(1j * ang[0])
        x = r * rng.uniform(0, 1) * np.exp(1j * ang[1])
        y1 = x + sum(c * y**j for j, c in enumerate(p))
        x1 = a * y
        assert abs(y1) >= abs(p[-1]) * abs(y) ** d / 2 * (1 - 1e-12)
        assert abs(y1) >= abs(x1) * (1 - 1e-12)
        assert abs(y1) >= abs(y)
        checked += 1
    assert checked == 1000


def test_green_functional_equation_pointwise():
    rng = np.random.default_rng(1)
    lam = rng.uniform(-3, 3, 200) + 1j * rng.uniform(-3, 3, 200)
    x = rng.uniform(-3, 3, 200) + 1j * rng.uniform(-3, 3, 200)
    y = rng.uniform(-3, 3, 200) + 1j * rng.uniform(-3, 3, 200)
    g0, e0, f0 = green_plus_array(F, lam, x, y)
    u, v = specialize(F, lam, check=False).apply(x, y)
    g1, e1, f1 = green_plus_array(F, lam, u, v)
    ok = (f0 == 0) & (f1 == 0) & (g0 > 0)
    assert ok.sum() > 100
    assert np.all(np.abs(g1 - 2 * g0)[ok] <= 2 * np.maximum(e1, 2 * e0)[ok])


def test_chart_parsing():
    assert parse_chart("1,2,3") == Chart(1 + 2j, 3.0, False)
    assert parse_chart("inf,0.5") == Chart(0j, 0.5, True)
    with pytest.raises(ValueError):
        parse_chart("1,2")


def test_green_marked_positive_and_refinement_stable():
    chart = Chart(5 + 0j, 2.0)
    g1 = green_marked(F, ORIGIN, chart, 10)
    g3 = green_marked(F, ORIGIN, chart, 30)
    assert np.all(g1.G > 0)
    assert np.all(g1.flags == 0)
    assert np.array_equal(g1.G, g3.G[1::3, 1::3])
    assert np.array_equal(g1.err, g3.err[1::3, 1::3])


def test_monotone_error_in_iterations():
    chart = Chart(0j, 2.0)
    prev = None
    for mi in (3, 8, 20, 60, 200):
        g = green_marked(F, ORIGIN, chart, 24, EscapeParams(max_iter=mi))
        if prev is not None:
            assert np.all(g.err <= prev * (1 + 1e-12) + 1e-300)
        prev = g.err


def _lg(s):
    return np.log(np.abs(s))


def test_bif_mass_synthetic():
    assert abs(bif_mass(GreenGrid.from_function(_lg, Chart(0j, 1.0), 100)).mass - 1) <= 0.02
    r = bif_mass(GreenGrid.from_function(_lg, Chart(3 + 0j, 1.0), 100))
    assert abs(r.mass) <= max(r.err_bound, 1e-9)
    annulus = GreenGrid.from_function(_lg, Chart(0j, 1.0), 100, exclude=lambda s: np.abs(s) < 0.3)
    r = bif_mass(annulus)
    assert abs(r.mass) <= r.err_bound + 1e-9
    assert r.poles and abs(r.poles[0]["pole_coefficient"] + 1) < 1e-6


def test_bif_mass_circle_measure():
    # max(log|s|, 0) carries the unit mass on the circle
    r = bif_mass(GreenGrid.from_function(lambda s: np.maximum(_lg(s), 0), Chart(0j, 2.0), 200))
    assert abs(r.mass - 1) <= 0.02


def test_insufficient_grid():
    g = GreenGrid.from_function(_lg, Chart(0j, 1.0), 4)
    with pytest.raises(InsufficientGrid):
        bif_mass(g)


def test_mass_of_fixed_point_is_zero():
    grids = [green_marked(G, FIXED, c, 40) for c in (Chart(0j, 8.0), Chart(0j, 0.125, True))]
    mass, err, _ = total_mass(grids)
    assert abs(mass) <= err


def test_mass_of_origin_is_half():
    grids = [green_marked(F, ORIGIN, c, 100) for c in (Chart(0j, 8.0), Chart(0j, 0.125, True))]
    mass, err, _ = total_mass(grids)
    assert abs(mass - 0.5) <= 0.05
    assert abs(mass - 0.5) <= err


def test_grid_exports():
    g = green_marked(F, ORIGIN, Chart(0j, 1.0), 7)
    lines = g.to_csv().splitlines()
    assert lines[0] == "re(λ),im(λ),G,errBound,flag"
    assert len(lines) == 1 + 49
    d = g.to_dict()
    assert d["resolution"] == 7 and len(d["G"]) == 7


def test_bad_parameter_cells_flagged():
    H = henon("y^2", a="t - 1")
    g = green_marked(H, ORIGIN, Chart(1 + 0j, 0.5), 20)
    names = g.flag_names()
    assert (names == "NearBadParam").any()
    assert (names == "NearBadParam").sum() < 40


@pytest.mark.parametrize("family, point, stable", [(F, ORIGIN, False), (G, FIXED, True), (henon("y^2"), parse_point(1, 1), True)])
def test_stability_probe(family, point, stable):
    rep = stability_probe(family, point, resolution=80)
    assert rep.verdict == "Consistent"
    assert rep.degrees_bounded == stable and rep.green_constant == stable
