from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from henonheights.errors import ParseError
from henonheights.parsing import parse_bivariate, parse_poly_in_y, parse_ratfunc
from henonheights.points import PointK, homogenize, naive_height
from henonheights.ratfunc import RatFunc
from henonheights.unipoly import (
    UniPoly,
    extended_gcd,
    interpolate,
    poly_gcd,
    poly_lcm,
    poly_resultant,
    squarefree_part,
    subresultant_gcd,
)

from oracles import from_sp, sp_height, sp_poly, sp_rat, sylvester_resultant, t

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=6)
polys = st.lists(fracs, max_size=7).map(UniPoly)
small_polys = st.lists(st.integers(-6, 6), max_size=5).map(UniPoly)
nonzero_polys = polys.filter(bool)


def P(*c):
    return UniPoly(list(c))


# -- UniPoly ------------------------------------------------------------------

def test_gcd_examples():
    assert poly_gcd(P(-1, 0, 1), P(-1, 1)) == P(-1, 1)
    p = P(3, 0, 6)
    assert poly_gcd(UniPoly(), p) == p.monic()
    a, b = P(0, 2, 0, 1), P(1, 0, 1)
    assert poly_gcd(a, b) == P(1)
    assert poly_resultant(a, b) != 0


def test_zero_gcd_is_zero():
    assert poly_gcd(UniPoly(), UniPoly()).is_zero()


@settings(max_examples=800, deadline=None)
@given(polys, polys, small_polys.filter(bool))
def test_gcd_invariants(a, b, c):
    A, B = a * c, b * c
    g = poly_gcd(A, B)
    if A or B:
        assert g.lc == 1
        assert g.divides(A) and g.divides(B)
        assert c.monic().divides(g)
        assert (A.exquo(g) if A else UniPoly()) * g == A
        u = poly_gcd(A.exquo(g), B.exquo(g)) if A and B else None
        if u is not None:
            assert u.is_one()
    assert g == subresultant_gcd(A, B)
    assert g == poly_gcd(B, A)


@settings(max_examples=600, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - b) + b == a
    assert (a * b) * c == a * (b * c)


@settings(max_examples=800, deadline=None)
@given(polys, nonzero_polys)
def test_division_identity(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree
    assert (a * b).exquo(b) == a


@settings(max_examples=200, deadline=None)
@given(polys, polys)
def test_gcd_matches_sympy(a, b):
    g = poly_gcd(a, b)
    if not (a or b):
        return
    expect = sp.Poly(sp.gcd(sp_poly(a), sp_poly(b)), t).monic().as_expr()
    assert sp.expand(sp_poly(g) - expect) == 0


@settings(max_examples=150, deadline=None)
@given(nonzero_polys, nonzero_polys)
def test_resultant_matches_sylvester(a, b):
    if a.degree < 1 or b.degree < 1:
        return
    r = poly_resultant(a, b)
    assert sp.Rational(r.numerator, r.denominator) == sylvester_resultant(a, b)


@settings(max_examples=300, deadline=None)
@given(nonzero_polys, nonzero_polys)
def test_extended_gcd_bezout(a, b):
    g, s, u = extended_gcd(a, b)
    assert s * a + u * b == g
    assert g == poly_gcd(a, b)


@settings(max_examples=300, deadline=None)
@given(nonzero_polys, nonzero_polys)
def test_lcm(a, b):
    L = poly_lcm(a, b)
    assert a.divides(L) and b.divides(L)
    assert L * poly_gcd(a, b) == (a * b).monic()


def test_squarefree_and_interpolate():
    p = P(-1, 1) ** 3 * P(2, 0, 1)
    assert squarefree_part(p) == (P(-1, 1) * P(2, 0, 1)).monic()
    xs = [0, 1, 2, 3]
    q = P(1, -2, 0, 5)
    assert interpolate(xs, [q(Fraction(x)) for x in xs]) == q


def test_large_gcd():
    import random

    rng = random.Random(7)
    big = lambda n, b: UniPoly([rng.randint(-b, b) for _ in range(n)] + [1])
    a, b, c = big(120, 2**80), big(120, 2**80), big(60, 2**40)
    assert poly_gcd(a * c, b * c) == c.monic()


def test_to_str():
    assert P(-1, 0, 1).to_str() == "t^2 - 1"
    assert P(1, 0, -1).to_str() == "-t^2 + 1"
    assert UniPoly().to_str() == "0"


# -- RatFunc --------------------------------------------------------------------

rats = st.tuples(polys, nonzero_polys).map(lambda nd: RatFunc(*nd))


@settings(max_examples=400, deadline=None)
@given(rats, rats, rats)
def test_ratfunc_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a - a == RatFunc()
    if a:
        assert a * a.inverse() == RatFunc(1)
    assert a.den.lc == 1
    assert poly_gcd(a.num, a.den).is_one() or not a.num


@settings(max_examples=80, deadline=None)
@given(rats, rats)
def test_ratfunc_matches_sympy(a, b):
    assert sp.cancel(sp_rat(a * b) - sp_rat(a) * sp_rat(b)) == 0
    assert sp.cancel(sp_rat(a + b) - sp_rat(a) - sp_rat(b)) == 0
    assert from_sp(sp_rat(a)) == a


def test_ratfunc_strings():
    lam = RatFunc.gen()
    assert lam.inverse().to_str() == "1/t"
    assert (lam + 1).to_str("λ") == "λ + 1"


# -- points and heights ------------------------------------------------------------

def test_homogenize_examples():
    lam = RatFunc.gen()
    z = homogenize(PointK(0, 0))
    assert (z.X, z.Y, z.W) == (UniPoly(), UniPoly(), P(1))
    z = homogenize(PointK(lam, lam * lam))
    assert (z.X, z.Y, z.W) == (P(0, 1), P(0, 0, 1), P(1))
    z = homogenize(PointK(lam.inverse(), lam))
    assert (z.X, z.Y, z.W) == (P(1), P(0, 0, 1), P(0, 1))


def test_naive_height_example():
    z = PointK(parse_ratfunc("t^2 + t"), parse_ratfunc("t^4 + 2t^3 + t^2 + 2t"))
    assert naive_height(z) == 4


@settings(max_examples=150, deadline=None)
@given(rats, rats)
def test_naive_height_matches_sympy(a, b):
    assert naive_height(PointK(a, b)) == sp_height(sp_rat(a), sp_rat(b))


@settings(max_examples=250, deadline=None)
@given(rats, rats)
def test_homogenize_coprime_and_invariant(a, b):
    z = homogenize(PointK(a, b))
    g = poly_gcd(poly_gcd(z.X, z.Y), z.W)
    assert g.is_one()
    assert RatFunc(z.X, z.W) == a and RatFunc(z.Y, z.W) == b


# -- parser -----------------------------------------------------------------------

def test_parse_basics():
    q = parse_bivariate("x + y^2 - λ^2")
    assert q == parse_bivariate("y*y + x - t*t")
    assert q.total_degree == 2 and q.deg_x == 1
    assert parse_ratfunc("(t+1)/(t-1)") == RatFunc(P(1, 1), P(-1, 1))
    assert parse_ratfunc("2t^2 - 3") == RatFunc(P(-3, 0, 2))
    assert parse_ratfunc("2**3**2") == RatFunc(512)
    assert parse_ratfunc("0.25") == RatFunc(Fraction(1, 4))
    p = parse_poly_in_y("y^3 + lambda y + 1")
    assert len(p) == 4 and p[1] == RatFunc.gen()


@pytest.mark.parametrize("text, pos", [("y^2 + * t", 6), ("(y + 1", 6), ("y^-1", 2), ("x / y", 4), ("z + 1", 0)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_bivariate(text)
    assert info.value.position == pos
    assert info.value.pointer().splitlines()[0] == text


@settings(max_examples=500, deadline=None)
@given(rats)
def test_parse_print_round_trip(a):
    assert parse_ratfunc(a.to_str()) == a
