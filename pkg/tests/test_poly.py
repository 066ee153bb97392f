import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsplit.poly import (ParseError, Poly, PolyVec, mono_key,
                         monomials_below, monomials_of_degree, parse)

P = 101
VARS = ("x", "y", "z")


def rand_poly(draw_terms):
    coeffs = {}
    for m, c in draw_terms:
        coeffs[m] = (coeffs.get(m, 0) + c) % P
    return Poly(coeffs, 3, P)


monos = st.tuples(*[st.integers(min_value=0, max_value=3)] * 3)
terms = st.lists(st.tuples(monos, st.integers(min_value=1, max_value=P - 1)),
                 min_size=0, max_size=5)
polys = st.builds(rand_poly, terms)


@given(polys, polys, polys)
@settings(max_examples=80)
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert (f + g) + h == f + (g + h)
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == Poly.zero(3, P)


@given(polys)
@settings(max_examples=80)
def test_to_string_parse_round_trip(f):
    assert parse(f.to_string(VARS), VARS, P) == f


@given(polys, polys)
@settings(max_examples=80)
def test_initial_form_multiplicative(f, g):
    prod = f * g
    if prod.is_zero():
        return
    # over a field there are no zero divisors, so initial forms multiply
    assert prod.initial_form() == f.initial_form() * g.initial_form()
    assert prod.order() == f.order() + g.order()


@given(polys)
@settings(max_examples=40)
def test_truncate_drops_high_degrees(f):
    t = f.truncate(2)
    assert all(sum(m) < 2 for m in t.coeffs)
    assert (f - t).order() >= 2 or (f - t).is_zero()


def test_monomial_counts():
    # dim of degree-d part of k[x1..xv] is C(d+v-1, v-1)
    assert len(monomials_of_degree(2, 3)) == 4
    assert len(monomials_of_degree(3, 2)) == 6
    assert len(monomials_below(2, 4)) == 1 + 2 + 3 + 4
    assert len(monomials_below(3, 3)) == 1 + 3 + 6


def test_mono_key_is_deg_lex():
    ms = [(0, 2), (1, 0), (2, 0), (0, 0), (1, 1), (0, 1)]
    ms.sort(key=mono_key)
    assert ms == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_parse_examples():
    f = parse("x^2 - y^3", ("x", "y"), P)
    assert f.coeffs == {(2, 0): 1, (0, 3): P - 1}
    g = parse("-1*x + 2*(y + x)^2", ("x", "y"), P)
    assert g.coeffs[(1, 0)] == P - 1
    assert g.coeffs[(2, 0)] == 2
    assert g.coeffs[(1, 1)] == 4
    assert parse("0", ("x",), P).is_zero()
    assert parse("7", ("x",), P).constant_term() == 7


def test_parse_unknown_variable():
    with pytest.raises(ParseError) as exc:
        parse("x + w", ("x", "y"), P)
    assert exc.value.position == 5


def test_parse_implicit_multiplication_rejected():
    with pytest.raises(ParseError):
        parse("2x", ("x",), P)
    with pytest.raises(ParseError):
        parse("x y", ("x", "y"), P)


def test_parse_unbalanced_paren():
    with pytest.raises(ParseError):
        parse("(x + y", ("x", "y"), P)


def test_parse_empty_input():
    with pytest.raises(ParseError):
        parse("", ("x",), P)
    with pytest.raises(ParseError):
        parse("   ", ("x",), P)


def test_poly_unit_and_order():
    f = parse("1 + x", ("x", "y"), P)
    assert f.is_unit()
    assert f.order() == 0
    g = parse("x*y + x^3", ("x", "y"), P)
    assert not g.is_unit()
    assert g.order() == 2
    assert g.degree() == 3


def test_shift_vars_embeds():
    f = parse("x*y", ("x", "y"), P)
    g = f.shift_vars(3)
    assert g.coeffs == {(1, 1, 0): 1}
    with pytest.raises(ValueError):
        f.shift_vars(1)


def test_polyvec_arithmetic():
    a = PolyVec([parse("x", VARS, P), parse("y", VARS, P)])
    b = PolyVec([parse("-1*x", VARS, P), parse("z", VARS, P)])
    s = a + b
    assert s[0].is_zero()
    assert s[1] == parse("y + z", VARS, P)
    assert (a - a).is_zero()
    scaled = a.scale_poly(parse("z", VARS, P))
    assert scaled[0] == parse("x*z", VARS, P)
    assert len(a) == 2 and a.nvars == 3 and a.p == P
