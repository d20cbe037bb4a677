from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chowcalc.errors import EngineError, ParseError, RingMismatchError
from chowcalc.fields import GF, QQ, field_from_name
from chowcalc.polyring import (BlockOrder, PolynomialRing, elimination_order,
                               grevlex, lex, mono_div, mono_divides, mono_lcm,
                               monomial_compare, transport)


def ring_xy():
    return PolynomialRing(QQ, ("x", "y"))


# ---------------------------------------------------------------------------
# fields

def test_field_basics():
    assert QQ.coerce(3) == Fraction(3)
    assert QQ.fraction(1, 2) == Fraction(1, 2)
    F7 = GF(7)
    assert F7.coerce(-3) == 4
    assert F7.inv(3) == 5
    assert F7.fraction(3, 2) == F7.mul(3, F7.inv(2))
    with pytest.raises(EngineError):
        GF(6)
    with pytest.raises(EngineError):
        QQ.fraction(1, 0)
    assert field_from_name("QQ") == QQ
    assert field_from_name("Fp:7") == F7
    assert field_from_name("Fp(7)") == F7


# ---------------------------------------------------------------------------
# orders

def test_order_examples():
    # two variables x > y
    x2y = (2, 1)
    xy2 = (1, 2)
    assert monomial_compare(x2y, xy2, grevlex) == 1
    # lex in two variables: y^5 < x
    assert monomial_compare((0, 5), (1, 0), lex) == -1
    # block order with {y} first flips that
    blk = BlockOrder([((1,), grevlex), ((0,), grevlex)])
    assert monomial_compare((0, 5), (1, 0), blk) == 1
    assert monomial_compare((1, 1), (1, 1), grevlex) == 0


def test_elimination_order_property():
    order = elimination_order((1,), 2)  # eliminate y
    # any monomial containing y beats any monomial without
    assert monomial_compare((0, 1), (9, 0), order) == 1


def test_monomial_helpers():
    assert mono_lcm((2, 0), (1, 1)) == (2, 1)
    assert mono_divides((1, 0), (2, 1))
    assert not mono_divides((3, 0), (2, 1))
    assert mono_div((2, 1), (1, 0)) == (1, 1)


exps2 = st.tuples(st.integers(0, 4), st.integers(0, 4))


@given(a=exps2, b=exps2, m=exps2)
def test_orders_total_and_multiplicative(a, b, m):
    for order in (grevlex, lex, elimination_order((0,), 2)):
        ka, kb = order.key(a), order.key(b)
        assert (ka == kb) == (a == b)
        c = monomial_compare(a, b, order)
        # multiplicative: scaling by m preserves the comparison
        am = tuple(x + y for x, y in zip(a, m))
        bm = tuple(x + y for x, y in zip(b, m))
        assert monomial_compare(am, bm, order) == c
        # 1 is the minimum (well-foundedness for monomial orders)
        assert monomial_compare(a, (0, 0), order) >= 0


# ---------------------------------------------------------------------------
# parsing and printing

def test_parse_print_example():
    R = ring_xy()
    p = R.parse("x^2*y - 3*x")
    assert str(p) == "x^2*y - 3*x"
    assert p.terms == (((2, 1), Fraction(1)), ((1, 0), Fraction(-3)))


def test_parse_parenthesized():
    R = ring_xy()
    assert R.parse("(x + y)*(x - y)") == R.parse("x^2 - y^2")


def test_parse_fractions_and_signs():
    R = ring_xy()
    p = R.parse("-1/2*x + y^2")
    assert str(p) == "y^2 - 1/2*x"
    assert R.parse(str(p)) == p
    assert R.parse("3/2") == R.const(Fraction(3, 2))
    assert R.parse("-x") == -R.var("x")


def test_parse_errors():
    R = ring_xy()
    with pytest.raises(ParseError):
        R.parse("x/2")  # division only inside literal fractions
    with pytest.raises(ParseError):
        R.parse("1/0")
    with pytest.raises(ParseError):
        R.parse("z + 1")
    with pytest.raises(ParseError):
        R.parse("x +")
    with pytest.raises(ParseError):
        R.parse("x ^ y")
    with pytest.raises(ParseError):
        R.parse("2*3")


def test_print_edge_cases():
    R = ring_xy()
    assert str(R.zero) == "0"
    assert str(R.one) == "1"
    assert str(R.parse("x")) == "x"
    assert str(R.parse("0 - x")) == "-x"
    assert str(R.parse("2*x*y")) == "2*x*y"
    assert str(R.const(Fraction(-3, 4))) == "-3/4"


def test_fp_parse_print():
    R = PolynomialRing(GF(7), ("x",))
    p = R.parse("x + 6*x")
    assert p.is_zero()
    q = R.parse("0 - 3*x")
    assert str(q) == "4*x"
    assert R.parse(str(q)) == q
    assert R.parse("3/2*x") == R.parse("5*x")  # 2^{-1} = 4, 3*4 = 12 = 5


# ---------------------------------------------------------------------------
# arithmetic

def test_ring_basics():
    R = ring_xy()
    x, y = R.gens()
    assert (x + y) - y == x
    assert (x + y) * (x - y) == x * x - y * y
    assert x * R.zero == R.zero
    assert (x + 1) ** 3 == R.parse("x^3 + 3*x^2 + 3*x + 1")
    assert 2 * x == x + x
    assert x.total_degree() == 1
    assert R.zero.total_degree() == -1


def test_canonical_storage():
    R = ring_xy()
    x, y = R.gens()
    a = (x + y) - y
    assert a.terms == x.terms
    assert hash(a) == hash(x)


def test_ring_mismatch():
    R = ring_xy()
    S = PolynomialRing(QQ, ("x", "z"))
    with pytest.raises(RingMismatchError):
        R.var("x") + S.var("x")


def test_diff():
    R = ring_xy()
    p = R.parse("x^3*y + 2*x")
    assert p.diff("x") == R.parse("3*x^2*y + 2")
    assert p.diff("y") == R.parse("x^3")


def test_substitute():
    R = ring_xy()
    S = PolynomialRing(QQ, ("t",))
    t = S.var("t")
    p = R.parse("y - x^2")
    assert p.substitute([t, t ** 2], S).is_zero()
    assert R.parse("x + y").substitute([t, S.one], S) == t + 1


def test_transport():
    R = ring_xy()
    S = PolynomialRing(QQ, ("x", "y", "z"))
    p = R.parse("x^2 - y")
    q = transport(p, S)
    assert str(q) == "x^2 - y"
    back = transport(q, R)
    assert back == p
    with pytest.raises(EngineError):
        transport(S.var("z"), R)
    T = PolynomialRing(QQ, ("u", "v"))
    assert str(transport(p, T, rename={"x": "u", "y": "v"})) == "u^2 - v"


def test_monic_and_leading():
    R = ring_xy()
    p = R.parse("2*x^2 + x")
    assert p.lm() == (2, 0)
    assert p.lc() == Fraction(2)
    assert p.monic() == R.parse("x^2 + 1/2*x")


small_coeff = st.integers(-4, 4)


def polys(ring, max_terms=4):
    term = st.tuples(
        st.tuples(*(st.integers(0, 3) for _ in range(ring.nvars))), small_coeff)
    return st.lists(term, max_size=max_terms).map(
        lambda items: ring.from_dict(
            {e: sum(c for e2, c in items if e2 == e) for e, _ in items}))


R2 = PolynomialRing(QQ, ("x", "y"))


@settings(max_examples=60)
@given(a=polys(R2), b=polys(R2), c=polys(R2))
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + R2.zero == a
    assert a * R2.one == a
    assert a - a == R2.zero


@settings(max_examples=60)
@given(p=polys(R2))
def test_round_trip(p):
    assert R2.parse(str(p)) == p


@settings(max_examples=60)
@given(p=polys(R2))
def test_terms_canonical(p):
    key = R2.order.key
    keys = [key(e) for e, c in p.terms]
    assert keys == sorted(keys, reverse=True)
    assert all(c != 0 for _, c in p.terms)
