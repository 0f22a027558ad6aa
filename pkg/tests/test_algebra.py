"""Exact-arithmetic foundation: rational functions, shifts, factorization."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from telesum.algebra import (
    MultiPoly,
    RationalFunction,
    factor_linear_rational,
    poly_gcd,
    rf_arith,
    shift_substitute,
    u_eval,
    u_mul,
    u_trim,
)
from telesum.errors import DivisionByZero, IrreducibleRemainder, UnknownSymbol


def sym(name):
    return RationalFunction.symbol(name)


n, k, a, b, c, d, e, f = (sym(s) for s in "nkabcdef")


class TestRationalFunctionArithmetic:
    def test_add_common_denominator(self):
        # n/(n+1) + 1/(n+1) == 1
        lhs = n / (n + 1)
        rhs = RationalFunction.const(1) / (n + 1)
        assert rf_arith(lhs, rhs, "add") == RationalFunction.const(1)

    def test_div_cancels_exactly(self):
        # (k^2 - 1)/(k - 1) == k + 1
        num = k * k - 1
        den = k - 1
        assert rf_arith(num, den, "div") == k + 1

    def test_inverse_pair(self):
        lhs = (a + k) / n
        rhs = n / (a + k)
        assert rf_arith(lhs, rhs, "mul") == RationalFunction.const(1)

    def test_division_by_zero(self):
        with pytest.raises(DivisionByZero):
            rf_arith(n, RationalFunction.const(0), "div")

    def test_canonical_denominator_sign(self):
        r = n / (RationalFunction.const(-2) * k)
        # denominator normalized primitive with positive leading coefficient
        assert r.den == MultiPoly.symbol("k")
        assert r == (-n) / (2 * k)


class TestShiftSubstitute:
    def test_simple_shift(self):
        assert shift_substitute(1 / n, "n", 1) == 1 / (n + 1)

    def test_linear_form_shift(self):
        # b - c - d + e + f - 2n, shifted in n by +1
        form = b - c - d + e + f - 2 * n
        expected = b - c - d + e + f - 2 * n - 2
        assert shift_substitute(form, "n", 1) == expected

    def test_independent_symbol_unchanged(self):
        r = (a + 1) / (b + 2)
        assert shift_substitute(r, "n", 5) == r

    def test_unknown_symbol(self):
        with pytest.raises(UnknownSymbol):
            shift_substitute(n, "x", 1)


rationals = st.fractions(min_value=-40, max_value=40, max_denominator=8)


@st.composite
def small_polys(draw):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        exp = [0] * 8
        for i in draw(st.lists(st.integers(0, 7), max_size=2)):
            exp[i] += draw(st.integers(0, 2))
        terms[tuple(exp)] = draw(rationals)
    return MultiPoly(terms)


@settings(max_examples=60, deadline=None)
@given(small_polys(), small_polys(), small_polys(), rationals)
def test_field_axioms_by_evaluation(p, q, r, point_seed):
    """Spot-check distributivity/associativity at random rational points."""
    if q.is_zero() or r.is_zero():
        return
    fp, fq, fr = RationalFunction(p), RationalFunction(q), RationalFunction(r)
    lhs = (fp + fq) * fr
    rhs = fp * fr + fq * fr
    assert lhs == rhs
    assoc_l = (fp * fq) * fr
    assoc_r = fp * (fq * fr)
    assert assoc_l == assoc_r


@settings(max_examples=60, deadline=None)
@given(small_polys(), small_polys(), st.sampled_from(list("nkabcdef")), st.integers(-3, 3))
def test_shift_inverse_roundtrip(pnum, pden, symbol, offset):
    if pden.is_zero():
        return
    rf = RationalFunction(pnum, pden)
    back = shift_substitute(shift_substitute(rf, symbol, offset), symbol, -offset)
    assert back == rf


@settings(max_examples=40, deadline=None)
@given(small_polys(), small_polys())
def test_gcd_divides_both(p, q):
    g = poly_gcd(p, q)
    if g.is_zero():
        assert p.is_zero() and q.is_zero()
        return
    if not p.is_zero():
        p.exact_div(g)
    if not q.is_zero():
        q.exact_div(g)


class TestFactorLinearRational:
    def test_quadratic_with_rational_roots(self):
        # 8j^2 + 12j + 4 = 8 (j + 1/2)(j + 1)
        content, roots = factor_linear_rational([4, 12, 8])
        assert content == 8
        assert roots == [Fraction(1, 2), Fraction(1)]

    def test_irreducible(self):
        with pytest.raises(IrreducibleRemainder):
            factor_linear_rational([1, 0, 1])  # j^2 + 1

    def test_constant(self):
        content, roots = factor_linear_rational([5])
        assert content == 5 and roots == []

    def test_zero_root(self):
        content, roots = factor_linear_rational([0, 0, 3])  # 3 j^2
        assert content == 3 and roots == [0, 0]


@st.composite
def root_lists(draw):
    count = draw(st.integers(0, 4))
    return [draw(st.fractions(min_value=-12, max_value=12, max_denominator=6)) for _ in range(count)],\
        draw(st.fractions(min_value=-9, max_value=9, max_denominator=4).filter(lambda x: x != 0))


@settings(max_examples=200, deadline=None)
@given(root_lists())
def test_factorization_roundtrip(data):
    """Re-expanding factor output reproduces the input exactly."""
    roots, content = data
    poly = u_trim([content])
    for r in roots:
        poly = u_mul(poly, (Fraction(r), Fraction(1)))
    got_content, got_roots = factor_linear_rational(poly)
    assert got_content == content
    assert sorted(got_roots) == sorted(Fraction(r) for r in roots)
    rebuilt = u_trim([got_content])
    for r in got_roots:
        rebuilt = u_mul(rebuilt, (r, Fraction(1)))
    assert rebuilt == poly


def test_u_eval_horner():
    p = u_trim([1, 2, 3])  # 3x^2 + 2x + 1
    assert u_eval(p, Fraction(1, 2)) == Fraction(3, 4) + 1 + 1
