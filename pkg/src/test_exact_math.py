# test_exact_math.py
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from errors import DomainError
from exact_math import (
    Dyadic, DyadicInterval, HalfLine, Poly, RatFn, count_real_roots, count_roots_halfline, interval_add, interval_mul,
    count_roots_interval, format_decimal, is_negative_on_halfline, negative_on_positive_halfline,
    ratfn_eval, round_rational, squarefree_part,
)

small_fractions = st.fractions(min_value=-50, max_value=50, max_denominator=64)
small_ints = st.integers(min_value=-20, max_value=20)


class TestDyadic:
    def test_normalises_to_odd_mantissa(self):
        d = Dyadic(12, -4)
        assert (d.mantissa, d.exponent) == (3, -2)
        assert d.to_fraction() == Fraction(3, 4)

    def test_text_encoding(self):
        assert Dyadic(3, -5).format() == '3/2^5'
        assert Dyadic.parse('3/2^5') == Dyadic(3, -5)
        assert Dyadic.parse('-7/2^0').to_fraction() == -7

    def test_malformed_text(self):
        with pytest.raises(DomainError):
            Dyadic.parse('3/5')

    def test_non_dyadic_fraction_rejected(self):
        with pytest.raises(DomainError):
            Dyadic.from_fraction(Fraction(1, 3))

    @given(st.integers(-10**6, 10**6), st.integers(-40, 40), st.integers(-10**6, 10**6), st.integers(-40, 40))
    def test_arithmetic_matches_fractions(self, m1, e1, m2, e2):
        x, y = Dyadic(m1, e1), Dyadic(m2, e2)
        assert (x + y).to_fraction() == x.to_fraction() + y.to_fraction()
        assert (x - y).to_fraction() == x.to_fraction() - y.to_fraction()
        assert (x * y).to_fraction() == x.to_fraction() * y.to_fraction()
        assert (x < y) == (x.to_fraction() < y.to_fraction())

    @given(st.fractions(min_value=-10, max_value=10), st.integers(2, 80))
    def test_directed_rounding_brackets_value(self, q, precision):
        lo = round_rational(q, precision, up=False)
        hi = round_rational(q, precision, up=True)
        assert lo.to_fraction() <= q <= hi.to_fraction()
        assert abs(lo.mantissa).bit_length() <= precision
        assert abs(hi.mantissa).bit_length() <= precision


class TestDyadicInterval:
    def test_from_rational_encloses(self):
        third = DyadicInterval.from_rational(Fraction(1, 3), 32)
        assert third.contains(Fraction(1, 3))
        assert 0 < third.width() <= Fraction(1, 2**31)

    def test_empty_interval_rejected(self):
        with pytest.raises(DomainError):
            DyadicInterval(1, 0)

    @given(small_fractions, small_fractions, small_fractions, small_fractions)
    def test_operations_are_sound(self, a, b, c, d):
        x = DyadicInterval.from_bounds(min(a, b), max(a, b), 24)
        y = DyadicInterval.from_bounds(min(c, d), max(c, d), 24)
        for u in (a, b):
            for v in (c, d):
                assert (x + y).contains(u + v)
                assert (x * y).contains(u * v)
                assert (x - y).contains(u - v)

    def test_subset_and_intersection(self):
        outer = DyadicInterval.from_bounds(0, 1)
        inner = DyadicInterval.from_bounds(Fraction(1, 4), Fraction(1, 2))
        assert inner.is_subset(outer)
        assert not outer.is_subset(inner)
        assert inner.intersects(outer)
        assert not inner.intersects(DyadicInterval.from_bounds(2, 3))

    def test_to_dict_rounds_outward(self):
        third = DyadicInterval.from_rational(Fraction(1, 3), 64).to_dict(6)
        assert third['lo_decimal'] == '0.333333'
        assert third['hi_decimal'] == '0.333334'
        assert Dyadic.parse(third['lo']).to_fraction() < Fraction(1, 3)


def test_format_decimal_directions():
    q = Fraction(151285, 157456)
    assert format_decimal(q, 6) == '0.960808'
    assert format_decimal(Fraction(2, 3), 3, 'down') == '0.666'
    assert format_decimal(Fraction(2, 3), 3, 'up') == '0.667'
    assert format_decimal(Fraction(-1, 8), 2, 'down') == '-0.13'
    with pytest.raises(DomainError):
        format_decimal(1, 2, 'sideways')


class TestPoly:
    def test_evaluation_and_derivative(self):
        f = Poly([1, 0, -3, 2])
        assert f(2) == 5
        assert f.derivative() == Poly([0, -6, 6])
        assert f.degree == 3
        assert Poly([0, 0]).degree == -1

    def test_divmod(self):
        f = Poly.from_roots([1, 2, 3])
        q, r = divmod(f, Poly([-1, 1]))
        assert r.is_zero()
        assert q == Poly.from_roots([2, 3])

    @given(st.lists(small_ints, min_size=1, max_size=6), small_fractions, small_fractions)
    def test_shift_reflect_reverse(self, coeffs, c, x):
        f = Poly(coeffs)
        assert f.shift(c)(x) == f(x + c)
        assert f.reflect()(x) == f(-x)
        if x != 0 and not f.is_zero():
            assert f.reverse()(x) == x**f.degree * f(1 / x)

    def test_integer_coefficients_primitive(self):
        assert Poly([Fraction(1, 2), Fraction(3, 4)]).integer_coefficients() == [2, 3]
        assert Poly([-4, 6]).integer_coefficients() == [-2, 3]


def _sign_change_count(coeffs, side, delta=Fraction(1, 10**6)):
    """
    Real roots of a squarefree integer polynomial on one side of 0, each bracketed by an exact
    sign change around a numpy root; None when a root is too close to 0, to another root or to the real axis
    """
    f = Poly(coeffs)
    brackets = []
    for root in np.roots(coeffs[::-1]):
        if abs(root.imag) > 1e-3:
            continue
        if abs(root.imag) > 1e-9:
            return None
        centre = Fraction(float(root.real))
        lo, hi = centre - delta, centre + delta
        if lo <= 0 <= hi or f(lo) * f(hi) >= 0:
            return None
        brackets.append((lo, hi))
    brackets.sort()
    if any(right[0] <= left[1] for left, right in zip(brackets, brackets[1:])):
        return None
    if side is HalfLine.NON_NEGATIVE:
        return sum(1 for lo, _ in brackets if lo > 0)
    return sum(1 for _, hi in brackets if hi < 0)


class TestRootCounting:
    def test_halfline_counts(self):
        f = Poly.from_roots([-2, -1, 1, 3])
        assert count_roots_halfline(f, HalfLine.NON_NEGATIVE) == 2
        assert count_roots_halfline(f, HalfLine.NON_POSITIVE) == 2
        assert count_roots_halfline(Poly.from_roots([0, 1]), HalfLine.NON_POSITIVE) == 1

    def test_repeated_roots_counted_once(self):
        f = Poly.from_roots([1, 1, 1, -2])
        assert count_real_roots(f) == 2
        assert count_roots_halfline(f, HalfLine.NON_NEGATIVE) == 1
        assert squarefree_part(f).degree == 2

    def test_interval_endpoints_are_closed(self):
        f = Poly.from_roots([Fraction(1, 2), 2])
        assert count_roots_interval(f, Fraction(1, 2), 2) == 2
        assert count_roots_interval(f, 0, Fraction(1, 3)) == 0
        assert count_roots_interval(f, 1, 2) == 1

    def test_zero_polynomial_rejected(self):
        with pytest.raises(DomainError):
            count_real_roots(Poly([0]))
        with pytest.raises(DomainError):
            count_roots_halfline(Poly(), HalfLine.NON_NEGATIVE)

    def test_negative_on_halfline(self):
        assert negative_on_positive_halfline([-1, 0, 0, 0, -1])
        assert not negative_on_positive_halfline([-1, 0, 5, 0, -1])
        assert negative_on_positive_halfline([-1])
        assert not negative_on_positive_halfline([0, -1])
        assert is_negative_on_halfline(Poly([-1, 1, -1]), HalfLine.NON_POSITIVE)
        assert not is_negative_on_halfline(Poly([-1, -3, -1]), HalfLine.NON_POSITIVE)

    @given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=8), min_size=1, max_size=4,
                    unique=True))
    def test_counts_roots_of_products(self, roots):
        f = Poly.from_roots(roots) * Poly([1, 0, 1])
        assert count_real_roots(f) == len(roots)
        assert count_roots_halfline(f, HalfLine.NON_NEGATIVE) == sum(1 for r in roots if r >= 0)
        assert count_roots_interval(f, -1, 1) == sum(1 for r in roots if -1 <= r <= 1)

    def test_halfline_counts_match_sign_changes(self):
        rng = np.random.default_rng(7)
        compared = 0
        for coeffs in rng.integers(-20, 21, size=(1000, 5)).tolist():
            if coeffs[0] == 0 or coeffs[4] == 0 or sp.discriminant(sp.Poly(coeffs[::-1], sp.Symbol('x'))) == 0:
                continue
            for side in HalfLine:
                expected = _sign_change_count(coeffs, side)
                if expected is None:
                    continue
                assert count_roots_halfline(coeffs, side) == expected, (coeffs, side)
                compared += 1
        assert compared > 1500

    @given(small_fractions)
    def test_width_shrinks_with_precision(self, q):
        widths = [DyadicInterval.from_rational(q, precision).width() for precision in range(2, 80)]
        assert all(finer <= coarser for coarser, finer in zip(widths, widths[1:]))


class TestRatFn:
    def test_normalised_form_is_canonical(self):
        r1 = RatFn([2, 2], [4, 4, 0])
        assert r1.numerator == Poly([1])
        assert r1.denominator == Poly([2])
        assert RatFn([1, 1], [1, -1]) == RatFn([-1, -1], [-1, 1])

    def test_evaluation_and_pole(self):
        r = RatFn([0, 1], [-1, 1])
        assert ratfn_eval(r, 3) == Fraction(3, 2)
        with pytest.raises(DomainError):
            r(1)


def test_interval_functions_match_operators():
    x = DyadicInterval.from_bounds(Fraction(-1, 3), Fraction(1, 2))
    y = DyadicInterval.from_rational(Fraction(2, 7))
    assert interval_mul(x, y) == x * y
    assert interval_add(x, y) == x + y
    assert interval_mul(x, y).contains(Fraction(-2, 21))
