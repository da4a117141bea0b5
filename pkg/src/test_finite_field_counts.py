# test_finite_field_counts.py
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import assume, given
from hypothesis import strategies as st

from errors import CapabilityError, DomainError
from finite_field_counts import (
    FactorizationType, FpGBQ, RootPattern, classify_gbq_type, classify_quartic_pattern, count_gbq_types,
    count_quartic_patterns, eta_probabilities, gbq_type_formulas, quadratic_is_irreducible,
    quartic_pattern_formulas, xi_probabilities,
)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("restrict_star", [False, True])
def test_gbq_enumeration_matches_closed_forms(p, restrict_star):
    enumerated = count_gbq_types(p, restrict_star)
    formula = gbq_type_formulas(p, restrict_star)
    assert enumerated.counts == formula.counts
    assert enumerated.total == formula.total


@pytest.mark.parametrize("p", [2, 3])
def test_starred_total(p):
    assert count_gbq_types(p, restrict_star=True).total == p**7 * (p - 1) // 2


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("monic", [False, True])
def test_quartic_enumeration_matches_closed_forms(p, monic):
    enumerated = count_quartic_patterns(p, monic)
    formula = quartic_pattern_formulas(p, monic)
    assert enumerated.counts == formula.counts
    expected_total = p**4 if monic else p**4 + p**3 + p**2 + p + 1
    assert enumerated.total == expected_total


def test_enumeration_caps():
    with pytest.raises(CapabilityError):
        count_gbq_types(5)
    with pytest.raises(CapabilityError):
        count_quartic_patterns(11)
    assert count_gbq_types(5, mode='formula').total == 5**8


def test_non_prime_rejected():
    with pytest.raises(DomainError):
        count_gbq_types(4)


def test_residue_range_checked():
    with pytest.raises(DomainError):
        FpGBQ(3, 0, 0, 0, 3, 0, 0, 0, 0)
    assert FpGBQ.from_coefficients(3, [0, 0, 0, 4, 0, 0, 0, -1]).f == (1, 0, 0, 0, 2)


class TestClassification:
    def test_square_splits(self):
        # z^2 - x^4 = (z - x^2)(z + x^2)
        assert classify_gbq_type(FpGBQ(3, 0, 0, 0, 1, 0, 0, 0, 0)) is FactorizationType.SPLIT_DISTINCT

    def test_zero_is_repeated(self):
        assert classify_gbq_type(FpGBQ(3, 0, 0, 0, 0, 0, 0, 0, 0)) is FactorizationType.REPEATED_FACTOR
        assert classify_gbq_type(FpGBQ(2, 0, 0, 0, 1, 0, 1, 0, 1)) is FactorizationType.REPEATED_FACTOR

    def test_odd_monomial_at_two_is_irreducible(self):
        assert classify_gbq_type(FpGBQ(2, 0, 0, 0, 0, 1, 0, 0, 0)) is FactorizationType.ABS_IRRED

    def test_non_square_constant_is_conjugate_pair(self):
        # z^2 - 2 y^4 over F_3 splits only over F_9
        assert classify_gbq_type(FpGBQ(3, 0, 0, 0, 0, 0, 0, 0, 2)) is FactorizationType.CONJUGATE_PAIR

    def test_root_patterns(self):
        assert classify_quartic_pattern(5, (1, 0, 0, 0, 0)) is RootPattern.QUADRUPLE_ROOT
        assert classify_quartic_pattern(5, (0, 0, 1, 0, 0)) is RootPattern.TWO_DOUBLES
        assert classify_quartic_pattern(3, (1, 0, 1, 0, 0)) is RootPattern.ONE_DOUBLE
        assert classify_quartic_pattern(3, (1, 0, 2, 0, 1)) is RootPattern.NO_ROOTS
        assert classify_quartic_pattern(3, (0, 1, 0, 0, 0)) is RootPattern.SIMPLE_ROOT

    def test_zero_quartic_rejected(self):
        with pytest.raises(DomainError):
            classify_quartic_pattern(3, (0, 3, 0, 0, 6))

    def test_quadratic_irreducibility(self):
        assert quadratic_is_irreducible(3, 0, 2)
        assert not quadratic_is_irreducible(3, 0, 1)
        assert quadratic_is_irreducible(2, 1, 1)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_probabilities_sum_to_one(p):
    for restrict_star in (False, True):
        assert sum(xi_probabilities(p, restrict_star).values()) == 1
    for monic in (False, True):
        assert sum(eta_probabilities(p, monic).values()) == 1


def test_table_frame_has_total_row():
    frame = count_quartic_patterns(2).to_frame()
    assert list(frame['class'])[-1] == 'Total'
    assert frame['count'].iloc[-1] == 31
    assert count_quartic_patterns(2).probabilities()['QuadrupleRoot'] == Fraction(3, 31)


def _change_variables(q, matrix, s):
    """z^2 + h z - f under (x, y) -> matrix (x, y) and z -> z + s(x, y), reduced mod p"""
    x, y = sp.symbols('x y')
    (alpha, beta), (gamma, delta) = matrix
    X, Y = alpha * x + beta * y, gamma * x + delta * y
    h = q.l * X**2 + q.m * X * Y + q.n * Y**2
    f = q.a * X**4 + q.b * X**3 * Y + q.c * X**2 * Y**2 + q.d * X * Y**3 + q.e * Y**4
    shift = s[0] * x**2 + s[1] * x * y + s[2] * y**2
    new_h = sp.Poly(sp.expand(h + 2 * shift), x, y)
    new_f = sp.Poly(sp.expand(f - shift**2 - h * shift), x, y)
    h_coeffs = [int(new_h.coeff_monomial(x**(2 - i) * y**i)) % q.p for i in range(3)]
    f_coeffs = [int(new_f.coeff_monomial(x**(4 - i) * y**i)) % q.p for i in range(5)]
    return FpGBQ(q.p, *h_coeffs, *f_coeffs)


@given(st.data(), st.sampled_from([2, 3, 5]))
def test_gbq_type_is_invariant_under_change_of_variables(data, p):
    residue = st.integers(min_value=0, max_value=p - 1)
    q = FpGBQ(p, *data.draw(st.tuples(*[residue] * 8)))
    matrix = data.draw(st.tuples(st.tuples(residue, residue), st.tuples(residue, residue)))
    assume((matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]) % p)
    s = data.draw(st.tuples(residue, residue, residue))
    assert classify_gbq_type(_change_variables(q, matrix, s)) is classify_gbq_type(q)
