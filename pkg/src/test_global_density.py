# test_global_density.py
import json
from fractions import Fraction

import pytest

from errors import CapabilityError, DomainError
from exact_math import DyadicInterval
from global_density import (
    REPORT_SCHEMA, exact_product, finite_product, primes_up_to, rho_interval, tail_bound, tail_certificate,
)
from local_density_recursion import ModelKind
from real_density_bounds import monte_carlo_real

REAL_PART = DyadicInterval.from_bounds(Fraction('0.873954'), Fraction('0.874124'))


class TestTail:
    def test_certificate_coefficients_are_nonnegative(self):
        certificate = tail_certificate()
        assert all(certificate[i] >= 0 for i in range(certificate.degree + 1))
        assert certificate.degree >= 1

    def test_small_cutoff(self):
        tail = tail_bound(10)
        assert tail.lo >= Fraction(37, 40) and tail.contains(1)
        assert tail.contains(1 - Fraction(3, 42))
        assert tail.is_subset(DyadicInterval.from_bounds(Fraction(37, 40), 1))

    def test_large_cutoff(self):
        assert tail_bound(10**4).lo >= 1 - Fraction(3, 4 * 10**4)

    @pytest.mark.parametrize("P", [3, 7, 100, 10**4, 10**6])
    def test_lower_end_survives_rounding(self, P):
        for precision in (64, 128):
            assert tail_bound(P, precision).lo >= 1 - Fraction(3, 4 * P)

    def test_cutoff_too_small(self):
        with pytest.raises(DomainError):
            tail_bound(2)


def test_primes_up_to():
    assert list(primes_up_to(30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes_up_to(10**4)) == 1229
    assert len(primes_up_to(1)) == 0
    with pytest.raises(CapabilityError):
        primes_up_to(10**9)


class TestFiniteProduct:
    def test_single_prime(self):
        assert finite_product(2, ModelKind.PLAIN, progress=False).contains(Fraction(23087, 24528))

    def test_two_primes(self):
        expected = Fraction(1625, 1752) * Fraction(151285, 157456)
        assert finite_product(3, ModelKind.GENERALIZED, progress=False).contains(expected)

    @pytest.mark.parametrize("model", list(ModelKind))
    def test_encloses_exact_product(self, model):
        product = finite_product(200, model, precision=96, progress=False)
        assert product.contains(exact_product(200, model))
        assert product.width() < Fraction(1, 2**80)

    def test_cutoffs_nest(self):
        wide = finite_product(100, ModelKind.PLAIN, progress=False)
        narrow = finite_product(1000, ModelKind.PLAIN, progress=False)
        assert narrow.hi < wide.lo

    def test_cutoff_too_small(self):
        with pytest.raises(DomainError):
            finite_product(1, progress=False)


class TestRhoInterval:
    def test_plain_quartics(self):
        report = rho_interval(ModelKind.PLAIN, REAL_PART, 10**4, progress=False)
        assert report.rigorous
        assert report.rho.contains(Fraction('0.75965'))
        assert report.rho.width() < Fraction(3, 10**4)

    def test_generalized_is_an_estimate(self):
        sample = monte_carlo_real(ModelKind.GENERALIZED, 1 << 16, seed=1, progress=False)
        report = rho_interval(ModelKind.GENERALIZED, sample.enclosure(), 10**4, real_part_rigorous=False,
                              progress=False)
        assert not report.rigorous
        assert report.real_part.contains(Fraction(sample.soluble, sample.n))
        # a real factor near 0.91 puts rho' near 0.78
        assert report.rho.lo > Fraction('0.748248')
        assert report.rho.is_subset(DyadicInterval.from_bounds(Fraction('0.76'), Fraction('0.80')))

    def test_untrusted_real_part_is_not_rigorous(self):
        report = rho_interval(ModelKind.PLAIN, REAL_PART, 100, real_part_rigorous=False, progress=False)
        assert not report.rigorous

    def test_larger_cutoff_is_contained_in_tail_enclosure(self):
        coarse = rho_interval(ModelKind.PLAIN, REAL_PART, 100, progress=False)
        fine = rho_interval(ModelKind.PLAIN, REAL_PART, 10**4, progress=False)
        assert fine.rho.is_subset(coarse.rho)
        assert fine.rho.width() < coarse.rho.width()

    def test_json_report(self):
        report = rho_interval(ModelKind.PLAIN, REAL_PART, 100, provenance={'real': 'given'}, progress=False)
        data = json.loads(report.to_json())
        assert data['schema'] == REPORT_SCHEMA
        assert set(data) == {'schema', 'model', 'P', 'real_part', 'finite_product', 'tail', 'rho',
                             'rigorous', 'provenance'}
        assert data['provenance'] == {'real': 'given', 'precision': 128}
        assert set(data['rho']) == {'lo', 'hi', 'lo_decimal', 'hi_decimal', 'precision'}
        assert report.to_json() == report.to_json()

    def test_frame(self):
        frame = rho_interval(ModelKind.PLAIN, REAL_PART, 100, progress=False).to_frame()
        assert list(frame['factor']) == ['real_part', 'finite_product', 'tail', 'rho']

    @pytest.mark.slow
    def test_million_primes_cutoff(self):
        report = rho_interval(ModelKind.PLAIN, REAL_PART, 10**6, progress=False)
        assert report.rho.is_subset(DyadicInterval.from_bounds(Fraction('0.7590'), Fraction('0.7602')))
