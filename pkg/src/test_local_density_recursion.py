# test_local_density_recursion.py
from fractions import Fraction

import pytest
import sympy as sp

from density_formulas import CLOSED_FORMS, r_of_t
from errors import DomainError
from local_density_recursion import (
    ModelKind, closed_forms, density_table, local_density, plain_density_at_2, solve_recursion,
    solve_recursion_symbolic,
)

FIRST_PRIMES = list(sp.primerange(2, 100))


@pytest.mark.parametrize("p", FIRST_PRIMES)
def test_recursion_matches_closed_forms(p):
    assert len(FIRST_PRIMES) == 25
    assert solve_recursion(p).scalars() == closed_forms(p).scalars()


def test_symbolic_solution_is_r_of_t():
    report = solve_recursion_symbolic()
    assert report.rho == r_of_t()
    for p in (2, 3, 5):
        assert report.rho(p) == CLOSED_FORMS['rho'](Fraction(p))
        assert report.sigma4(p) == solve_recursion(p).sigma4


def test_known_constants():
    assert local_density(2) == Fraction(1625, 1752)
    assert local_density(2, ModelKind.PLAIN) == Fraction(23087, 24528)
    assert plain_density_at_2() == Fraction(23087, 24528)
    assert solve_recursion(2).sigma4 == Fraction(4691, 6132)
    assert local_density(3) == Fraction(151285, 157456)
    assert local_density(3, ModelKind.PLAIN) == local_density(3)


def test_plain_density_at_two_comes_from_sigma4():
    sigma4 = solve_recursion(2).sigma4
    assert local_density(2, ModelKind.PLAIN) == Fraction(3, 4) + sigma4 / 4
    assert local_density(2, ModelKind.PLAIN) > local_density(2)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_lifting_probabilities(p):
    report = solve_recursion(p)
    assert report.tau[2] == Fraction(1, 2)
    assert report.tau[3] == Fraction(3, 4)
    assert report.alpha == Fraction(p, p + 1)
    assert report.beta == Fraction(1, p + 1)
    assert report.alpha_prime == report.beta_prime == Fraction(1, 2)
    assert report.lam_chain[1] == report.lam
    assert report.lam_chain[7] == report.rho_star
    assert report.nu_chain[7] == report.sigma4_prime
    assert report.nu_chain[1] == report.tau[4]


def test_densities_increase_towards_one():
    values = [local_density(p) for p in FIRST_PRIMES]
    assert all(0 < v < 1 for v in values)
    assert values == sorted(values)


def test_non_prime_rejected():
    with pytest.raises(DomainError):
        solve_recursion(9)
    with pytest.raises(DomainError):
        closed_forms(1)


def test_density_table():
    frame = density_table([2, 3])
    assert list(frame['p']) == [2, 3]
    assert frame['rho'].iloc[1] == '151285/157456'
    assert frame['rho_decimal'].iloc[1] == '0.960808099'
