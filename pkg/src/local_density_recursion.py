# local_density_recursion.py
"""
Local solubility densities of generalized binary quartics over Z_p
Solves the reduction recursion exactly per prime and symbolically in t,
and evaluates the displayed closed forms for comparison
"""

import logging
from dataclasses import dataclass, fields
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable

import pandas as pd
import sympy as sp

from density_formulas import (
    CLOSED_FORMS, as_exact, eta_table, r_of_t, xi_table,
)
from errors import CertificateError, DomainError
from exact_math import RatFn, format_decimal

logger = logging.getLogger(__name__)


class ModelKind(Enum):
    GENERALIZED = 'gbq'
    PLAIN = 'quartic'


@dataclass
class DensityReport:
    """Every probability of the reduction argument for one prime (or symbolically in t)"""
    p: object
    xi: Dict[int, object]
    xi_star: Dict[int, object]
    eta: Dict[int, object]
    eta_prime: Dict[int, object]
    alpha: object
    beta: object
    alpha_prime: object
    beta_prime: object
    tau: Dict[int, object]
    lam_chain: Dict[int, object]
    nu_chain: Dict[int, object]
    lam: object
    rho_star: object
    sigma1: object
    sigma2: object
    sigma3: object
    sigma1_star: object
    sigma3_star: object
    sigma4: object
    sigma4_prime: object
    rho: object

    def scalars(self) -> Dict[str, object]:
        """Flat name -> value view, indexed families expanded as name_i"""
        out = {}
        for f in fields(self):
            if f.name == 'p':
                continue
            value = getattr(self, f.name)
            if isinstance(value, dict):
                for i, v in value.items():
                    out[f"{f.name}_{i}"] = v
            else:
                out[f.name] = value
        return out

    def check_probabilities(self) -> None:
        for name, value in self.scalars().items():
            if isinstance(value, Fraction) and not 0 <= value <= 1:
                raise CertificateError(f"{name}={value} at p={self.p} is not a probability")

    def to_frame(self, places: int = 6) -> pd.DataFrame:
        rows = []
        for name, value in self.scalars().items():
            decimal = format_decimal(value, places) if isinstance(value, Fraction) else ''
            rows.append({'quantity': name, 'exact': str(value), 'decimal': decimal})
        return pd.DataFrame(rows)


class _Affine:
    """const + coeff * unknown, for the chains that end in a not yet known probability"""

    __slots__ = ('const', 'coeff')

    def __init__(self, const, coeff):
        self.const = const
        self.coeff = coeff

    def scaled(self, factor, offset=0) -> '_Affine':
        return _Affine(offset + factor * self.const, factor * self.coeff)

    def at(self, value):
        return self.const + self.coeff * value

    def fixed_point_of(self, weight, offset, simplify):
        """Solve x = offset + weight * self(x)"""
        denominator = simplify(1 - weight * self.coeff)
        if denominator == 0:
            raise CertificateError("Singular recursion system")
        return simplify((offset + weight * self.const) / denominator)


def _check_prime(p: int) -> None:
    if not sp.isprime(p):
        raise DomainError(f"{p} is not prime")


def _solve(p, simplify) -> DensityReport:
    """Back-substitution through the reduction chains; p is a Fraction or a sympy symbol"""
    one = sp.Integer(1) if isinstance(p, sp.Basic) else Fraction(1)
    half = one / 2
    q = one / p

    xi = xi_table(p)
    xi_star = xi_table(p, restrict_star=True)
    eta = {i: simplify(v) for i, v in eta_table(p).items()}
    eta_prime = {i: simplify(v) for i, v in eta_table(p, monic=True).items()}

    # alpha = (1 - 1/p) + beta / p, beta = alpha / p
    alpha = simplify((1 - q) / (1 - q * q))
    beta = simplify(q * alpha)
    # alpha' = (1 - 1/p)/2 + beta'/p, beta' = (1 - 1/p)/2 + alpha'/p
    alpha_prime = simplify(half * (1 - q) * (1 + q) / (1 - q * q))
    beta_prime = simplify(half * (1 - q) + q * alpha_prime)

    # lambda_7 = rho*; each row reaches the next with probability 1/p
    lam_rows = {7: _Affine(0 * one, one)}
    lam_rows[6] = lam_rows[7].scaled(q)
    lam_rows[5] = lam_rows[6].scaled(q, 1 - q)
    lam_rows[4] = lam_rows[5].scaled(q, half * (1 - q))
    lam_rows[3] = lam_rows[4].scaled(q, half * (1 - q))
    lam_rows[2] = lam_rows[3].scaled(q, 1 - q)
    lam_rows[1] = lam_rows[2].scaled(q)
    lam_affine = lam_rows[1]

    # at least one of two independent singular points lifts
    two_points = simplify(1 - (1 - beta)**2)
    sigma3_star_affine = lam_affine.scaled(q, (p - 1) / (2 * p) * two_points)
    # rho* = xi1* + xi3* sigma3*
    rho_star = sigma3_star_affine.fixed_point_of(xi_star[3], xi_star[1], simplify)
    lam_chain = {i: simplify(row.at(rho_star)) for i, row in lam_rows.items()}
    lam = lam_chain[1]
    sigma3_star = simplify(sigma3_star_affine.at(rho_star))
    sigma3 = simplify(p * (p**2 - 1) / (2 * (p**3 - 1)) * two_points
                      + (p**2 - 1) / (p**3 - 1) * lam)

    tau = {0: 0 * one, 1: one, 2: alpha_prime, 3: simplify(1 - (1 - alpha_prime)**2)}

    # nu_7 = sigma4'
    nu_rows = {7: _Affine(0 * one, one)}
    nu_rows[6] = nu_rows[7].scaled(q, half * (1 - q))
    nu_rows[5] = nu_rows[6].scaled(q, 1 - q)
    nu_rows[4] = nu_rows[5].scaled(q, half * (1 - q) * alpha + half * (1 - q))
    nu_rows[3] = nu_rows[4].scaled(q)
    nu_rows[2] = nu_rows[3].scaled(q, 1 - q)
    nu_rows[1] = nu_rows[2].scaled(q, half * (1 - q))
    tau4_affine = nu_rows[1]

    # sigma4' = sum eta'_i tau_i with tau_4 still unknown
    known = sum(eta_prime[i] * tau[i] for i in range(4))
    sigma4_prime = tau4_affine.fixed_point_of(eta_prime[4], known, simplify)
    nu_chain = {i: simplify(row.at(sigma4_prime)) for i, row in nu_rows.items()}
    tau[4] = nu_chain[1]

    weighted = simplify(sum(eta[i] * tau[i] for i in range(5)))
    q5 = q**5
    # rho = xi1 + xi2 + xi3 sigma3 + xi4 sigma4 with sigma4 = rho / p^5 + (1 - 1/p^5) weighted
    rho = simplify((xi[1] + xi[2] + xi[3] * sigma3 + xi[4] * (1 - q5) * weighted) / (1 - xi[4] * q5))
    sigma4 = simplify(q5 * rho + (1 - q5) * weighted)

    return DensityReport(
        p=p, xi=xi, xi_star=xi_star, eta=eta, eta_prime=eta_prime,
        alpha=alpha, beta=beta, alpha_prime=alpha_prime, beta_prime=beta_prime,
        tau=tau, lam_chain=lam_chain, nu_chain=nu_chain, lam=lam, rho_star=rho_star,
        sigma1=one, sigma2=one, sigma3=sigma3, sigma1_star=one, sigma3_star=sigma3_star,
        sigma4=sigma4, sigma4_prime=sigma4_prime, rho=rho,
    )


def solve_recursion(p: int) -> DensityReport:
    """Solve the recursion exactly at a prime p"""
    _check_prime(p)
    report = _solve(Fraction(p), simplify=lambda x: x)
    report.p = p
    report.check_probabilities()
    logger.debug(f"Solved recursion at p={p}: rho={report.rho}")
    return report


def solve_recursion_symbolic() -> DensityReport:
    """Solve the recursion over Q(t); every quantity is returned as a normalised RatFn"""
    t = sp.Symbol('t')
    report = _solve(t, simplify=sp.cancel)

    def to_ratfn(value):
        return RatFn.from_sympy(sp.sympify(value), t)

    converted = {}
    for f in fields(report):
        value = getattr(report, f.name)
        if f.name == 'p':
            converted[f.name] = 't'
        elif isinstance(value, dict):
            converted[f.name] = {i: to_ratfn(v) for i, v in value.items()}
        else:
            converted[f.name] = to_ratfn(value)
    symbolic = DensityReport(**converted)
    if symbolic.rho != r_of_t():
        raise CertificateError(f"Symbolic density {symbolic.rho} does not normalise to R(t)")
    return symbolic


def closed_forms(p: int) -> DensityReport:
    """Evaluate the displayed closed forms at p; chain entries follow by forward substitution"""
    _check_prime(p)
    P = as_exact(p)
    q = 1 / P
    half = Fraction(1, 2)
    values = {key: formula(P) for key, formula in CLOSED_FORMS.items()}

    alpha = P / (P + 1)
    lam_chain = {7: values['rho_star']}
    lam_chain[6] = q * lam_chain[7]
    lam_chain[5] = (1 - q) + q * lam_chain[6]
    lam_chain[4] = half * (1 - q) + q * lam_chain[5]
    lam_chain[3] = half * (1 - q) + q * lam_chain[4]
    lam_chain[2] = (1 - q) + q * lam_chain[3]
    lam_chain[1] = q * lam_chain[2]

    nu_chain = {7: values['sigma4_prime']}
    nu_chain[6] = half * (1 - q) + q * nu_chain[7]
    nu_chain[5] = (1 - q) + q * nu_chain[6]
    nu_chain[4] = half * (1 - q) * alpha + half * (1 - q) + q * nu_chain[5]
    nu_chain[3] = q * nu_chain[4]
    nu_chain[2] = (1 - q) + q * nu_chain[3]
    nu_chain[1] = half * (1 - q) + q * nu_chain[2]

    report = DensityReport(
        p=p, xi=xi_table(P), xi_star=xi_table(P, restrict_star=True),
        eta=eta_table(P), eta_prime=eta_table(P, monic=True),
        alpha=alpha, beta=1 / (P + 1), alpha_prime=half, beta_prime=half,
        tau={0: Fraction(0), 1: Fraction(1), 2: half, 3: Fraction(3, 4), 4: values['tau4']},
        lam_chain=lam_chain,
        nu_chain=nu_chain,
        lam=values['lam'], rho_star=values['rho_star'],
        sigma1=Fraction(1), sigma2=Fraction(1), sigma3=values['sigma3'],
        sigma1_star=Fraction(1), sigma3_star=values['sigma3_star'],
        sigma4=values['sigma4'], sigma4_prime=values['sigma4_prime'], rho=values['rho'],
    )
    report.check_probabilities()
    return report


def local_density(p: int, model: ModelKind = ModelKind.GENERALIZED) -> Fraction:
    """rho(p) for the chosen model; the plain model differs only at p = 2"""
    if model is ModelKind.PLAIN and p == 2:
        return plain_density_at_2()
    return CLOSED_FORMS['rho'](Fraction(p))


@lru_cache(maxsize=None)
def plain_density_at_2() -> Fraction:
    """3/4 + sigma_4(2)/4: b or d odd gives a smooth point, otherwise all coefficients become even"""
    return Fraction(3, 4) + solve_recursion(2).sigma4 / 4


def density_table(primes: Iterable[int]) -> pd.DataFrame:
    """rho(p), sigma_4(p) and the defect 1 - rho(p) for a list of primes"""
    rows = []
    for p in primes:
        report = solve_recursion(p)
        rows.append({
            'p': p,
            'rho': str(report.rho),
            'rho_decimal': format_decimal(report.rho, 9),
            'sigma4': str(report.sigma4),
            'one_minus_rho': format_decimal(1 - report.rho, 9),
        })
    return pd.DataFrame(rows)


# Usage example
if __name__ == "__main__":
    from settings import configure_logging

    configure_logging()
    print(density_table([2, 3, 5, 7, 11]))
    print(f"rho(2) for plain quartics: {plain_density_at_2()}")
    print(solve_recursion_symbolic().rho)
