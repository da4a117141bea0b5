# finite_field_counts.py
"""
Exhaustive enumeration of generalized binary quartics and binary quartics over F_p
Classifies factorization types and root patterns and checks the closed-form count tables
"""

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Sequence, Tuple

import pandas as pd
import sympy as sp

from density_formulas import (
    FACTORIZATION_TYPES, GBQ_TYPE_COUNTS, GBQ_TYPE_COUNTS_STAR, QUARTIC_PATTERN_COUNTS,
    QUARTIC_PATTERN_COUNTS_MONIC, ROOT_PATTERNS, as_exact, eta_table, xi_table,
)
from errors import CapabilityError, DomainError

logger = logging.getLogger(__name__)

GBQ_ENUMERATION_CAP = 3
QUARTIC_ENUMERATION_CAP = 7


class FactorizationType(IntEnum):
    ABS_IRRED = 1
    SPLIT_DISTINCT = 2
    CONJUGATE_PAIR = 3
    REPEATED_FACTOR = 4

    @property
    def label(self) -> str:
        return FACTORIZATION_TYPES[self.value - 1]


class RootPattern(IntEnum):
    NO_ROOTS = 0
    SIMPLE_ROOT = 1
    ONE_DOUBLE = 2
    TWO_DOUBLES = 3
    QUADRUPLE_ROOT = 4

    @property
    def label(self) -> str:
        return ROOT_PATTERNS[self.value]


@dataclass(frozen=True)
class FpGBQ:
    """z^2 + h z - f over F_p with h = l x^2 + m xy + n y^2 and f = a x^4 + ... + e y^4"""
    p: int
    l: int
    m: int
    n: int
    a: int
    b: int
    c: int
    d: int
    e: int

    def __post_init__(self):
        for name in ('l', 'm', 'n', 'a', 'b', 'c', 'd', 'e'):
            value = getattr(self, name)
            if not 0 <= value < self.p:
                raise DomainError(f"Coefficient {name}={value} is not a residue mod {self.p}")

    @classmethod
    def from_coefficients(cls, p: int, coefficients: Sequence[int]) -> 'FpGBQ':
        """Reduce eight integer coefficients (l, m, n, a, b, c, d, e) mod p"""
        if len(coefficients) != 8:
            raise DomainError(f"Expected 8 coefficients, got {len(coefficients)}")
        return cls(p, *(int(x) % p for x in coefficients))

    @property
    def h(self) -> Tuple[int, int, int]:
        return (self.l, self.m, self.n)

    @property
    def f(self) -> Tuple[int, int, int, int, int]:
        return (self.a, self.b, self.c, self.d, self.e)


@dataclass
class CountTable:
    """Exact per-class counts with their total and derived probabilities"""
    p: int
    kind: str
    counts: Dict[str, int]
    total: int
    source: str = 'enumeration'
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if sum(self.counts.values()) != self.total:
            raise DomainError(f"{self.kind} counts for p={self.p} do not sum to {self.total}")

    def probabilities(self) -> Dict[str, Fraction]:
        return {label: Fraction(count, self.total) for label, count in self.counts.items()}

    def to_frame(self) -> pd.DataFrame:
        probs = self.probabilities()
        rows = [{'class': label, 'count': count, 'probability': str(probs[label])}
                for label, count in self.counts.items()]
        rows.append({'class': 'Total', 'count': self.total, 'probability': '1'})
        return pd.DataFrame(rows)


def _check_prime(p: int) -> None:
    if not sp.isprime(p):
        raise DomainError(f"{p} is not prime")


@lru_cache(maxsize=None)
def _square_forms(p: int) -> Tuple[frozenset, frozenset]:
    """Squares of binary quadratics over F_p, and a non-residue times those squares"""
    nonresidue = next(v for v in range(2, p) if pow(v, (p - 1) // 2, p) == p - 1)
    squares = set()
    for q0, q1, q2 in itertools.product(range(p), repeat=3):
        squares.add(((q0 * q0) % p, (2 * q0 * q1) % p, (q1 * q1 + 2 * q0 * q2) % p,
                     (2 * q1 * q2) % p, (q2 * q2) % p))
    twisted = {tuple((nonresidue * c) % p for c in sq) for sq in squares}
    return frozenset(squares), frozenset(twisted)


def completed_square(p: int, h: Sequence[int], f: Sequence[int]) -> Tuple[int, ...]:
    """Coefficients of h^2 + 4 f mod p"""
    l, m, n = h
    a, b, c, d, e = f
    return ((l * l + 4 * a) % p, (2 * l * m + 4 * b) % p, (m * m + 2 * l * n + 4 * c) % p,
            (2 * m * n + 4 * d) % p, (n * n + 4 * e) % p)


# F_4 = {0, 1, w, w + 1} encoded as 2-bit integers, addition is xor
_F4_MUL = (
    (0, 0, 0, 0),
    (0, 1, 2, 3),
    (0, 2, 3, 1),
    (0, 3, 1, 2),
)


def _f4_root_of(h: Sequence[int], f: Sequence[int], field_size: int) -> bool:
    """Is there a quadratic s over F_2 (field_size 2) or F_4 with s^2 + h s + f = 0?"""
    l, m, n = h
    mul = _F4_MUL
    for s0, s1, s2 in itertools.product(range(field_size), repeat=3):
        coeffs = (
            mul[s0][s0] ^ mul[l][s0] ^ f[0],
            mul[l][s1] ^ mul[m][s0] ^ f[1],
            mul[s1][s1] ^ mul[l][s2] ^ mul[m][s1] ^ mul[n][s0] ^ f[2],
            mul[m][s2] ^ mul[n][s1] ^ f[3],
            mul[s2][s2] ^ mul[n][s2] ^ f[4],
        )
        if not any(coeffs):
            return True
    return False


def classify_gbq_type(q: FpGBQ) -> FactorizationType:
    """Factorization type of z^2 + h z - f over the algebraic closure of F_p"""
    p = q.p
    if p == 2:
        if not any(q.h):
            # z^2 + f is a square iff f has no odd-degree monomials
            if q.b == 0 and q.d == 0:
                return FactorizationType.REPEATED_FACTOR
            return FactorizationType.ABS_IRRED
        if _f4_root_of(q.h, q.f, 2):
            return FactorizationType.SPLIT_DISTINCT
        if _f4_root_of(q.h, q.f, 4):
            return FactorizationType.CONJUGATE_PAIR
        return FactorizationType.ABS_IRRED

    g = completed_square(p, q.h, q.f)
    if not any(g):
        return FactorizationType.REPEATED_FACTOR
    squares, twisted = _square_forms(p)
    if g in squares:
        return FactorizationType.SPLIT_DISTINCT
    if g in twisted:
        return FactorizationType.CONJUGATE_PAIR
    return FactorizationType.ABS_IRRED


def quadratic_is_irreducible(p: int, l: int, a: int) -> bool:
    """True iff z^2 + l z - a has no root in F_p"""
    return all((z * z + l * z - a) % p for z in range(p))


def _root_multiplicity(coeffs_high_first: Sequence[int], x0: int, p: int) -> int:
    """Order of vanishing at x0 of a univariate polynomial mod p (by repeated division)"""
    poly = [c % p for c in coeffs_high_first]
    while poly and poly[0] == 0:
        poly = poly[1:]
    mult = 0
    while len(poly) > 1:
        quotient = [poly[0]]
        for c in poly[1:]:
            quotient.append((quotient[-1] * x0 + c) % p)
        if quotient[-1] != 0:
            break
        mult += 1
        poly = quotient[:-1]
    return mult


def projective_root_multiplicities(p: int, f: Sequence[int]) -> Dict[object, int]:
    """Multiplicities of the roots of the binary quartic f in P^1(F_p), keyed by x (or 'inf')"""
    a, b, c, d, e = (x % p for x in f)
    roots = {}
    # (1:0): f(1, y) = a + b y + ... vanishes to the order of the first nonzero coefficient
    leading_zeros = next(i for i, v in enumerate((a, b, c, d, e)) if v)
    if leading_zeros:
        roots['inf'] = leading_zeros
    for x0 in range(p):
        mult = _root_multiplicity((a, b, c, d, e), x0, p)
        if mult:
            roots[x0] = mult
    return roots


def classify_quartic_pattern(p: int, f: Sequence[int]) -> RootPattern:
    """Root pattern of a nonzero binary quartic over F_p"""
    if not any(x % p for x in f):
        raise DomainError("Root pattern of the zero quartic")
    mults = sorted(projective_root_multiplicities(p, f).values())
    if 1 in mults:
        return RootPattern.SIMPLE_ROOT
    if mults == [4]:
        return RootPattern.QUADRUPLE_ROOT
    if mults == [2, 2]:
        return RootPattern.TWO_DOUBLES
    if mults == [2]:
        return RootPattern.ONE_DOUBLE
    return RootPattern.NO_ROOTS


def _formula_table(table: dict, p: int, labels: Sequence[str], kind: str) -> CountTable:
    values = {key: formula(as_exact(p)) for key, formula in table.items()}
    counts = {label: int(values[label]) for label in labels}
    return CountTable(p, kind, counts, int(values['Total']), source='formula')


def gbq_type_formulas(p: int, restrict_star: bool = False) -> CountTable:
    """Closed-form factorization type counts (any prime)"""
    _check_prime(p)
    table = GBQ_TYPE_COUNTS_STAR if restrict_star else GBQ_TYPE_COUNTS
    return _formula_table(table, p, FACTORIZATION_TYPES, 'gbq*' if restrict_star else 'gbq')


def quartic_pattern_formulas(p: int, monic: bool = False) -> CountTable:
    """Closed-form root pattern counts (any prime)"""
    _check_prime(p)
    table = QUARTIC_PATTERN_COUNTS_MONIC if monic else QUARTIC_PATTERN_COUNTS
    return _formula_table(table, p, ROOT_PATTERNS, 'quartic-monic' if monic else 'quartic')


def count_gbq_types(p: int, restrict_star: bool = False, mode: str = 'enumerate') -> CountTable:
    """
    Count generalized binary quartics over F_p by factorization type
    mode='enumerate' walks all p^8 tuples (p <= 3); mode='formula' evaluates the closed forms
    """
    _check_prime(p)
    if mode == 'formula':
        return gbq_type_formulas(p, restrict_star)
    if p > GBQ_ENUMERATION_CAP:
        raise CapabilityError(f"Enumeration of generalized binary quartics is limited to p <= "
                              f"{GBQ_ENUMERATION_CAP}; use formula mode for p={p}")

    tally = Counter()
    total = 0
    for coeffs in itertools.product(range(p), repeat=8):
        l, a = coeffs[0], coeffs[3]
        if restrict_star and not quadratic_is_irreducible(p, l, a):
            continue
        tally[classify_gbq_type(FpGBQ(p, *coeffs))] += 1
        total += 1

    counts = {t.label: tally[t] for t in FactorizationType}
    logger.info(f"Enumerated {total} generalized binary quartics over F_{p} (star={restrict_star})")
    return CountTable(p, 'gbq*' if restrict_star else 'gbq', counts, total)


def count_quartic_patterns(p: int, monic: bool = False, mode: str = 'enumerate') -> CountTable:
    """Count nonzero binary quartics over F_p (monic, or up to scaling) by root pattern"""
    _check_prime(p)
    if mode == 'formula':
        return quartic_pattern_formulas(p, monic)
    if p > QUARTIC_ENUMERATION_CAP:
        raise CapabilityError(f"Enumeration of binary quartics is limited to p <= "
                              f"{QUARTIC_ENUMERATION_CAP}; use formula mode for p={p}")

    if monic:
        forms = ((1,) + rest for rest in itertools.product(range(p), repeat=4))
    else:
        # one representative per scaling class: first nonzero coefficient equal to 1
        forms = ((0,) * lead + (1,) + rest
                 for lead in range(5)
                 for rest in itertools.product(range(p), repeat=4 - lead))

    tally = Counter()
    total = 0
    for f in forms:
        tally[classify_quartic_pattern(p, f)] += 1
        total += 1

    counts = {pattern.label: tally[pattern] for pattern in RootPattern}
    logger.info(f"Enumerated {total} binary quartics over F_{p} (monic={monic})")
    return CountTable(p, 'quartic-monic' if monic else 'quartic', counts, total)


def xi_probabilities(p, restrict_star: bool = False) -> Dict[int, object]:
    """Probabilities of the four factorization types, indexed 1..4 (p may be a sympy symbol)"""
    return xi_table(p, restrict_star)


def eta_probabilities(p, monic: bool = False) -> Dict[int, object]:
    """Probabilities of the five root patterns, indexed 0..4 (p may be a sympy symbol)"""
    return eta_table(p, monic)


# Usage example
if __name__ == "__main__":
    from settings import configure_logging

    configure_logging()
    for prime in (2, 3):
        print(count_gbq_types(prime).to_frame())
        print(count_gbq_types(prime, restrict_star=True).to_frame())
    print(count_quartic_patterns(3).to_frame())
    print(xi_probabilities(sp.Symbol('p')))
