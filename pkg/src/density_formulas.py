# density_formulas.py
"""
Closed-form count and density tables for generalized binary quartics
Every entry is a function of p that works for an exact rational p as
well as a sympy symbol, so the same table drives numeric and symbolic code
"""

from fractions import Fraction

from exact_math import RatFn

# Factorization types of z^2 + h z - f over the algebraic closure of F_p
FACTORIZATION_TYPES = ('AbsIrred', 'SplitDistinct', 'ConjugatePair', 'RepeatedFactor')

# Root patterns of a nonzero binary quartic in P^1(F_p)
ROOT_PATTERNS = ('NoRoots', 'SimpleRoot', 'OneDouble', 'TwoDoubles', 'QuadrupleRoot')

# Number of generalized binary quartics over F_p of each factorization type
GBQ_TYPE_COUNTS = {
    'AbsIrred': lambda p: p**6 * (p**2 - 1),
    'SplitDistinct': lambda p: p**3 * (p**3 - 1) / 2,
    'ConjugatePair': lambda p: p**3 * (p**3 - 1) / 2,
    'RepeatedFactor': lambda p: p**3,
    'Total': lambda p: p**8,
}

# Same counts restricted to pairs with z^2 + l z - a irreducible over F_p
GBQ_TYPE_COUNTS_STAR = {
    'AbsIrred': lambda p: p**5 * (p**2 - 1) * (p - 1) / 2,
    'SplitDistinct': lambda p: 0 * p,
    'ConjugatePair': lambda p: p**5 * (p - 1) / 2,
    'RepeatedFactor': lambda p: 0 * p,
    'Total': lambda p: p**7 * (p - 1) / 2,
}

# Nonzero binary quartics over F_p up to scaling, by root pattern
QUARTIC_PATTERN_COUNTS = {
    'NoRoots': lambda p: p * (p - 1) * (3 * p**2 + p + 2) / 8,
    'SimpleRoot': lambda p: p * (p + 1) * (5 * p**2 + p + 2) / 8,
    'OneDouble': lambda p: p * (p**2 - 1) / 2,
    'TwoDoubles': lambda p: p * (p + 1) / 2,
    'QuadrupleRoot': lambda p: p + 1,
    'Total': lambda p: p**4 + p**3 + p**2 + p + 1,
}

# Monic binary quartics (f(1, 0) = 1) over F_p, by root pattern
QUARTIC_PATTERN_COUNTS_MONIC = {
    'NoRoots': lambda p: p * (p - 1) * (3 * p**2 + p + 2) / 8,
    'SimpleRoot': lambda p: p * (p - 1) * (5 * p**2 + 3 * p + 2) / 8,
    'OneDouble': lambda p: p**2 * (p - 1) / 2,
    'TwoDoubles': lambda p: p * (p - 1) / 2,
    'QuadrupleRoot': lambda p: p,
    'Total': lambda p: p**4,
}

# Displayed solubility probabilities
CLOSED_FORMS = {
    'lam': lambda p: (2 * p**10 + 3 * p**9 - p**5 + 2 * p**4 - 2 * p**2 - 3 * p - 1)
    / (2 * (p + 1)**2 * (p**9 - 1)),
    'rho_star': lambda p: p * (p - 1) * (2 * p**9 + 6 * p**8 + 6 * p**7 + 4 * p**6 + 3 * p**5
                                         + 5 * p**4 + 5 * p**3 + 5 * p**2 + 5 * p + 2)
    / (2 * (p + 1)**2 * (p**9 - 1)),
    'sigma3': lambda p: (p - 1)**2 * (2 * p**9 + 3 * p**8 + 5 * p**7 + 3 * p**6 + 5 * p**5
                                      + 3 * p**4 + 4 * p**3 + 5 * p**2 + 4 * p + 1)
    / (2 * (p**3 - 1) * (p**9 - 1)),
    'sigma3_star': lambda p: (p - 1) * (2 * p**9 + 3 * p**8 + 5 * p**7 + 5 * p**6 + 5 * p**5
                                        + 5 * p**4 + 4 * p**3 + 6 * p**2 + 6 * p + 2)
    / (2 * (p + 1)**2 * (p**9 - 1)),
    'tau4': lambda p: (4 * p**10 + 8 * p**9 - 4 * p**8 + 4 * p**6 - 3 * p**4 + p**3 - 5 * p - 5)
    / (8 * (p + 1) * (p**9 - 1)),
    'sigma4_prime': lambda p: (5 * p**10 + 5 * p**9 - p**7 + 3 * p**6 - 4 * p**5 + 4 * p**3 - 8 * p - 4)
    / (8 * (p + 1) * (p**9 - 1)),
    'sigma4': lambda p: (5 * p**10 + 8 * p**9 + p**8 - p**7 + 2 * p**6 - 3 * p**5 + 4 * p**3 - 10 * p - 6)
    / (8 * (p + 1) * (p**9 - 1)),
    'rho': lambda p: (8 * p**10 + 8 * p**9 - 4 * p**8 + 2 * p**6 + p**5 - 2 * p**4 + p**3 - p**2 - 8 * p - 5)
    / (8 * (p + 1) * (p**9 - 1)),
}

# R(t) = 1 - R_DEFECT_NUMERATOR(t) / R_DEFECT_DENOMINATOR(t), coefficients lowest degree first
R_DEFECT_NUMERATOR = (3, 3, 2, 3, 1, 2, 4, 4)
# 8 (t + 1)(t^2 + t + 1)(t^6 + t^3 + 1) expanded
R_DEFECT_DENOMINATOR = (8, 16, 16, 16, 16, 16, 16, 16, 16, 8)


def as_exact(p):
    """Ints become Fractions so every table entry divides exactly; symbols pass through"""
    return Fraction(p) if isinstance(p, int) else p


def evaluate(table: dict, p) -> dict:
    """Evaluate every entry of a formula table at p"""
    p = as_exact(p)
    return {key: formula(p) for key, formula in table.items()}


def r_of_t() -> RatFn:
    """The local density R(t) as a normalised rational function"""
    numerator = [d - n for d, n in zip(R_DEFECT_DENOMINATOR, list(R_DEFECT_NUMERATOR) + [0, 0])]
    return RatFn(numerator, R_DEFECT_DENOMINATOR)


def xi_table(p, restrict_star: bool = False) -> dict:
    """Factorization type probabilities indexed 1..4"""
    table = GBQ_TYPE_COUNTS_STAR if restrict_star else GBQ_TYPE_COUNTS
    p = as_exact(p)
    total = table['Total'](p)
    return {i: table[label](p) / total for i, label in enumerate(FACTORIZATION_TYPES, start=1)}


def eta_table(p, monic: bool = False) -> dict:
    """Root pattern probabilities indexed 0..4"""
    table = QUARTIC_PATTERN_COUNTS_MONIC if monic else QUARTIC_PATTERN_COUNTS
    p = as_exact(p)
    total = table['Total'](p)
    return {i: table[label](p) / total for i, label in enumerate(ROOT_PATTERNS)}
