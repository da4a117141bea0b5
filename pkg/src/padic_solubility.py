# padic_solubility.py
"""
Q_p-solubility of z^2 + h(x,y) z = f(x,y) by residue refinement with Hensel certificates
Also a seeded Monte Carlo estimate of the local density that does not use the recursion
"""

import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp
from sympy.ntheory import is_quad_residue, sqrt_mod
from sympy.ntheory import sqrt_mod
from tqdm import tqdm

from errors import DomainError
from local_density_recursion import ModelKind
from settings import SETTINGS

logger = logging.getLogger(__name__)

SAMPLE_BLOCK_SIZE = 1024
WITNESS_DIGITS = 8


@dataclass(frozen=True)
class GBQInt:
    """Integer generalized binary quartic; h = 0 encodes the plain equation z^2 = f(x, y)"""
    l: int
    m: int
    n: int
    a: int
    b: int
    c: int
    d: int
    e: int

    @classmethod
    def plain(cls, a: int, b: int, c: int, d: int, e: int) -> 'GBQInt':
        return cls(0, 0, 0, a, b, c, d, e)

    @property
    def h(self) -> Tuple[int, int, int]:
        return (self.l, self.m, self.n)

    @property
    def f(self) -> Tuple[int, int, int, int, int]:
        return (self.a, self.b, self.c, self.d, self.e)

    def coefficients(self) -> Tuple[int, ...]:
        return (self.l, self.m, self.n, self.a, self.b, self.c, self.d, self.e)

    def completed_square(self) -> Tuple[int, int, int, int, int]:
        """h^2 + 4 f, coefficients of x^4, x^3 y, ..., y^4"""
        l, m, n = self.h
        a, b, c, d, e = self.f
        return (l * l + 4 * a, 2 * l * m + 4 * b, m * m + 2 * l * n + 4 * c,
                2 * m * n + 4 * d, n * n + 4 * e)

    def h_at(self, x, y):
        return self.l * x * x + self.m * x * y + self.n * y * y

    def f_at(self, x, y):
        return (self.a * x**4 + self.b * x**3 * y + self.c * x**2 * y**2
                + self.d * x * y**3 + self.e * y**4)

    def evaluate(self, x, y, z):
        """F(x, y, z) = z^2 + h(x, y) z - f(x, y)"""
        return z * z + self.h_at(x, y) * z - self.f_at(x, y)

    def partials(self, x, y, z):
        """(F_x, F_y, F_z)"""
        hx = 2 * self.l * x + self.m * y
        hy = self.m * x + 2 * self.n * y
        fx = 4 * self.a * x**3 + 3 * self.b * x**2 * y + 2 * self.c * x * y**2 + self.d * y**3
        fy = self.b * x**3 + 2 * self.c * x**2 * y + 3 * self.d * x * y**2 + 4 * self.e * y**3
        return (hx * z - fx, hy * z - fy, 2 * z + self.h_at(x, y))


class VerdictKind(Enum):
    SOLUBLE = 'soluble'
    INSOLUBLE = 'insoluble'
    UNDECIDED = 'undecided'


@dataclass(frozen=True)
class Witness:
    """
    A point on chart 1 (x, 1, z) or chart 2 (1, y, z) with coordinate u standing for x or y
    variable names the partial derivative ('u' or 'z') carrying the Hensel certificate;
    valuation is the guaranteed lower bound on v_p(F) at the point
    """
    chart: int
    u: Fraction
    z: Fraction
    variable: str
    valuation: int

    def point(self) -> Tuple[Fraction, Fraction, Fraction]:
        if self.chart == 1:
            return (self.u, Fraction(1), self.z)
        return (Fraction(1), self.u, self.z)


@dataclass
class SolubilityVerdict:
    """depth_used counts the residue levels examined, 1 meaning mod p only"""
    kind: VerdictKind
    witness: Optional[Witness] = None
    depth_used: int = 0

    @property
    def is_soluble(self) -> bool:
        return self.kind is VerdictKind.SOLUBLE


@dataclass
class _SearchContext:
    p: int
    q: GBQInt
    max_depth: int
    precision: Optional[int]
    deepest: int = 0


def _check_prime(p: int) -> None:
    if not sp.isprime(p):
        raise DomainError(f"{p} is not prime")


def valuation(x, p: int) -> float:
    """p-adic valuation of an int or Fraction (inf for 0)"""
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def is_square_in_qp(x, p: int) -> bool:
    """Is the rational x a square in Q_p?"""
    x = Fraction(x)
    if x == 0:
        return True
    v = valuation(x, p)
    if v % 2:
        return False
    # the square class only depends on num * den once the p-part is removed
    unit = x.numerator * x.denominator
    while unit % p == 0:
        unit //= p
    if p == 2:
        return unit % 8 == 1
    return is_quad_residue(unit % p, p)


def smooth_reduction_point(p: int, q: GBQInt) -> Optional[Tuple[int, int, int]]:
    """A smooth F_p-point (x, y, z) of the reduction mod p, or None"""
    for x0 in range(p):
        for z0 in range(p):
            if q.evaluate(x0, 1, z0) % p:
                continue
            fx, _, fz = q.partials(x0, 1, z0)
            if fx % p or fz % p:
                return (x0, 1, z0)
    for z0 in range(p):
        if q.evaluate(1, 0, z0) % p:
            continue
        _, fy, fz = q.partials(1, 0, z0)
        if fy % p or fz % p:
            return (1, 0, z0)
    return None


def _smooth_point_witness(p: int, q: GBQInt) -> Optional[Witness]:
    """Hensel witness at a smooth point of the reduction, on whichever chart holds it"""
    point = smooth_reduction_point(p, q)
    if point is None:
        return None
    x0, y0, z0 = point
    fx, fy, _ = q.partials(x0, y0, z0)
    if y0 == 1:
        return Witness(1, Fraction(x0), Fraction(z0), 'u' if fx % p else 'z', 1)
    return Witness(2, Fraction(0), Fraction(z0), 'u' if fy % p else 'z', 1)


def apply_substitution(q: GBQInt, t: int, s: Sequence[int]) -> GBQInt:
    """
    The quartic F(x + t y, y, z + s(x, y)) for an integer t and integer quadratic form s
    h becomes h(x + ty, y) + 2s and f becomes f(x + ty, y) - s^2 - h(x + ty, y) s
    """
    x, y = sp.symbols('x y')
    X = x + t * y
    s_form = s[0] * x**2 + s[1] * x * y + s[2] * y**2
    h_form = q.h_at(X, y)
    new_h = sp.Poly(sp.expand(h_form + 2 * s_form), x, y)
    new_f = sp.Poly(sp.expand(q.f_at(X, y) - s_form**2 - h_form * s_form), x, y)
    h_coeffs = [int(new_h.coeff_monomial(x**(2 - i) * y**i)) for i in range(3)]
    f_coeffs = [int(new_f.coeff_monomial(x**(4 - i) * y**i)) for i in range(5)]
    return GBQInt(*h_coeffs, *f_coeffs)


# ---------------------------------------------------------------------------
# Generic two-variable refinement (all p, the only path at p = 2)
# ---------------------------------------------------------------------------

Bivariate = Dict[Tuple[int, int], int]


def _chart_polynomial(q: GBQInt, chart: int) -> Bivariate:
    """F restricted to y = 1 (chart 1) or x = 1 (chart 2) as {(deg_u, deg_z): coeff}"""
    l, m, n = q.h
    f = q.f
    poly: Bivariate = {(0, 2): 1}
    if chart == 1:
        h_by_degree = (n, m, l)
        f_by_degree = tuple(reversed(f))
    else:
        h_by_degree = (l, m, n)
        f_by_degree = f
    for i, coeff in enumerate(h_by_degree):
        if coeff:
            poly[(i, 1)] = poly.get((i, 1), 0) + coeff
    for i, coeff in enumerate(f_by_degree):
        if coeff:
            poly[(i, 0)] = poly.get((i, 0), 0) - coeff
    return poly


def _evaluate_bivariate(poly: Bivariate, u: int, z: int) -> Tuple[int, int, int]:
    """(G, G_u, G_z) at an integer point"""
    value = du = dz = 0
    for (i, j), coeff in poly.items():
        value += coeff * u**i * z**j
        if i:
            du += coeff * i * u**(i - 1) * z**j
        if j:
            dz += coeff * j * u**i * z**(j - 1)
    return value, du, dz


def _shift_bivariate(poly: Bivariate, u0: int, z0: int, p: int) -> Bivariate:
    """G(u0 + p U, z0 + p Z)"""
    out: Bivariate = {}
    for (i, j), coeff in poly.items():
        for a in range(i + 1):
            ua = math.comb(i, a) * u0**(i - a) * p**a
            for b in range(j + 1):
                term = coeff * ua * math.comb(j, b) * z0**(j - b) * p**b
                if term:
                    out[(a, b)] = out.get((a, b), 0) + term
    return {k: v for k, v in out.items() if v}


def _min_valuation(coefficients, p: int, cap: int) -> int:
    """Smallest p-adic valuation among the coefficients, at most cap"""
    best = cap
    for coeff in coefficients:
        if not coeff:
            continue
        v = 0
        while coeff % p == 0 and v < best:
            coeff //= p
            v += 1
        best = min(best, v)
        if best == 0:
            break
    return best


def _refine_generic(ctx: _SearchContext, poly: Bivariate, chart: int, k: int, content: int,
                    origin: Tuple[int, int], depth: int) -> Tuple[VerdictKind, Optional[Witness]]:
    p = ctx.p
    ctx.deepest = max(ctx.deepest, depth)
    if ctx.precision is not None and content >= ctx.precision:
        return VerdictKind.UNDECIDED, None
    if depth >= ctx.max_depth:
        return VerdictKind.UNDECIDED, None

    scale = p**k
    u_residues = (0,) if (chart == 2 and depth == 0) else range(p)
    singular = []
    for u0 in u_residues:
        for z0 in range(p):
            value, du, dz = _evaluate_bivariate(poly, u0, z0)
            if value % p:
                continue
            if du % p or dz % p:
                witness = Witness(chart, Fraction(origin[0] + scale * u0), Fraction(origin[1] + scale * z0),
                                  'u' if du % p else 'z', content + 1)
                return VerdictKind.SOLUBLE, witness
            singular.append((u0, z0))

    outcome = VerdictKind.INSOLUBLE
    for u0, z0 in singular:
        shifted = _shift_bivariate(poly, u0, z0, p)
        cap = 10**9 if ctx.precision is None else ctx.precision - content
        step = _min_valuation(shifted.values(), p, cap)
        if ctx.precision is not None and content + step >= ctx.precision:
            outcome = VerdictKind.UNDECIDED
            continue
        divisor = p**step
        reduced = {key: value // divisor for key, value in shifted.items()}
        kind, witness = _refine_generic(ctx, reduced, chart, k + 1, content + step,
                                        (origin[0] + scale * u0, origin[1] + scale * z0), depth + 1)
        if kind is VerdictKind.SOLUBLE:
            return kind, witness
        if kind is VerdictKind.UNDECIDED:
            outcome = kind
    return outcome, None


# ---------------------------------------------------------------------------
# Odd p: h^2 + 4f must take a square value
# ---------------------------------------------------------------------------

def _horner(coeffs: Sequence[int], t: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _shift_univariate(coeffs: Sequence[int], t0: int, p: int) -> List[int]:
    """g(t0 + p t)"""
    shifted = list(coeffs)
    n = len(shifted)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            shifted[j] += t0 * shifted[j + 1]
    return [c * p**i for i, c in enumerate(shifted)]


def _chart_discriminant(q: GBQInt, chart: int) -> List[int]:
    """h^2 + 4f on the chart as a univariate integer polynomial, lowest degree first"""
    D = q.completed_square()
    return list(reversed(D)) if chart == 1 else list(D)


def _discriminant_witness(ctx: _SearchContext, chart: int, u: int) -> Witness:
    """z = (-h + sqrt(h^2 + 4f)) / 2 approximated far enough for the Hensel certificate in z"""
    p, q = ctx.p, ctx.q
    x, y = (u, 1) if chart == 1 else (1, u)
    D = _horner(_chart_discriminant(q, chart), u)
    h_value = q.h_at(x, y)
    if D == 0:
        return Witness(chart, Fraction(u), Fraction(-h_value, 2), 'z', 0)

    half_v = int(valuation(D, p)) // 2
    modulus = p**WITNESS_DIGITS
    unit = (D // p**(2 * half_v)) % modulus
    root = sqrt_mod(unit, modulus)
    s = p**half_v * root
    lifted_modulus = p**(WITNESS_DIGITS + half_v)
    z = ((s - h_value) * pow(2, -1, lifted_modulus)) % lifted_modulus
    return Witness(chart, Fraction(u), Fraction(z), 'z', 2 * half_v + WITNESS_DIGITS)


def _refine_discriminant(ctx: _SearchContext, g: List[int], chart: int, k: int, exponent: int,
                         origin: int, depth: int) -> Tuple[VerdictKind, Optional[Witness]]:
    """Does p^exponent * g(t) take a square value for some t in Z_p (t = 0 mod p on chart 2's top)?"""
    p = ctx.p
    K = ctx.precision
    ctx.deepest = max(ctx.deepest, depth)
    if K is not None and exponent >= K:
        return VerdictKind.UNDECIDED, None
    if depth >= ctx.max_depth:
        return VerdictKind.UNDECIDED, None

    scale = p**k
    residues = (0,) if (chart == 2 and depth == 0) else range(p)
    candidates = []
    for t0 in residues:
        value = _horner(g, t0)
        u = origin + scale * t0
        if value == 0:
            if K is None:
                return VerdictKind.SOLUBLE, _discriminant_witness(ctx, chart, u)
            candidates.append(t0)
            continue
        v = int(valuation(value, p))
        known = K is None or exponent + v < K
        if known and (exponent + v) % 2 == 0 and is_quad_residue((value // p**v) % p, p):
            return VerdictKind.SOLUBLE, _discriminant_witness(ctx, chart, u)
        if v >= 1:
            candidates.append(t0)

    outcome = VerdictKind.INSOLUBLE
    for t0 in candidates:
        shifted = _shift_univariate(g, t0, p)
        cap = 10**9 if K is None else K - exponent
        step = _min_valuation(shifted, p, cap)
        if not any(shifted) or (K is not None and exponent + step >= K):
            outcome = VerdictKind.UNDECIDED
            continue
        divisor = p**step
        kind, witness = _refine_discriminant(ctx, [c // divisor for c in shifted], chart, k + 1,
                                             exponent + step, origin + scale * t0, depth + 1)
        if kind is VerdictKind.SOLUBLE:
            return kind, witness
        if kind is VerdictKind.UNDECIDED:
            outcome = kind
    return outcome, None


def decide(p: int, q: GBQInt, max_depth: int = None, method: str = 'auto',
           precision: int = None) -> SolubilityVerdict:
    """
    Decide whether z^2 + h z = f has a Q_p-point
    A smooth point of the reduction mod p settles it at depth 1
    method: 'generic' (two-variable refinement), 'discriminant' (odd p only) or 'auto'
    precision: treat the coefficients as known only mod p^precision; branches that
    would need more digits come back Undecided
    """
    _check_prime(p)
    max_depth = SETTINGS.padic_max_depth if max_depth is None else max_depth
    if max_depth < 1:
        raise DomainError(f"max_depth must be at least 1, got {max_depth}")
    if method == 'auto':
        method = 'generic' if p == 2 else 'discriminant'
    if method == 'discriminant' and p == 2:
        raise DomainError("The discriminant method needs an odd prime")
    if method not in ('generic', 'discriminant'):
        raise DomainError(f"Unknown method {method!r}")

    if precision is None or precision >= 1:
        witness = _smooth_point_witness(p, q)
        if witness is not None:
            return SolubilityVerdict(VerdictKind.SOLUBLE, witness, 1)

    ctx = _SearchContext(p, q, max_depth, precision)
    kinds = []
    for chart in (1, 2):
        if method == 'generic':
            kind, witness = _refine_generic(ctx, _chart_polynomial(q, chart), chart, 0, 0, (0, 0), 0)
        else:
            kind, witness = _refine_discriminant(ctx, _chart_discriminant(q, chart), chart, 0, 0, 0, 0)
        if kind is VerdictKind.SOLUBLE:
            return SolubilityVerdict(kind, witness, ctx.deepest + 1)
        kinds.append(kind)

    kind = VerdictKind.UNDECIDED if VerdictKind.UNDECIDED in kinds else VerdictKind.INSOLUBLE
    if kind is VerdictKind.UNDECIDED:
        logger.debug(f"Undecided at p={p} for {q.coefficients()} (depth {ctx.deepest})")
    return SolubilityVerdict(kind, None, ctx.deepest + 1)


def verify_witness(p: int, q: GBQInt, witness: Witness) -> bool:
    """Check v(F) > 2 v(dF/dvariable) at the witness (F = 0 exactly also passes)"""
    if witness.chart not in (1, 2) or witness.variable not in ('u', 'z'):
        raise DomainError(f"Malformed witness {witness}")
    x, y, z = witness.point()
    if any(valuation(c, p) < 0 for c in (x, y, z)):
        raise DomainError(f"Witness {witness} is not p-integral")

    value = q.evaluate(x, y, z)
    if value == 0:
        return True
    fx, fy, fz = q.partials(x, y, z)
    if witness.variable == 'z':
        derivative = fz
    else:
        derivative = fx if witness.chart == 1 else fy
    if derivative == 0:
        return False
    return valuation(value, p) > 2 * valuation(derivative, p)


# ---------------------------------------------------------------------------
# Monte Carlo estimate of the local density
# ---------------------------------------------------------------------------

@dataclass
class LocalSampleReport:
    p: int
    model: ModelKind
    n: int
    seed: int
    digits: int
    counts: Dict[str, int] = field(default_factory=dict)

    def fraction(self, kind: VerdictKind) -> Fraction:
        return Fraction(self.counts.get(kind.value, 0), self.n)

    @property
    def soluble_frac(self) -> Fraction:
        return self.fraction(VerdictKind.SOLUBLE)

    @property
    def insoluble_frac(self) -> Fraction:
        return self.fraction(VerdictKind.INSOLUBLE)

    @property
    def undecided_frac(self) -> Fraction:
        return self.fraction(VerdictKind.UNDECIDED)

    def error_bar(self, sigmas: float = 4.0) -> float:
        """sigmas times the binomial standard error of soluble_frac"""
        f = float(self.soluble_frac)
        return sigmas * math.sqrt(max(f * (1 - f), 1e-12) / self.n)

    def to_dict(self) -> dict:
        return {
            'p': self.p,
            'model': self.model.value,
            'n': self.n,
            'seed': self.seed,
            'digits': self.digits,
            'block_size': SAMPLE_BLOCK_SIZE,
            'soluble': str(self.soluble_frac),
            'insoluble': str(self.insoluble_frac),
            'undecided': str(self.undecided_frac),
            'soluble_decimal': f"{float(self.soluble_frac):.6f}",
            'error_bar_4sigma': f"{self.error_bar():.6f}",
        }


def _draw_block(p: int, digits: int, seed: int, block: int, count: int) -> List[List[int]]:
    """Coefficient tuples uniform mod p^digits, from a Philox stream keyed by (seed, block)"""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))
    digit_array = rng.integers(0, p, size=(count, 8, digits), dtype=np.int64)
    # combine digits in int64-safe chunks, then join the chunks with Python ints
    chunk = max(1, int(62 / math.log2(p)))
    values = [[0] * 8 for _ in range(count)]
    for start in range(0, digits, chunk):
        stop = min(digits, start + chunk)
        powers = np.array([p**i for i in range(stop - start)], dtype=np.int64)
        partial = digit_array[:, :, start:stop] @ powers
        weight = p**start
        for row in range(count):
            for col in range(8):
                values[row][col] += int(partial[row, col]) * weight
    return values


def _run_block(args) -> Counter:
    p, model_value, digits, seed, block, count, max_depth = args
    model = ModelKind(model_value)
    tally = Counter()
    for coeffs in _draw_block(p, digits, seed, block, count):
        if model is ModelKind.PLAIN:
            coeffs[0] = coeffs[1] = coeffs[2] = 0
        verdict = decide(p, GBQInt(*coeffs), max_depth=max_depth, precision=digits)
        tally[verdict.kind.value] += 1
    return tally


def monte_carlo_local(p: int, model: ModelKind, n: int, seed: int, digits: int = None,
                      workers: int = None, max_depth: int = None,
                      progress: bool = None) -> LocalSampleReport:
    """
    Estimate rho(p) by sampling coefficient tuples mod p^digits
    Blocks of SAMPLE_BLOCK_SIZE samples are keyed by (seed, block index), so the
    tallies do not depend on how many workers share the blocks
    """
    _check_prime(p)
    digits = SETTINGS.sample_digits if digits is None else digits
    workers = SETTINGS.workers if workers is None else workers
    max_depth = SETTINGS.padic_max_depth if max_depth is None else max_depth
    progress = SETTINGS.progress if progress is None else progress
    if n < 1:
        raise DomainError(f"Sample count must be positive, got {n}")
    if digits < 8:
        raise DomainError(f"Sampling precision must be at least 8 digits, got {digits}")
    if seed < 0:
        raise DomainError(f"Seed must be non-negative, got {seed}")

    jobs = []
    for block, start in enumerate(range(0, n, SAMPLE_BLOCK_SIZE)):
        count = min(SAMPLE_BLOCK_SIZE, n - start)
        jobs.append((p, model.value, digits, seed, block, count, max_depth))

    tally = Counter()
    if workers <= 1:
        results = map(_run_block, jobs)
        for result in tqdm(results, total=len(jobs), desc=f"p={p} samples", disable=not progress):
            tally.update(result)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_run_block, jobs)
            for result in tqdm(results, total=len(jobs), desc=f"p={p} samples", disable=not progress):
                tally.update(result)

    report = LocalSampleReport(p, model, n, seed, digits, dict(tally))
    logger.info(f"p={p} {model.value}: soluble {float(report.soluble_frac):.6f} "
                f"+/- {report.error_bar():.6f}, undecided {report.counts.get('undecided', 0)}/{n}")
    if report.counts.get(VerdictKind.UNDECIDED.value):
        logger.warning(f"{report.counts[VerdictKind.UNDECIDED.value]} samples at p={p} needed more "
                       f"than {digits} digits")
    return report


# Usage example
if __name__ == "__main__":
    from settings import configure_logging

    configure_logging()
    verdict = decide(3, GBQInt.plain(9, 0, 0, 0, 9))
    print(verdict)
    print(verify_witness(3, GBQInt.plain(9, 0, 0, 0, 9), verdict.witness))
    print(monte_carlo_local(3, ModelKind.GENERALIZED, 4096, seed=1).to_dict())
