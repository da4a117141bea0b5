# global_density.py
"""
Global density as a product of local densities
rho = rho(inf) * prod_p rho(p), enclosed by a finite product over p <= P and a certified tail bound
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import pandas as pd
from tqdm import tqdm

from density_formulas import R_DEFECT_DENOMINATOR, R_DEFECT_NUMERATOR
from errors import CapabilityError, CertificateError, DomainError
from exact_math import DEFAULT_PRECISION, DyadicInterval, Poly, format_decimal
from local_density_recursion import ModelKind, local_density
from settings import SETTINGS

logger = logging.getLogger(__name__)

REPORT_SCHEMA = 'locsol-report v1'
TAIL_CERTIFICATE_START = 3


def tail_certificate() -> Poly:
    """
    3 D(t) - 4 t^2 N(t) expanded in powers of (t - 3), where 1 - R(t) = N(t) / D(t)
    Nonnegative coefficients prove 1 - R(t) <= (3/4) t^-2 for every t >= 3
    """
    denominator = Poly(R_DEFECT_DENOMINATOR)
    numerator = Poly(R_DEFECT_NUMERATOR)
    difference = Poly([3]) * denominator - Poly([0, 0, 4]) * numerator
    shifted = difference.shift(TAIL_CERTIFICATE_START)
    negative = [i for i in range(shifted.degree + 1) if shifted[i] < 0]
    if negative or shifted.is_zero():
        raise CertificateError(f"Tail certificate fails at (t-3)^{negative}: {shifted}")
    return shifted


_CERTIFIED = False


def tail_bound(P: int, precision: int = DEFAULT_PRECISION) -> DyadicInterval:
    """
    Enclosure of prod_{p > P} R(p) inside [1 - 3/(4P), 1]
    sum_{n > P} n^-2 < 1/(P + 1/2) since n^-2 < 1/(n - 1/2) - 1/(n + 1/2), so the lower end
    1 - 3/(4P + 2) keeps a margin above 1 - 3/(4P) after outward rounding
    """
    global _CERTIFIED
    if P < 3:
        raise DomainError(f"Tail bound needs a cutoff of at least 3, got {P}")
    if not _CERTIFIED:
        tail_certificate()
        _CERTIFIED = True
    return DyadicInterval.from_bounds(1 - Fraction(3, 4 * P + 2), 1, precision)


def primes_up_to(P: int) -> np.ndarray:
    """Sieve of Eratosthenes"""
    if P > SETTINGS.prime_cap:
        raise CapabilityError(f"Prime cutoff {P} is above the configured cap {SETTINGS.prime_cap}")
    if P < 2:
        return np.array([], dtype=np.int64)
    sieve = np.ones(P + 1, dtype=bool)
    sieve[:2] = False
    for n in range(2, int(P**0.5) + 1):
        if sieve[n]:
            sieve[n * n::n] = False
    return np.flatnonzero(sieve)


def exact_product(P: int, model: ModelKind = ModelKind.GENERALIZED) -> Fraction:
    """prod_{p <= P} rho(p) as a single rational; only practical for small P"""
    product = Fraction(1)
    for p in primes_up_to(P):
        product *= local_density(int(p), model)
    return product


def finite_product(P: int, model: ModelKind = ModelKind.GENERALIZED, precision: int = DEFAULT_PRECISION,
                   progress: bool = None) -> DyadicInterval:
    """Outward-rounded prod_{p <= P} rho(p), multiplied in ascending prime order"""
    if P < 2:
        raise DomainError(f"Finite product needs a cutoff of at least 2, got {P}")
    progress = SETTINGS.progress if progress is None else progress
    primes = primes_up_to(P)
    product = DyadicInterval.from_rational(1, precision)
    for p in tqdm(primes, desc=f"product to {P}", disable=not progress):
        product = product * DyadicInterval.from_rational(local_density(int(p), model), precision)
    logger.info(f"Product of {len(primes)} local densities up to {P}: {product}")
    return product


@dataclass
class GlobalReport:
    model: ModelKind
    real_part: DyadicInterval
    finite_product: DyadicInterval
    tail: DyadicInterval
    rho: DyadicInterval
    P: int
    rigorous: bool
    provenance: dict = field(default_factory=dict)

    def to_dict(self, places: int = 6) -> dict:
        return {
            'schema': REPORT_SCHEMA,
            'model': self.model.value,
            'P': self.P,
            'real_part': self.real_part.to_dict(places),
            'finite_product': self.finite_product.to_dict(places),
            'tail': self.tail.to_dict(places),
            'rho': self.rho.to_dict(places),
            'rigorous': self.rigorous,
            'provenance': self.provenance,
        }

    def to_json(self, places: int = 6) -> str:
        return json.dumps(self.to_dict(places), indent=2, sort_keys=True)

    def to_frame(self, places: int = 6) -> pd.DataFrame:
        rows = []
        for name in ('real_part', 'finite_product', 'tail', 'rho'):
            interval = getattr(self, name)
            rows.append({
                'factor': name,
                'lower': format_decimal(interval.lo, places, 'down'),
                'upper': format_decimal(interval.hi, places, 'up'),
            })
        return pd.DataFrame(rows)


def rho_interval(model: ModelKind, real_part: DyadicInterval, P: int, precision: int = DEFAULT_PRECISION,
                 real_part_rigorous: bool = True, provenance: dict = None,
                 progress: bool = None) -> GlobalReport:
    """
    Enclosure of rho (plain quartics) or an estimate of rho' (generalized)
    The result is rigorous only for plain quartics with a rigorous real factor
    """
    if P < 3:
        raise DomainError(f"Global assembly needs a cutoff of at least 3, got {P}")
    product = finite_product(P, model, precision, progress)
    tail = tail_bound(P, precision)
    rho = real_part * product * tail
    rigorous = real_part_rigorous and model is ModelKind.PLAIN
    if not rigorous:
        logger.warning(f"{model.value} density at P={P} is an estimate, not a rigorous enclosure")
    provenance = dict(provenance or {})
    provenance.setdefault('precision', precision)
    return GlobalReport(model, real_part, product, tail, rho, P, rigorous, provenance)


# Usage example
if __name__ == "__main__":
    from settings import configure_logging

    configure_logging()
    known_real = DyadicInterval.from_bounds(Fraction('0.873954'), Fraction('0.874124'))
    report = rho_interval(ModelKind.PLAIN, known_real, 10**4)
    print(report.to_frame())
