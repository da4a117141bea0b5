# exact_math.py
"""
Exact arithmetic foundation
Rationals, dyadic rationals, outward-rounded dyadic intervals, dense
univariate polynomials, rational functions and Sturm root counting
"""

import math
from enum import Enum
from fractions import Fraction
from typing import Iterable, List, Sequence, Union

import sympy as sp

from errors import DomainError

Rational = Fraction
Number = Union[int, Fraction, 'Dyadic']

DEFAULT_PRECISION = 128


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions, Dyadics and decimal strings to a Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Dyadic):
        return value.to_fraction()
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    raise TypeError(f"Cannot convert {type(value).__name__} to an exact rational")


def format_decimal(value, places: int = 6, direction: str = 'nearest') -> str:
    """
    Render an exact value with a fixed number of decimals
    direction: 'down' (floor), 'up' (ceiling) or 'nearest'
    """
    q = as_fraction(value)
    scaled = q * 10**places
    if direction == 'down':
        n = math.floor(scaled)
    elif direction == 'up':
        n = math.ceil(scaled)
    elif direction == 'nearest':
        n = round(scaled)
    else:
        raise DomainError(f"Unknown rounding direction {direction!r}")

    sign = '-' if n < 0 else ''
    digits = str(abs(n)).rjust(places + 1, '0')
    if places == 0:
        return f"{sign}{digits}"
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


# ---------------------------------------------------------------------------
# Dyadic rationals
# ---------------------------------------------------------------------------

class Dyadic:
    """Exact value mantissa * 2**exponent, kept with odd mantissa (or zero)"""

    __slots__ = ('mantissa', 'exponent')

    def __init__(self, mantissa: int, exponent: int = 0):
        mantissa = int(mantissa)
        exponent = int(exponent)
        if mantissa == 0:
            exponent = 0
        else:
            tz = (mantissa & -mantissa).bit_length() - 1
            if tz:
                mantissa >>= tz
                exponent += tz
        self.mantissa = mantissa
        self.exponent = exponent

    @classmethod
    def from_fraction(cls, value) -> 'Dyadic':
        """Exact conversion; the denominator must be a power of two"""
        if isinstance(value, Dyadic):
            return value
        q = as_fraction(value)
        den = q.denominator
        if den & (den - 1):
            raise DomainError(f"{q} is not a dyadic rational")
        return cls(q.numerator, -(den.bit_length() - 1))

    @classmethod
    def parse(cls, text: str) -> 'Dyadic':
        """Parse the 'mantissa/2^k' encoding (value = mantissa / 2**k)"""
        try:
            mant, power = text.strip().split('/2^')
            return cls(int(mant), -int(power))
        except ValueError as exc:
            raise DomainError(f"Malformed dyadic {text!r}") from exc

    def format(self) -> str:
        return f"{self.mantissa}/2^{-self.exponent}"

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)

    def scaled_numerator(self, exponent: int) -> int:
        """Integer n with self == n * 2**exponent (exponent must be small enough)"""
        shift = self.exponent - exponent
        if shift < 0:
            raise DomainError(f"{self.format()} is not a multiple of 2^{exponent}")
        return self.mantissa << shift

    def sign(self) -> int:
        return (self.mantissa > 0) - (self.mantissa < 0)

    def round(self, precision: int, up: bool) -> 'Dyadic':
        """Round to at most `precision` mantissa bits, towards +inf if up else -inf"""
        excess = abs(self.mantissa).bit_length() - precision
        if excess <= 0:
            return self
        if up:
            return Dyadic(-((-self.mantissa) >> excess), self.exponent + excess)
        return Dyadic(self.mantissa >> excess, self.exponent + excess)

    def half(self) -> 'Dyadic':
        return Dyadic(self.mantissa, self.exponent - 1)

    def _coerce(self, other) -> 'Dyadic':
        if isinstance(other, Dyadic):
            return other
        if isinstance(other, int):
            return Dyadic(other)
        if isinstance(other, Fraction):
            return Dyadic.from_fraction(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.mantissa == 0:
            return other
        if other.mantissa == 0:
            return self
        e = min(self.exponent, other.exponent)
        return Dyadic((self.mantissa << (self.exponent - e)) + (other.mantissa << (other.exponent - e)), e)

    __radd__ = __add__

    def __neg__(self):
        return Dyadic(-self.mantissa, self.exponent)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Dyadic(self.mantissa * other.mantissa, self.exponent + other.exponent)

    __rmul__ = __mul__

    def _cmp(self, other) -> int:
        if isinstance(other, Dyadic):
            diff = self - other
            return diff.sign()
        q = self.to_fraction()
        other = as_fraction(other)
        return (q > other) - (q < other)

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.mantissa == other.mantissa and self.exponent == other.exponent
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash(self.to_fraction())

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        return math.ldexp(float(self.mantissa), self.exponent) if abs(self.mantissa) < 2**1000 \
            else float(self.to_fraction())

    def __repr__(self):
        return f"Dyadic({self.format()})"


def round_rational(value, precision: int, up: bool) -> Dyadic:
    """Directed rounding of an exact rational to a dyadic with `precision` mantissa bits"""
    q = as_fraction(value)
    if q == 0:
        return Dyadic(0)
    if q < 0:
        return -round_rational(-q, precision, not up)

    num, den = q.numerator, q.denominator
    e = num.bit_length() - den.bit_length() - precision
    while True:
        if e >= 0:
            m, rem = divmod(num, den << e)
        else:
            m, rem = divmod(num << -e, den)
        if m >= 1 << precision:
            e += 1
        elif m < 1 << (precision - 1):
            e -= 1
        else:
            break
    if up and rem:
        m += 1
    return Dyadic(m, e)


# ---------------------------------------------------------------------------
# Dyadic intervals with outward rounding
# ---------------------------------------------------------------------------

class DyadicInterval:
    """Closed interval [lo, hi] with dyadic endpoints, rounded outward after every operation"""

    __slots__ = ('lo', 'hi', 'precision')

    def __init__(self, lo, hi, precision: int = DEFAULT_PRECISION):
        lo = Dyadic.from_fraction(lo)
        hi = Dyadic.from_fraction(hi)
        if precision < 2:
            raise DomainError(f"Interval precision must be at least 2 bits, got {precision}")
        if lo > hi:
            raise DomainError(f"Empty interval [{lo.format()}, {hi.format()}]")
        self.lo = lo
        self.hi = hi
        self.precision = precision

    @classmethod
    def from_rational(cls, value, precision: int = DEFAULT_PRECISION) -> 'DyadicInterval':
        """Tightest enclosure of an exact rational at the given precision"""
        return cls(round_rational(value, precision, up=False),
                   round_rational(value, precision, up=True), precision)

    @classmethod
    def from_bounds(cls, lo, hi, precision: int = DEFAULT_PRECISION) -> 'DyadicInterval':
        """Enclosure of [lo, hi] for rational (not necessarily dyadic) endpoints"""
        return cls(round_rational(lo, precision, up=False),
                   round_rational(hi, precision, up=True), precision)

    def _new(self, lo: Dyadic, hi: Dyadic, precision: int) -> 'DyadicInterval':
        return DyadicInterval(lo.round(precision, up=False), hi.round(precision, up=True), precision)

    def __add__(self, other):
        other = _as_interval(other, self.precision)
        precision = max(self.precision, other.precision)
        return self._new(self.lo + other.lo, self.hi + other.hi, precision)

    __radd__ = __add__

    def __mul__(self, other):
        other = _as_interval(other, self.precision)
        precision = max(self.precision, other.precision)
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return self._new(min(products), max(products), precision)

    __rmul__ = __mul__

    def __neg__(self):
        return DyadicInterval(-self.hi, -self.lo, self.precision)

    def __sub__(self, other):
        return self + (-_as_interval(other, self.precision))

    def width(self) -> Fraction:
        return (self.hi - self.lo).to_fraction()

    def contains(self, value) -> bool:
        if isinstance(value, DyadicInterval):
            return self.lo <= value.lo and value.hi <= self.hi
        q = as_fraction(value)
        return self.lo <= q <= self.hi

    def is_subset(self, other: 'DyadicInterval') -> bool:
        return other.contains(self)

    def intersects(self, other: 'DyadicInterval') -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def midpoint(self) -> Fraction:
        return (self.lo.to_fraction() + self.hi.to_fraction()) / 2

    def to_dict(self, places: int = 6) -> dict:
        """Exact endpoints plus outward-rounded decimal renderings"""
        return {
            'lo': self.lo.format(),
            'hi': self.hi.format(),
            'lo_decimal': format_decimal(self.lo, places, 'down'),
            'hi_decimal': format_decimal(self.hi, places, 'up'),
            'precision': self.precision,
        }

    def __eq__(self, other):
        if not isinstance(other, DyadicInterval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __repr__(self):
        return f"[{format_decimal(self.lo, 9, 'down')}, {format_decimal(self.hi, 9, 'up')}]"


def _as_interval(value, precision: int) -> DyadicInterval:
    if isinstance(value, DyadicInterval):
        return value
    return DyadicInterval.from_rational(value, precision)


def interval_add(a: DyadicInterval, b: DyadicInterval) -> DyadicInterval:
    return a + b


def interval_mul(a: DyadicInterval, b: DyadicInterval) -> DyadicInterval:
    return a * b


# ---------------------------------------------------------------------------
# Dense univariate polynomials over Q
# ---------------------------------------------------------------------------

class Poly:
    """Dense polynomial with Fraction coefficients, lowest degree first"""

    __slots__ = ('coefficients',)

    def __init__(self, coefficients: Iterable = ()):
        coeffs = [as_fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients = tuple(coeffs)

    @classmethod
    def from_roots(cls, roots: Sequence, lead=1) -> 'Poly':
        poly = cls([lead])
        for r in roots:
            poly = poly * cls([-as_fraction(r), 1])
        return poly

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial"""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def leading(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def __getitem__(self, i: int) -> Fraction:
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else Fraction(0)

    def __call__(self, x):
        x = as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def derivative(self) -> 'Poly':
        return Poly(i * c for i, c in enumerate(self.coefficients) if i)

    def __add__(self, other):
        other = other if isinstance(other, Poly) else Poly([other])
        n = max(len(self.coefficients), len(other.coefficients))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coefficients)

    def __sub__(self, other):
        other = other if isinstance(other, Poly) else Poly([other])
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = as_fraction(other)
            return Poly(c * a for a in self.coefficients)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __divmod__(self, other: 'Poly'):
        if other.is_zero():
            raise DomainError("Polynomial division by zero")
        rem = list(self.coefficients)
        quot = [Fraction(0)] * max(0, len(rem) - len(other.coefficients) + 1)
        lead = other.leading()
        while len(rem) >= len(other.coefficients) and rem:
            shift = len(rem) - len(other.coefficients)
            factor = rem[-1] / lead
            quot[shift] = factor
            for i, c in enumerate(other.coefficients):
                rem[i + shift] -= factor * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(quot), Poly(rem)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coefficients == other.coefficients
        return NotImplemented

    def __hash__(self):
        return hash(self.coefficients)

    def reflect(self) -> 'Poly':
        """f(-x)"""
        return Poly(-c if i % 2 else c for i, c in enumerate(self.coefficients))

    def reverse(self, degree: int = None) -> 'Poly':
        """x^degree * f(1/x), i.e. the coefficient sequence read backwards"""
        degree = self.degree if degree is None else degree
        padded = [self[i] for i in range(degree + 1)]
        return Poly(reversed(padded))

    def shift(self, c) -> 'Poly':
        """Taylor shift f(x + c)"""
        c = as_fraction(c)
        coeffs = list(self.coefficients)
        n = len(coeffs)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                coeffs[j] += c * coeffs[j + 1]
        return Poly(coeffs)

    def integer_coefficients(self) -> List[int]:
        """Primitive integer coefficient list with the same sign and roots"""
        if self.is_zero():
            return []
        lcm = 1
        for c in self.coefficients:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in self.coefficients]
        return _primitive(ints)

    def __repr__(self):
        terms = [f"{c}*x^{i}" for i, c in enumerate(self.coefficients) if c]
        return f"Poly({' + '.join(terms) or '0'})"


# ---------------------------------------------------------------------------
# Sturm sequences over the integers
# ---------------------------------------------------------------------------

def _primitive(coeffs: List[int]) -> List[int]:
    g = 0
    for c in coeffs:
        g = math.gcd(g, c)
    if g > 1:
        return [c // g for c in coeffs]
    return list(coeffs)


def _strip(coeffs: Sequence[int]) -> List[int]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def _positive_prem(a: List[int], b: List[int]) -> List[int]:
    """Remainder of a by b scaled by a positive integer (sign preserving)"""
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    scale = abs(lead)
    sgn = 1 if lead > 0 else -1
    while rem and len(rem) - 1 >= db:
        top = rem[-1] * sgn
        shift = len(rem) - 1 - db
        rem = [scale * c for c in rem]
        for i, bc in enumerate(b):
            rem[i + shift] -= top * bc
        while rem and rem[-1] == 0:
            rem.pop()
    return rem


def sturm_chain(coeffs: Sequence[int]) -> List[List[int]]:
    """Generalised Sturm chain f, f', -rem, ... with positive rescaling"""
    f = _primitive(_strip(coeffs))
    if not f:
        raise DomainError("Sturm chain of the zero polynomial")
    chain = [f]
    if len(f) == 1:
        return chain
    chain.append(_primitive([i * c for i, c in enumerate(f) if i]))
    while True:
        rem = _positive_prem(chain[-2], chain[-1])
        if not rem:
            return chain
        chain.append(_primitive([-c for c in rem]))


def _variations(signs: Iterable[int]) -> int:
    count = 0
    last = 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sign_at(coeffs: Sequence[int], num: int, den: int) -> int:
    """Sign of the polynomial at num/den (den > 0)"""
    deg = len(coeffs) - 1
    acc = 0
    for i, c in enumerate(coeffs):
        acc += c * num**i * den**(deg - i)
    return _sign(acc)


def _variations_at_zero(chain) -> int:
    return _variations(_sign(p[0]) for p in chain)


def _variations_at_plus_inf(chain) -> int:
    return _variations(_sign(p[-1]) for p in chain)


def _variations_at_minus_inf(chain) -> int:
    return _variations(_sign(p[-1]) * (-1 if (len(p) - 1) % 2 else 1) for p in chain)


def _variations_at(chain, point: Fraction) -> int:
    return _variations(_sign_at(p, point.numerator, point.denominator) for p in chain)


def positive_root_count(coeffs: Sequence[int]) -> int:
    """Distinct roots in the open half-line (0, inf) of an integer polynomial with f(0) != 0"""
    chain = sturm_chain(coeffs)
    return _variations_at_zero(chain) - _variations_at_plus_inf(chain)


def _reflect_ints(coeffs: Sequence[int]) -> List[int]:
    return [-c if i % 2 else c for i, c in enumerate(coeffs)]


class HalfLine(Enum):
    NON_NEGATIVE = '+'
    NON_POSITIVE = '-'


def _as_int_coeffs(f) -> List[int]:
    if isinstance(f, Poly):
        return f.integer_coefficients()
    return Poly(f).integer_coefficients()


def count_roots_halfline(f, side: HalfLine) -> int:
    """Number of distinct real roots of f in the closed half-line [0, inf) or (-inf, 0]"""
    coeffs = _as_int_coeffs(f)
    if not coeffs:
        raise DomainError("Root count of the zero polynomial")
    if side is HalfLine.NON_POSITIVE:
        coeffs = _reflect_ints(coeffs)

    zero_root = 0
    while coeffs[0] == 0:
        coeffs = coeffs[1:]
        zero_root = 1
    if len(coeffs) == 1:
        return zero_root
    return positive_root_count(coeffs) + zero_root


def negative_on_positive_halfline(coeffs: Sequence[int]) -> bool:
    """True iff the integer polynomial is < 0 on all of [0, inf), including x -> inf"""
    coeffs = _strip(coeffs)
    if not coeffs or coeffs[0] >= 0 or coeffs[-1] >= 0:
        return False
    if len(coeffs) == 1:
        return True
    if all(c <= 0 for c in coeffs):
        return True
    return positive_root_count(coeffs) == 0


def is_negative_on_halfline(f, side: HalfLine) -> bool:
    """True iff f(x) < 0 for every x on the closed half-line, including its limit at infinity"""
    coeffs = _as_int_coeffs(f)
    if side is HalfLine.NON_POSITIVE:
        coeffs = _reflect_ints(coeffs)
    return negative_on_positive_halfline(coeffs)


def squarefree_part(f: Poly) -> Poly:
    """f / gcd(f, f'), the last element of the Sturm chain being the gcd"""
    chain = sturm_chain(f.integer_coefficients())
    if len(chain) == 1:
        return f
    gcd = Poly(chain[-1])
    quot, rem = divmod(f, gcd)
    if not rem.is_zero():
        raise DomainError("Inexact squarefree division")
    return quot


def count_roots_interval(f, lo, hi) -> int:
    """Distinct real roots of f in the closed interval [lo, hi] with rational endpoints"""
    f = f if isinstance(f, Poly) else Poly(f)
    if f.is_zero():
        raise DomainError("Root count of the zero polynomial")
    lo, hi = as_fraction(lo), as_fraction(hi)
    if lo > hi:
        raise DomainError(f"Empty interval [{lo}, {hi}]")
    g = squarefree_part(f)
    if g.degree <= 0:
        return 0
    chain = sturm_chain(g.integer_coefficients())
    count = _variations_at(chain, lo) - _variations_at(chain, hi)
    return count + (1 if g(lo) == 0 else 0)


def count_real_roots(f) -> int:
    """Distinct real roots over the whole line"""
    coeffs = _as_int_coeffs(f)
    if not coeffs:
        raise DomainError("Root count of the zero polynomial")
    chain = sturm_chain(coeffs)
    return _variations_at_minus_inf(chain) - _variations_at_plus_inf(chain)


# ---------------------------------------------------------------------------
# Rational functions with integer coefficients
# ---------------------------------------------------------------------------

class RatFn:
    """numerator(t) / denominator(t) in lowest terms, denominator primitive with positive lead"""

    __slots__ = ('numerator', 'denominator')

    def __init__(self, numerator, denominator=(1,)):
        num = numerator if isinstance(numerator, Poly) else Poly(numerator)
        den = denominator if isinstance(denominator, Poly) else Poly(denominator)
        if den.is_zero():
            raise DomainError("Rational function with zero denominator")
        t = sp.Symbol('t')
        expr = sp.cancel(_poly_to_sympy(num, t) / _poly_to_sympy(den, t))
        num_expr, den_expr = sp.fraction(expr)
        self.numerator, self.denominator = _normalise_pair(num_expr, den_expr, t)

    @classmethod
    def from_sympy(cls, expr, symbol) -> 'RatFn':
        num_expr, den_expr = sp.fraction(sp.cancel(sp.together(expr)))
        num_coeffs = _sympy_coefficients(num_expr, symbol)
        den_coeffs = _sympy_coefficients(den_expr, symbol)
        return cls(num_coeffs, den_coeffs)

    def to_sympy(self, symbol):
        return _poly_to_sympy(self.numerator, symbol) / _poly_to_sympy(self.denominator, symbol)

    def __call__(self, t0) -> Fraction:
        return ratfn_eval(self, t0)

    def __eq__(self, other):
        if not isinstance(other, RatFn):
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __repr__(self):
        return f"RatFn({self.numerator.coefficients} / {self.denominator.coefficients})"


def _poly_to_sympy(poly: Poly, symbol):
    return sum((sp.Rational(c.numerator, c.denominator) * symbol**i
                for i, c in enumerate(poly.coefficients)), sp.Integer(0))


def _sympy_coefficients(expr, symbol) -> List[Fraction]:
    coeffs = sp.Poly(sp.expand(expr), symbol, domain='QQ').all_coeffs()
    return [Fraction(int(c.p), int(c.q)) for c in reversed(coeffs)]


def _normalise_pair(num_expr, den_expr, symbol):
    num = _sympy_coefficients(num_expr, symbol)
    den = _sympy_coefficients(den_expr, symbol)
    lcm = 1
    for c in num + den:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    num_i = [int(c * lcm) for c in num]
    den_i = [int(c * lcm) for c in den]
    g = 0
    for c in num_i + den_i:
        g = math.gcd(g, c)
    g = g or 1
    if den_i[-1] < 0:
        g = -g
    return Poly(c // g for c in num_i), Poly(c // g for c in den_i)


def ratfn_eval(r: RatFn, t0) -> Fraction:
    """Exact value of r at a rational point"""
    t0 = as_fraction(t0)
    den = r.denominator(t0)
    if den == 0:
        raise DomainError(f"Rational function has a pole at t = {t0}")
    return r.numerator(t0) / den
