"""
Complex gamma, digamma and the Gauss hypergeometric function 2F1.

The hypergeometric dispatcher covers the unit disc around z = 0 with the
Gauss series and the neighbourhood of z = 1 with connection formulas,
including the degenerate cases where c - a - b is an integer and the
z = 0 / z = 1 expansions are tied together by logarithmic series.
"""
from __future__ import annotations

import cmath
import enum
import logging
import math
from dataclasses import dataclass
from functools import cached_property

from .errors import ConvergenceError, ParameterError, PoleError

logger = logging.getLogger(__name__)

SERIES_RADIUS = 0.75        # hyp2f1_series refuses |z| beyond this
SERIES_TOL = 1e-14          # relative stopping tolerance of the Gauss series
CONNECTION_TOL = 1e-13      # relative tolerance of series inside connection formulas
MAX_TERMS = 10**6
INTEGER_TOL = 1e-9          # detection band for integer c-a-b and nonpositive integers
NEAR_ONE_RADIUS = 0.6
NEAR_INTEGER_BAND = 1e-3    # |c-a-b - n| below this cancels digits in the generic connection formula
DISPATCH_RADIUS = 0.5
STALL_TERMS = 3             # consecutive small terms before a series is accepted

# Lanczos approximation, g = 7, n = 9
LANCZOS_G = 7.0
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
SQRT_TWO_PI = math.sqrt(2.0 * math.pi)

# Bernoulli terms B_2k / (2k) of the digamma asymptotic series
DIGAMMA_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)
DIGAMMA_SHIFT = 10.0


def nearest_integer(z: complex, tol: float = INTEGER_TOL):
    """Return the integer within `tol` of z, or None."""
    z = complex(z)
    n = round(z.real)
    if abs(z - n) <= tol:
        return int(n)
    return None


def is_nonpositive_integer(z: complex, tol: float = INTEGER_TOL) -> bool:
    n = nearest_integer(z, tol)
    return n is not None and n <= 0


def gamma(z: complex) -> complex:
    """Complex Gamma function via Lanczos with reflection for Re z < 1/2."""
    z = complex(z)
    if is_nonpositive_integer(z, tol=0.0):
        raise PoleError(f"gamma has a pole at z={z}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * gamma(1.0 - z))
    z -= 1.0
    x = LANCZOS_COEFFS[0]
    for i, coeff in enumerate(LANCZOS_COEFFS[1:], start=1):
        x += coeff / (z + i)
    t = z + LANCZOS_G + 0.5
    return SQRT_TWO_PI * cmath.exp((z + 0.5) * cmath.log(t) - t) * x


def rgamma(z: complex) -> complex:
    """Reciprocal Gamma, exactly zero at the poles of Gamma."""
    if is_nonpositive_integer(z, tol=0.0):
        return 0j
    return 1.0 / gamma(z)


def digamma(z: complex) -> complex:
    """Logarithmic derivative of Gamma: reflection, upward shift, asymptotic series."""
    z = complex(z)
    if is_nonpositive_integer(z, tol=0.0):
        raise PoleError(f"digamma has a pole at z={z}")
    if z.real < 0.5:
        # psi(1-z) - psi(z) = pi cot(pi z)
        return digamma(1.0 - z) - math.pi / cmath.tan(math.pi * z)
    acc = 0j
    while z.real < DIGAMMA_SHIFT:
        acc -= 1.0 / z
        z += 1.0
    inv2 = 1.0 / (z * z)
    series = 0j
    power = inv2
    for coeff in DIGAMMA_ASYMPTOTIC:
        series += coeff * power
        power *= inv2
    return acc + cmath.log(z) - 0.5 / z - series


class ConnectionCase(enum.Enum):
    GENERIC = "GENERIC"
    C_EQ_AB_PLUS_M = "C_EQ_AB_PLUS_M"
    C_EQ_AB_MINUS_M = "C_EQ_AB_MINUS_M"


@dataclass(frozen=True)
class Hyp2F1Params:
    """Parameters (a, b, c) of F(a, b; c; z)."""

    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if is_nonpositive_integer(self.c):
            raise ParameterError(f"c={self.c} is a nonpositive integer")

    @property
    def excess(self) -> complex:
        return self.c - self.a - self.b

    @cached_property
    def offset(self):
        """Integer m with c-a-b = m within tolerance, else None."""
        return nearest_integer(self.excess)

    @property
    def tag(self) -> ConnectionCase:
        m = self.offset
        if m is None:
            return ConnectionCase.GENERIC
        return ConnectionCase.C_EQ_AB_PLUS_M if m >= 0 else ConnectionCase.C_EQ_AB_MINUS_M

    def connection_case(self):
        """(tag, |m|) with m the snapped integer c-a-b, or (GENERIC, None)."""
        m = self.offset
        return self.tag, None if m is None else abs(m)

    @cached_property
    def terminating_degree(self):
        """Degree N when a or b is the nonpositive integer -N, else None."""
        degrees = [-n for n in (nearest_integer(self.a), nearest_integer(self.b))
                   if n is not None and n <= 0]
        return min(degrees) if degrees else None

    @cached_property
    def gauss_value(self) -> complex:
        """F(a,b;c;1) when Re(c-a-b) > 0."""
        s = self.excess
        if s.real <= 0:
            raise ConvergenceError(f"F({self.a},{self.b};{self.c};1) diverges (Re(c-a-b)={s.real})")
        return gamma(self.c) * gamma(s) * rgamma(self.c - self.a) * rgamma(self.c - self.b)


def _pochhammer_sum(a: complex, b: complex, c: complex, z: complex,
                    tol: float, max_terms: int) -> complex:
    """Gauss series with stall-based stopping; exact for terminating parameters."""
    term = 1.0 + 0j
    total = 1.0 + 0j
    small = 0
    n = 0
    while True:
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        n += 1
        if term == 0:
            return total
        if abs(term) < tol * abs(total):
            small += 1
            if small >= STALL_TERMS:
                return total
        else:
            small = 0
        if n >= max_terms:
            raise ConvergenceError(f"Gauss series did not converge in {max_terms} terms (z={z})")


def _terminating_sum(p: Hyp2F1Params, z: complex) -> complex:
    degree = p.terminating_degree
    a, b = p.a, p.b
    if nearest_integer(a) == -degree:
        a = complex(-degree)
    else:
        b = complex(-degree)
    term = 1.0 + 0j
    total = 1.0 + 0j
    for n in range(degree):
        term *= (a + n) * (b + n) / ((p.c + n) * (n + 1)) * z
        total += term
    return total


def hyp2f1_series(p: Hyp2F1Params, z: complex, tol: float = SERIES_TOL,
                  max_terms: int = MAX_TERMS, radius: float = SERIES_RADIUS) -> complex:
    """Direct Gauss series for |z| <= radius."""
    z = complex(z)
    if abs(z) > radius:
        raise ParameterError(f"|z|={abs(z):.6g} exceeds series radius {radius}")
    return _pochhammer_sum(p.a, p.b, p.c, z, tol, max_terms)


def _cpow(x: complex, alpha: complex) -> complex:
    return cmath.exp(alpha * cmath.log(x))


def _connection_generic(p: Hyp2F1Params, x: complex, tol: float, max_terms: int) -> complex:
    a, b, c = p.a, p.b, p.c
    s = p.excess
    first = (gamma(c) * gamma(s) * rgamma(c - a) * rgamma(c - b)
             * _pochhammer_sum(a, b, 1.0 - s, x, tol, max_terms))
    second = (_cpow(x, s) * gamma(c) * gamma(-s) * rgamma(a) * rgamma(b)
              * _pochhammer_sum(c - a, c - b, s + 1.0, x, tol, max_terms))
    return first + second


def _log_series(x: complex, lnx: complex, u: complex, w: complex, m: int,
                tol: float, max_terms: int) -> complex:
    """Sum_n (u)_n (w)_n / (n! (n+m)!) x^n [ln x - psi(n+1) - psi(n+m+1) + psi(u+n) + psi(w+n)]."""
    su, sw = u, w
    coef = 1.0 / math.factorial(m)
    psi_n1 = digamma(1.0)
    psi_nm1 = digamma(m + 1.0)
    psi_u = digamma(su)
    psi_w = digamma(sw)
    total = 0j
    small = 0
    n = 0
    while True:
        term = coef * (lnx - psi_n1 - psi_nm1 + psi_u + psi_w)
        total += term
        if coef == 0:
            return total
        if abs(term) < tol * abs(total):
            small += 1
            if small >= STALL_TERMS:
                return total
        else:
            small = 0
        coef *= (u + n) * (w + n) / ((n + 1) * (n + m + 1)) * x
        psi_n1 += 1.0 / (n + 1)
        psi_nm1 += 1.0 / (n + m + 1)
        psi_u += 1.0 / (su + n)
        psi_w += 1.0 / (sw + n)
        n += 1
        if n >= max_terms:
            raise ConvergenceError(f"logarithmic connection series did not converge (x={x})")


def _connection_plus(p: Hyp2F1Params, x: complex, m: int, tol: float, max_terms: int) -> complex:
    """c = a + b + m, m >= 0."""
    a, b = p.a, p.b
    c = a + b + m
    if x == 0:
        if m == 0:
            raise ConvergenceError(f"F({a},{b};{c};1) diverges logarithmically")
        return gamma(m) * gamma(c) * rgamma(a + m) * rgamma(b + m)
    finite = 0j
    if m > 0:
        term = 1.0 + 0j
        for n in range(m):
            finite += term
            if n + 1 < m:
                term *= (a + n) * (b + n) / ((n + 1) * (1 - m + n)) * x
        finite *= gamma(m) * gamma(c) * rgamma(a + m) * rgamma(b + m)
    lnx = cmath.log(x)
    logs = _log_series(x, lnx, a + m, b + m, m, tol, max_terms)
    return finite - (-1) ** m * x ** m * gamma(c) * rgamma(a) * rgamma(b) * logs


def _connection_minus(p: Hyp2F1Params, x: complex, m: int, tol: float, max_terms: int) -> complex:
    """c = a + b - m, m >= 1."""
    a, b = p.a, p.b
    c = a + b - m
    if x == 0:
        raise ConvergenceError(f"F({a},{b};{c};1) diverges (c-a-b={-m})")
    finite = 0j
    term = 1.0 + 0j
    for n in range(m):
        finite += term
        if n + 1 < m:
            term *= (a - m + n) * (b - m + n) / ((n + 1) * (1 - m + n)) * x
    finite *= gamma(m) * gamma(c) * rgamma(a) * rgamma(b) * x ** (-m)
    weight = rgamma(a - m) * rgamma(b - m)
    if weight == 0:
        return finite
    lnx = cmath.log(x)
    logs = _log_series(x, lnx, a, b, m, tol, max_terms)
    return finite - (-1) ** m * gamma(c) * weight * logs


def hyp2f1_near_one(p: Hyp2F1Params, z: complex, tol: float = CONNECTION_TOL,
                    max_terms: int = MAX_TERMS, one_minus_z: complex | None = None) -> complex:
    """
    F(a,b;c;z) for |1-z| <= 0.6 through the connection formulas around z = 1.

    When c-a-b is within NEAR_INTEGER_BAND of an integer without snapping to
    it, the Gauss series is summed instead wherever |z| <= SERIES_RADIUS.
    """
    x = complex(1.0 - complex(z) if one_minus_z is None else one_minus_z)
    if abs(x) > NEAR_ONE_RADIUS:
        raise ParameterError(f"|1-z|={abs(x):.6g} exceeds {NEAR_ONE_RADIUS}")
    tag = p.tag
    if tag is ConnectionCase.GENERIC:
        if x == 0:
            return p.gauss_value
        s = p.excess
        if abs(s - round(s.real)) < NEAR_INTEGER_BAND and abs(1.0 - x) <= SERIES_RADIUS:
            return _pochhammer_sum(p.a, p.b, p.c, 1.0 - x, SERIES_TOL, max_terms)
        return _connection_generic(p, x, tol, max_terms)
    if is_nonpositive_integer(p.a) or is_nonpositive_integer(p.b):
        raise ParameterError("logarithmic connection formulas need a, b not in {0, -1, -2, ...}")
    m = p.offset
    logger.debug("near-one branch %s (m=%d) at x=%s", tag.value, m, x)
    if tag is ConnectionCase.C_EQ_AB_PLUS_M:
        return _connection_plus(p, x, m, tol, max_terms)
    return _connection_minus(p, x, -m, tol, max_terms)


def hyp2f1(p: Hyp2F1Params, z: complex, one_minus_z: complex | None = None) -> complex:
    """Dispatch between polynomial, series, connection and Pfaff evaluations."""
    z = complex(z)
    x = complex(1.0 - z if one_minus_z is None else one_minus_z)
    if p.terminating_degree is not None:
        return _terminating_sum(p, z)
    if abs(z) <= DISPATCH_RADIUS:
        return _pochhammer_sum(p.a, p.b, p.c, z, SERIES_TOL, MAX_TERMS)
    if abs(x) <= NEAR_ONE_RADIUS:
        return hyp2f1_near_one(p, z, one_minus_z=x)
    if z.real < 0:
        w = z / (z - 1.0)
        inner = hyp2f1(Hyp2F1Params(p.a, p.c - p.b, p.c), w, one_minus_z=1.0 / x)
        return _cpow(x, -p.a) * inner
    if abs(z) <= SERIES_RADIUS:
        return _pochhammer_sum(p.a, p.b, p.c, z, SERIES_TOL, MAX_TERMS)
    raise ParameterError(f"z={z} lies outside the supported region")
