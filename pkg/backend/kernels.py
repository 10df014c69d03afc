"""
de Sitter kernels E, K0, K1 and the derivative combinations that generate
the Dirac tail, together with their late-time leading terms per mass class.
"""
from __future__ import annotations

import cmath
import enum
import logging
import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional

from .errors import LightConeError, ParameterError, PreconditionError
from .specfun import Hyp2F1Params, gamma, hyp2f1, rgamma

logger = logging.getLogger(__name__)

LIGHTCONE_TOL = 1e-12       # minimal (1+tau)^2 - A^2 accepted
LATTICE_TOL = 1e-9          # relative to |H|
K0_STEP = 1e-5
ASYMPTOTE_TAU_MAX = 0.1
LN2 = math.log(2.0)
LN4 = math.log(4.0)


@dataclass(frozen=True)
class CosmologyParams:
    """Hubble constant H and complex mass m."""

    H: float
    m: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "H", float(self.H))
        object.__setattr__(self, "m", complex(self.m))
        if self.H == 0:
            raise ParameterError("H must be nonzero")
        if self.H < 0:
            logger.warning("H=%g < 0 describes a contracting universe", self.H)

    @property
    def M_plus(self) -> complex:
        return 0.5 * self.H + 1j * self.m

    @property
    def M_minus(self) -> complex:
        return 0.5 * self.H - 1j * self.m

    @property
    def mu(self) -> complex:
        """i m / H."""
        return 1j * self.m / self.H

    def mirrored(self) -> "CosmologyParams":
        return replace(self, m=-self.m)

    def with_ell(self, ell: int) -> "CosmologyParams":
        return replace(self, m=lattice_mass(ell, self.H))


@dataclass(frozen=True)
class LightconeCoords:
    """tau = e^{-Ht}, A = Hr and the hypergeometric argument z at (r, t)."""

    r: float
    t: float
    tau: float
    A: float
    z: float
    one_minus_z: float

    @classmethod
    def at(cls, r: float, t: float, H: float) -> "LightconeCoords":
        tau = math.exp(-H * t)
        A = H * r
        base = (1.0 + tau) ** 2 - A * A
        if base <= LIGHTCONE_TOL:
            raise LightConeError(
                f"(r={r}, t={t}) is on or outside the light cone: (1+tau)^2 - (Hr)^2 = {base:.3e}")
        return cls(r=r, t=t, tau=tau, A=A,
                   z=((1.0 - tau) ** 2 - A * A) / base,
                   one_minus_z=4.0 * tau / base)

    @property
    def base(self) -> float:
        """(1+tau)^2 - A^2."""
        return (1.0 + self.tau) ** 2 - self.A * self.A


class MassTag(enum.Enum):
    GENERIC = "GENERIC"
    ODD_NEG = "ODD_NEG"
    ODD_POS = "ODD_POS"
    EVEN_POS = "EVEN_POS"
    EVEN_NEG = "EVEN_NEG"
    MINUS_HALF = "MINUS_HALF"
    PLUS_HALF = "PLUS_HALF"
    ZERO = "ZERO"
    PLUS_IH = "PLUS_IH"
    MINUS_IH = "MINUS_IH"


HUYGENSIAN_TAGS = frozenset({MassTag.ZERO, MassTag.PLUS_IH, MassTag.MINUS_IH})
POSITIVE_TAGS = frozenset({MassTag.PLUS_HALF, MassTag.EVEN_POS, MassTag.ODD_POS})
NEGATIVE_TAGS = frozenset({MassTag.EVEN_NEG, MassTag.ODD_NEG})

_SPECIAL_ELL = {
    -1: MassTag.ZERO,
    1: MassTag.PLUS_IH,
    -3: MassTag.MINUS_IH,
    0: MassTag.PLUS_HALF,
    -2: MassTag.MINUS_HALF,
}


@dataclass(frozen=True)
class MassClass:
    """Position of m relative to the lattice m = i(H/2)(1+ell)."""

    tag: MassTag
    ell: Optional[int] = None

    @classmethod
    def from_ell(cls, ell: int) -> "MassClass":
        ell = int(ell)
        if ell in _SPECIAL_ELL:
            return cls(_SPECIAL_ELL[ell], ell)
        if ell % 2:
            return cls(MassTag.ODD_POS if ell > 0 else MassTag.ODD_NEG, ell)
        return cls(MassTag.EVEN_POS if ell > 0 else MassTag.EVEN_NEG, ell)

    @property
    def k(self) -> Optional[int]:
        """k with ell = 2k+1 (odd) or ell = 2k (even)."""
        if self.ell is None:
            return None
        return (self.ell - 1) // 2 if self.ell % 2 else self.ell // 2

    @property
    def huygensian(self) -> bool:
        return self.tag in HUYGENSIAN_TAGS

    def __str__(self):
        return self.tag.value if self.ell is None else f"{self.tag.value}(ell={self.ell})"


def lattice_mass(ell: int, H: float) -> complex:
    return 0.5j * H * (1 + ell)


def lattice_index(cp: CosmologyParams, tol: float = LATTICE_TOL) -> Optional[int]:
    """ell with m = i(H/2)(1+ell) within tol*|H|, else None."""
    q = -2j * cp.m / cp.H
    n = round(q.real)
    if abs(q - n) <= 2.0 * tol:
        return int(n) - 1
    return None


def phi_dist(t: float, H: float) -> float:
    """Comoving null-cone radius (1 - e^{-Ht})/H."""
    return -math.expm1(-H * t) / H


def _kernel_hyp_params(M: complex, H: float) -> Hyp2F1Params:
    a = 0.5 - M / H
    return Hyp2F1Params(a, a, 1.0)


def kernel_E(r: float, t: float, t0: float, M: complex, cp: CosmologyParams) -> complex:
    H = cp.H
    M = complex(M)
    e0 = math.exp(-H * t0)
    e1 = math.exp(-H * t)
    A2 = (H * r) ** 2
    base = (e0 + e1) ** 2 - A2
    if base <= LIGHTCONE_TOL:
        raise LightConeError(
            f"(r={r}, t={t}; t0={t0}) is on or outside the light cone: base={base:.3e}")
    z = ((e1 - e0) ** 2 - A2) / base
    x = 4.0 * e0 * e1 / base
    mu = M / H
    log_base = math.log(base)
    scale = cmath.exp(M * (t0 + t) + mu * (log_base - LN4) - 0.5 * log_base)
    return scale * hyp2f1(_kernel_hyp_params(M, H), z, one_minus_z=x)


def kernel_K1(r: float, t: float, M: complex, cp: CosmologyParams) -> complex:
    """E(r, t; 0, 0; M) through the explicit light-cone form."""
    c = LightconeCoords.at(r, t, cp.H)
    M = complex(M)
    mu = M / cp.H
    log_base = math.log(c.base)
    scale = cmath.exp(M * t + mu * (log_base - LN4) - 0.5 * log_base)
    return scale * hyp2f1(_kernel_hyp_params(M, cp.H), c.z, one_minus_z=c.one_minus_z)


def kernel_K0(r: float, t: float, M: complex, cp: CosmologyParams,
              h: Optional[float] = None) -> complex:
    """-dE/dt0 at t0 = 0 by central differences with one Richardson step."""
    if h is None:
        h = K0_STEP * min(1.0, 1.0 / abs(cp.H))

    def central(step):
        upper = kernel_E(r, t, step, M, cp)
        lower = kernel_E(r, t, -step, M, cp)
        return (upper - lower) / (2.0 * step)

    return -(4.0 * central(0.5 * h) - central(h)) / 3.0


@dataclass(frozen=True)
class DiracCombo:
    """
    (d/dt - H/2 - i m') K1(r, t; H/2 + i m') in closed form, with m' = sign * m.

    sign=+1 gives the first-pair combination, sign=-1 the second-pair one.
    """

    cp: CosmologyParams
    sign: int = 1

    @cached_property
    def mass(self) -> complex:
        return self.sign * self.cp.m

    @cached_property
    def mu(self) -> complex:
        return 1j * self.mass / self.cp.H

    @cached_property
    def params(self):
        mu = self.mu
        return Hyp2F1Params(1.0 - mu, 1.0 - mu, 2.0), Hyp2F1Params(-mu, -mu, 1.0)

    def _terms(self, c: LightconeCoords):
        p_two, p_one = self.params
        f_two = hyp2f1(p_two, c.z, one_minus_z=c.one_minus_z)
        f_one = hyp2f1(p_one, c.z, one_minus_z=c.one_minus_z)
        tau, A = c.tau, c.A
        return 2.0 * self.mu * (1.0 - tau * tau - A * A) * f_two, (1.0 + tau) * c.base * f_one

    def bracket(self, c: LightconeCoords) -> complex:
        first, second = self._terms(c)
        return first - second

    def term_scale(self, r: float, t: float) -> float:
        """|prefactor| * (|first term| + |second term|): the size rounding acts on."""
        if self.mass == 0:
            return 0.0
        c = LightconeCoords.at(r, t, self.cp.H)
        first, second = self._terms(c)
        return abs(self.prefactor(c)) * (abs(first) + abs(second))

    def prefactor(self, c: LightconeCoords) -> complex:
        H = self.cp.H
        mu = self.mu
        im = 1j * self.mass
        return im * cmath.exp(-2.0 * mu * LN2 + 0.5 * c.t * (2.0 * im - H)
                              + (mu - 2.0) * math.log(c.base))

    def __call__(self, r: float, t: float) -> complex:
        if self.mass == 0:
            return 0j
        c = LightconeCoords.at(r, t, self.cp.H)
        return self.prefactor(c) * self.bracket(c)


def dirac_combo_plus(r: float, t: float, cp: CosmologyParams) -> complex:
    return DiracCombo(cp, 1)(r, t)


def dirac_combo_minus(r: float, t: float, cp: CosmologyParams) -> complex:
    """Mirror of dirac_combo_plus under m -> -m."""
    return DiracCombo(cp, -1)(r, t)


def script_F(tau: float, A: float, ell: int) -> float:
    base = (1.0 + tau) ** 2 - A * A
    if base <= LIGHTCONE_TOL:
        raise LightConeError(f"tau={tau}, A={A} is on or outside the light cone")
    z = ((1.0 - tau) ** 2 - A * A) / base
    x = 4.0 * tau / base
    a = 0.5 * (ell + 1)
    value = (1.0 + tau) * base * hyp2f1(Hyp2F1Params(a, a, 1.0), z, one_minus_z=x)
    if ell != -1:
        value += (ell + 1) * (1.0 - tau * tau - A * A) * hyp2f1(
            Hyp2F1Params(a + 1.0, a + 1.0, 2.0), z, one_minus_z=x)
    return complex(value).real


def lattice_combo(r: float, t: float, cp: CosmologyParams, ell: int) -> float:
    """The first-pair combination at m = i(H/2)(1+ell), written through script_F."""
    c = LightconeCoords.at(r, t, cp.H)
    return (cp.H * 2.0 ** ell * (1 + ell) * c.tau ** (0.5 * (ell + 2))
            * c.base ** (-0.5 * (ell + 5)) * script_F(c.tau, c.A, ell))


def leading_coefficient(cls: MassClass, cp: CosmologyParams) -> complex:
    """Gamma-factor constant of the class' leading late-time bracket."""
    if cls.huygensian:
        return 0j
    if cls.tag is MassTag.GENERIC:
        mu = cp.mu
        return 2.0 * mu * cmath.exp(2.0 * mu * LN4) * gamma(-2.0 * mu) * rgamma(1.0 - mu) ** 2
    ell = cls.ell
    if cls.tag in POSITIVE_TAGS:
        return complex((ell + 1) * math.gamma(ell + 1) / math.gamma(0.5 * (ell + 3)) ** 2
                       * 4.0 ** (-(ell + 1)))
    if cls.tag in NEGATIVE_TAGS:
        return complex(-(ell + 1) * math.gamma(-ell - 2) / math.gamma(0.5 * (1 - ell)) ** 2)
    return complex(4.0 / math.pi)


def asymptote_radius(cls: MassClass, cp: CosmologyParams) -> float:
    """Largest r for which the class' leading term is used."""
    H = abs(cp.H)
    r_max = min(0.5, 0.5 / H)
    if cls.tag is MassTag.ODD_NEG:
        a_k = min(0.5, math.sqrt(-1.0 / (cls.ell + 2)))
        r_max = min(r_max, a_k / H)
    return r_max


def _check_class(cls: MassClass, cp: CosmologyParams):
    ell = lattice_index(cp)
    if cls.tag is MassTag.GENERIC:
        if ell is not None:
            raise ParameterError(f"m={cp.m} lies on the lattice (ell={ell}) but class is GENERIC")
    elif ell != cls.ell:
        raise ParameterError(f"class {cls} does not match m={cp.m} (ell={ell})")


def _check_window(cls: MassClass, cp: CosmologyParams, r: float, t: float):
    tau = math.exp(-cp.H * t)
    if tau >= ASYMPTOTE_TAU_MAX:
        raise PreconditionError(f"e^(-Ht)={tau:.3g} is not below {ASYMPTOTE_TAU_MAX}")
    r_max = asymptote_radius(cls, cp)
    if r > r_max:
        raise PreconditionError(f"r={r} exceeds the radius bound {r_max:.6g} of {cls}")


def tail_asymptote(cls: MassClass, cp: CosmologyParams, r: float, t: float) -> complex:
    """
    Leading late-time bracket.

    GENERIC: the two-term hypergeometric bracket of dirac_combo_plus.
    Lattice classes: script_F(tau, A, ell).
    Huygensian classes: exactly 0.
    """
    _check_class(cls, cp)
    if cls.huygensian:
        return 0j
    _check_window(cls, cp, r, t)
    H = cp.H
    tau = math.exp(-H * t)
    B = 1.0 - (H * r) ** 2
    coeff = leading_coefficient(cls, cp)
    if cls.tag is MassTag.GENERIC:
        mu = cp.mu
        return coeff * cmath.exp((1.0 - 2.0 * mu) * math.log(B)) * cmath.exp(-2j * cp.m * t)
    ell = cls.ell
    if cls.tag in POSITIVE_TAGS:
        return coeff * B ** (ell + 2) * tau ** (-(ell + 1))
    if cls.tag in NEGATIVE_TAGS:
        return coeff * (1.0 + (ell + 2) * (H * r) ** 2) * tau
    return coeff * tau * (-math.log(tau) + math.log(B) + B - 2.0 + 2.0 * LN2)


def combo_asymptote(cls: MassClass, cp: CosmologyParams, r: float, t: float) -> complex:
    """Leading late-time value of the full first-pair combination (prefactor times bracket)."""
    bracket = tail_asymptote(cls, cp, r, t)
    if bracket == 0:
        return 0j
    H = cp.H
    B = 1.0 - (H * r) ** 2
    if cls.tag is MassTag.GENERIC:
        mu = cp.mu
        im = 1j * cp.m
        return im * cmath.exp(-2.0 * mu * LN2 + 0.5 * t * (2.0 * im - H)
                              + (mu - 2.0) * math.log(B)) * bracket
    ell = cls.ell
    tau = math.exp(-H * t)
    return H * 2.0 ** ell * (1 + ell) * tau ** (0.5 * (ell + 2)) * B ** (-0.5 * (ell + 5)) * bracket
