"""
Cauchy problem solutions in de Sitter spacetime.

kg_solve assembles the generalized Klein-Gordon solution from the kernels
E, K0, K1 and the flat Kirchhoff solutions. The Dirac part evaluates the
origin tail for data in either 2-spinor pair and, for the masses 0 and
+-iH, the full four-component solution along the x3 axis from closed forms.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ParameterError, PreconditionError
from .kernels import (CosmologyParams, DiracCombo, kernel_E, kernel_K0, kernel_K1,
                      lattice_index, phi_dist)
from .quadrature import integrate_complex, integrate_real
from .wave_core import (RadialBump, RadialProfile, V_of, dV_dr, integrated_dV_dr,
                        integrated_V, v_of)

logger = logging.getLogger(__name__)

TAIL_EPSREL = 1e-10
TAIL_EPSABS_SCALE = 1e-13   # absolute tolerance relative to |combination| * int |d(s Phi)/ds|
COMBO_NOISE = 1e-13         # rounding level of combo(s) - combo(0) relative to its unsubtracted terms
CLOSED_FORM_TOL = 1e-9      # |M - target| / |H| accepted as a closed-form mass

# Dirac representation
PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
GAMMA0 = np.diag([1, 1, -1, -1]).astype(complex)
GAMMA = (GAMMA0,) + tuple(np.block([[np.zeros((2, 2)), s], [-s, np.zeros((2, 2))]]) for s in PAULI)
GAMMA3_GAMMA0 = GAMMA[3] @ GAMMA[0]
SPIN_SIGNS = np.diag(GAMMA0).real


class SplitTag(enum.Enum):
    FIRST_PAIR = "first"
    SECOND_PAIR = "second"
    FULL = "full"


@dataclass(frozen=True)
class SpinorData:
    """Radial 4-spinor initial data; None stands for an identically zero component."""

    phi0: Optional[RadialBump] = None
    phi1: Optional[RadialBump] = None
    phi2: Optional[RadialBump] = None
    phi3: Optional[RadialBump] = None
    split: SplitTag = SplitTag.FULL

    def __post_init__(self):
        if self.split is SplitTag.FIRST_PAIR and (self.phi2 is not None or self.phi3 is not None):
            raise ParameterError("first-pair data must have phi2 = phi3 = 0")
        if self.split is SplitTag.SECOND_PAIR and (self.phi0 is not None or self.phi1 is not None):
            raise ParameterError("second-pair data must have phi0 = phi1 = 0")

    @property
    def components(self):
        return (self.phi0, self.phi1, self.phi2, self.phi3)

    @classmethod
    def first(cls, phi0: RadialBump, phi1: Optional[RadialBump] = None) -> "SpinorData":
        return cls(phi0=phi0, phi1=phi1, split=SplitTag.FIRST_PAIR)

    @classmethod
    def second(cls, phi2: RadialBump, phi3: Optional[RadialBump] = None) -> "SpinorData":
        return cls(phi2=phi2, phi3=phi3, split=SplitTag.SECOND_PAIR)


@dataclass(frozen=True)
class SeparableSource:
    """Source f(x, b) = g(b) * profile(|x|)."""

    profile: RadialBump
    temporal: Optional[Callable[[float], float]] = None

    def at(self, b: float) -> RadialBump:
        scale = 1.0 if self.temporal is None else self.temporal(b)
        return self.profile.scaled(scale)


@dataclass(frozen=True)
class KGProblem:
    """u_tt - e^{-2Ht} Laplacian u - M^2 u = f, u(0) = varphi0, u_t(0) = varphi1."""

    M: complex
    cp: CosmologyParams
    varphi0: Optional[RadialProfile] = None
    varphi1: Optional[RadialProfile] = None
    source: Optional[SeparableSource] = None


def _window(phi: RadialProfile, r_center: float, upper: float):
    """Part of [0, upper] where v_of(phi, r_center, .) can be nonzero."""
    return max(0.0, r_center - phi.eps), min(upper, r_center + phi.eps)


def k1_transform(phi: RadialProfile, M: complex, cp: CosmologyParams,
                 r_center: float, t: float) -> complex:
    """2 * int_0^{phi(t)} K1(s, t; M) v_phi(r_center, s) ds by quadrature."""
    lo, hi = _window(phi, r_center, phi_dist(t, cp.H))
    value = integrate_complex(lambda s: kernel_K1(s, t, M, cp) * v_of(phi, r_center, s), lo, hi,
                              name=f"K1 transform (M={M}) at r={r_center:g}, t={t:g}")
    return 2.0 * value


def _closed_mass(M: complex, H: float) -> float:
    for half_units in (1, -1, 3):
        if abs(M - 0.5 * half_units * H) <= CLOSED_FORM_TOL * abs(H):
            return 0.5 * half_units
    raise ParameterError(f"no closed form for the K1 transform at M={M} (H={H})")


def _k1_closed_parts(phi: RadialProfile, M: complex, cp: CosmologyParams,
                     r_center: float, t: float):
    """(U, dU/dt, dU/dr) of the K1 transform for M in {H/2, -H/2, 3H/2}."""
    H = cp.H
    S = phi_dist(t, H)
    tau = math.exp(-H * t)
    V = V_of(phi, r_center, S)
    v = v_of(phi, r_center, S)
    Vr = dV_dr(phi, r_center, S)
    if _closed_mass(M, H) != 1.5:
        grow = math.exp(0.5 * H * t)
        U = grow * V
        return U, 0.5 * H * U + grow * v * tau, grow * Vr
    grow = math.exp(1.5 * H * t)
    c = 0.5 * (1.0 + tau * tau) - 0.5 * (H * S) ** 2
    U = grow * (c * V + H * H * integrated_V(phi, r_center, S))
    U_t = 1.5 * H * U + grow * (-H * tau * tau * V + c * v * tau)
    U_r = grow * (c * Vr + H * H * integrated_dV_dr(phi, r_center, S))
    return U, U_t, U_r


def k1_transform_closed(phi: RadialProfile, M: complex, cp: CosmologyParams,
                        r_center: float, t: float) -> complex:
    return complex(_k1_closed_parts(phi, M, cp, r_center, t)[0])


def kg_solve(p: KGProblem, r_center: float, t: float) -> complex:
    if t < 0:
        raise PreconditionError(f"t={t} must be nonnegative")
    cp, M = p.cp, p.M
    H = cp.H
    S = phi_dist(t, H)
    u = 0j
    if p.varphi0 is not None:
        phi0 = p.varphi0
        u += math.exp(0.5 * H * t) * v_of(phi0, r_center, S)
        lo, hi = _window(phi0, r_center, S)
        u += 2.0 * integrate_complex(
            lambda s: kernel_K0(s, t, M, cp) * v_of(phi0, r_center, s), lo, hi,
            name=f"K0 term at r={r_center:g}, t={t:g}")
    if p.varphi1 is not None:
        u += k1_transform(p.varphi1, M, cp, r_center, t)
    if p.source is not None:
        u += _source_term(p, r_center, t)
    return u


def _source_term(p: KGProblem, r_center: float, t: float) -> complex:
    cp, M = p.cp, p.M
    H = cp.H
    S = phi_dist(t, H)

    def inner(b):
        f_b = p.source.at(b)
        lo, hi = _window(f_b, r_center, S - phi_dist(b, H))
        return integrate_complex(
            lambda rho: kernel_E(rho, t, b, M, cp) * v_of(f_b, r_center, rho), lo, hi,
            name=f"source kernel integral at b={b:g}")

    return 2.0 * integrate_complex(inner, 0.0, t, name=f"source time integral at t={t:g}")


def _pair_combo(split: SplitTag, cp: CosmologyParams):
    if split is SplitTag.FIRST_PAIR:
        return DiracCombo(cp, 1), cp.M_plus
    if split is SplitTag.SECOND_PAIR:
        return DiracCombo(cp, -1), cp.M_minus
    raise ParameterError(f"origin values need a single pair, got {split}")


def _origin_integral(phi: RadialProfile, combo: DiracCombo, t: float, upper: float) -> complex:
    """int_0^upper d(s phi)/ds * combo(s, t) ds, anchored at the s = 0 value of combo."""
    if combo.mass == 0 or upper <= 0:
        return 0j
    c0 = combo(0.0, t)
    weight = integrate_real(lambda s: abs(v_of(phi, 0.0, s)), 0.0, upper,
                            name="int |d(s Phi)/ds|", epsrel=1e-4)
    scale = max(abs(c0), abs(combo(upper, t))) * weight
    noise = COMBO_NOISE * max(combo.term_scale(0.0, t), combo.term_scale(upper, t)) * weight
    value = integrate_complex(lambda s: v_of(phi, 0.0, s) * (combo(s, t) - c0), 0.0, upper,
                              name=f"origin tail integral at t={t:g}",
                              epsabs=max(TAIL_EPSABS_SCALE * scale, noise, 1e-300),
                              epsrel=TAIL_EPSREL, noise_floor=noise)
    return value + c0 * V_of(phi, 0.0, upper)


def dirac_origin_value(split: SplitTag, phi: RadialProfile, cp: CosmologyParams,
                       t: float) -> complex:
    """
    Origin component (Psi_0 for the first pair, Psi_2 for the second) for any t >= 0.

    Inside the cone this includes the boundary term carried by the moving
    upper limit phi(t); beyond it the value is the tail.
    """
    combo, M = _pair_combo(split, cp)
    H = cp.H
    tau = math.exp(-H * t)
    S = phi_dist(t, H)
    boundary = 0j
    if S < phi.eps:
        boundary = tau * v_of(phi, 0.0, S) * kernel_K1(S, t, M, cp)
    return 2.0 * tau * (boundary + _origin_integral(phi, combo, t, min(S, phi.eps)))


def _tail(split: SplitTag, phi: RadialProfile, cp: CosmologyParams, t: float) -> complex:
    if phi_dist(t, cp.H) <= phi.eps:
        raise PreconditionError(
            f"phi(t)={phi_dist(t, cp.H):.6g} does not exceed the support radius {phi.eps}; "
            "the origin is still inside the domain of influence")
    combo, _ = _pair_combo(split, cp)
    return 2.0 * math.exp(-cp.H * t) * _origin_integral(phi, combo, t, phi.eps)


def dirac_tail_first(phi0: RadialProfile, cp: CosmologyParams, t: float) -> complex:
    """Psi_0(0, t) for data (Phi0, 0, 0, 0) once phi(t) > eps."""
    return _tail(SplitTag.FIRST_PAIR, phi0, cp, t)


def dirac_tail_second(phi2: RadialProfile, cp: CosmologyParams, t: float) -> complex:
    """Psi_2(0, t) for data (0, 0, Phi2, 0) once phi(t) > eps."""
    return _tail(SplitTag.SECOND_PAIR, phi2, cp, t)


def dirac_special(split: SpinorData, cp: CosmologyParams, r_center: float, t: float) -> np.ndarray:
    """
    All four components at (0, 0, r_center) for m in {0, iH, -iH}.

    U_j is the K1 transform of Phi_j with M_+ (j = 0, 1) or M_- (j = 2, 3), and
    Psi = e^{-Ht}(d/dt U - H/2 U - i m gamma^0 U + e^{-Ht} gamma^3 gamma^0 d/dx3 U).
    """
    ell = lattice_index(cp)
    if ell not in (-1, 1, -3):
        raise ParameterError(f"m={cp.m} has no closed-form Dirac solution (need 0 or +-iH)")
    H = cp.H
    U = np.zeros(4, dtype=complex)
    U_t = np.zeros(4, dtype=complex)
    U_r = np.zeros(4, dtype=complex)
    for j, phi in enumerate(split.components):
        if phi is None:
            continue
        M = cp.M_plus if j < 2 else cp.M_minus
        U[j], U_t[j], U_r[j] = _k1_closed_parts(phi, M, cp, r_center, t)
    damp = math.exp(-H * t)
    return damp * (U_t - 0.5 * H * U - 1j * cp.m * SPIN_SIGNS * U + damp * (GAMMA3_GAMMA0 @ U_r))
