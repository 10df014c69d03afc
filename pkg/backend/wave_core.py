"""
Flat-space radial wave machinery: spherical means, the Kirchhoff solutions
V (V(x,0)=0, V_s(x,0)=phi) and v = dV/ds, and the mollifier bump data.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

from .errors import ParameterError
from .quadrature import integrate_real


@runtime_checkable
class RadialProfile(Protocol):
    """Radial function supported in [0, eps] with an analytic derivative."""

    eps: float

    def __call__(self, r: float) -> float: ...

    def derivative(self, r: float) -> float: ...


@dataclass(frozen=True)
class RadialBump:
    """amp * exp(-1/(1-(r/eps)^2)) for r < eps, 0 otherwise."""

    eps: float
    amp: float = 1.0

    def __post_init__(self):
        if not self.eps > 0:
            raise ParameterError(f"bump radius must be positive, got {self.eps}")

    def __call__(self, r: float) -> float:
        u = abs(r) / self.eps
        if u >= 1.0:
            return 0.0
        return self.amp * math.exp(-1.0 / (1.0 - u * u))

    def derivative(self, r: float) -> float:
        u = r / self.eps
        if abs(u) >= 1.0:
            return 0.0
        w = 1.0 - u * u
        return self(r) * (-2.0 * u / (w * w)) / self.eps

    def fits(self, H: float) -> bool:
        """eps <= 1/2 and H*eps < 1."""
        return self.eps <= 0.5 and abs(H) * self.eps < 1.0

    def scaled(self, factor: float) -> "RadialBump":
        return RadialBump(self.eps, self.amp * factor)


@runtime_checkable
class WavePropagator(Protocol):
    """Radial solution operators of a wave equation u_ss = A u."""

    def V(self, phi: RadialProfile, r_center: float, s: float) -> float: ...

    def v(self, phi: RadialProfile, r_center: float, s: float) -> float: ...

    def dV_dr(self, phi: RadialProfile, r_center: float, s: float) -> float: ...


class FlatPropagator:
    """Kirchhoff solutions of u_ss = Laplacian u in three space dimensions."""

    def V(self, phi: RadialProfile, r_center: float, s: float) -> float:
        if s <= 0.0:
            return 0.0
        if r_center == 0.0:
            return s * phi(s)
        lo = abs(r_center - s)
        hi = min(r_center + s, phi.eps)
        integral = integrate_real(lambda rho: rho * phi(rho), lo, hi,
                                  name=f"spherical mean at r={r_center:g}, s={s:g}")
        return integral / (2.0 * r_center)

    def v(self, phi: RadialProfile, r_center: float, s: float) -> float:
        if r_center == 0.0:
            return phi(s) + s * phi.derivative(s)
        outer = (r_center + s) * phi(r_center + s)
        inner = (r_center - s) * phi(abs(r_center - s))
        return (outer + inner) / (2.0 * r_center)

    def dV_dr(self, phi: RadialProfile, r_center: float, s: float) -> float:
        if r_center == 0.0 or s <= 0.0:
            return 0.0
        outer = (r_center + s) * phi(r_center + s)
        inner = (r_center - s) * phi(abs(r_center - s))
        return -self.V(phi, r_center, s) / r_center + (outer - inner) / (2.0 * r_center)


FLAT_PROPAGATOR: WavePropagator = FlatPropagator()


def spherical_mean(phi: RadialProfile, r_center: float, s: float) -> float:
    """Mean of phi over the sphere of radius s centred at distance r_center from the origin."""
    if r_center == 0.0:
        return phi(s)
    if s == 0.0:
        return phi(r_center)
    return FLAT_PROPAGATOR.V(phi, r_center, s) / s


def V_of(phi: RadialProfile, r_center: float, s: float,
         propagator: WavePropagator = FLAT_PROPAGATOR) -> float:
    return propagator.V(phi, r_center, s)


def v_of(phi: RadialProfile, r_center: float, s: float,
         propagator: WavePropagator = FLAT_PROPAGATOR) -> float:
    """d/ds V_of, from the boundary terms of the one-dimensional representation."""
    return propagator.v(phi, r_center, s)


def dV_dr(phi: RadialProfile, r_center: float, s: float,
          propagator: WavePropagator = FLAT_PROPAGATOR) -> float:
    return propagator.dV_dr(phi, r_center, s)


def _support_window(phi: RadialProfile, r_center: float, S: float):
    return max(0.0, r_center - phi.eps), min(S, r_center + phi.eps)


def integrated_V(phi: RadialProfile, r_center: float, S: float) -> float:
    """Integral of s * V(r_center, s) over s in [0, S]."""
    lo, hi = _support_window(phi, r_center, S)
    return integrate_real(lambda s: s * V_of(phi, r_center, s), lo, hi,
                          name=f"s*V over [0, {S:g}] at r={r_center:g}")


def integrated_dV_dr(phi: RadialProfile, r_center: float, S: float) -> float:
    """Integral of s * dV/dr(r_center, s) over s in [0, S]."""
    if r_center == 0.0:
        return 0.0
    lo, hi = _support_window(phi, r_center, S)
    return integrate_real(lambda s: s * dV_dr(phi, r_center, s), lo, hi,
                          name=f"s*dV/dr over [0, {S:g}] at r={r_center:g}")
