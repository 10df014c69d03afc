"""
Adaptive Gauss-Kronrod quadrature wrappers that turn scipy's convergence
warnings into QuadratureError naming the sub-integral.
"""
from __future__ import annotations

import logging
import warnings
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import QuadratureError

logger = logging.getLogger(__name__)

QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-10
QUAD_LIMIT = 200
QUAD_VEC_LIMIT = 2000


def integrate_real(f: Callable[[float], float], a: float, b: float, name: str,
                   epsabs: float = QUAD_EPSABS, epsrel: float = QUAD_EPSREL,
                   limit: int = QUAD_LIMIT) -> float:
    """Real integral of f over [a, b]; empty intervals give 0."""
    if b <= a:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(name, str(exc).strip()) from exc
    logger.debug("%s over [%g, %g] = %.6e (err %.1e)", name, a, b, value, err)
    return value


def integrate_complex(f: Callable[[float], complex], a: float, b: float, name: str,
                      epsabs: float = QUAD_EPSABS, epsrel: float = QUAD_EPSREL,
                      limit: int = QUAD_VEC_LIMIT, noise_floor: float = 0.0) -> complex:
    """
    Complex integral of f over [a, b], integrated as a [re, im] vector.

    A subdivision-limit stop (status 1) is accepted when the error estimate
    is within noise_floor, the rounding level of the integrand.
    """
    if b <= a:
        return 0j

    def pair(s):
        w = complex(f(s))
        return np.array([w.real, w.imag])

    value, err, info = integrate.quad_vec(pair, a, b, epsabs=epsabs, epsrel=epsrel,
                                          limit=limit, full_output=True)
    if info.status == 1 and err <= noise_floor:
        logger.debug("%s: subdivision limit reached at the noise floor (err %.1e <= %.1e)",
                     name, err, noise_floor)
    elif info.status != 0:
        raise QuadratureError(name, f"quad_vec status {info.status} after {info.neval} evaluations "
                                    f"(error estimate {err:.2e})")
    logger.debug("%s over [%g, %g]: %d evaluations, err %.1e", name, a, b, info.neval, err)
    return complex(value[0], value[1])
