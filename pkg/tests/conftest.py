import mpmath
import pytest

from backend.kernels import CosmologyParams
from backend.wave_core import RadialBump

mpmath.mp.dps = 30


@pytest.fixture
def bump():
    return RadialBump(eps=0.1, amp=1.0)


@pytest.fixture
def cp():
    return CosmologyParams(1.0, 0.25j)


def mp_kernel_E(r, t, t0, M, H):
    """Oracle for E(r, t; t0, M) at 30 digits."""
    r, t, t0, H = (mpmath.mpf(v) for v in (r, t, t0, H))
    M = mpmath.mpc(M)
    e0, e1 = mpmath.exp(-H * t0), mpmath.exp(-H * t)
    base = (e0 + e1) ** 2 - (H * r) ** 2
    z = ((e1 - e0) ** 2 - (H * r) ** 2) / base
    a = mpmath.mpf(1) / 2 - M / H
    return (mpmath.power(4, -M / H) * mpmath.exp(M * (t0 + t))
            * mpmath.power(base, M / H - mpmath.mpf(1) / 2) * mpmath.hyp2f1(a, a, 1, z))
