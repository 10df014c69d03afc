import math

import numpy as np
import pytest

from backend.errors import QuadratureError
from backend.quadrature import integrate_complex, integrate_real


def test_complex_integral_of_a_phase():
    value = integrate_complex(lambda s: complex(math.cos(s), math.sin(s)), 0.0, 1.0, name="phase")
    np.testing.assert_allclose(value, (complex(math.cos(1.0), math.sin(1.0)) - 1) / 1j, rtol=1e-12)
    assert integrate_complex(lambda s: 1j, 1.0, 1.0, name="empty") == 0j


def test_subdivision_limit_is_an_error_above_the_noise_floor():
    with pytest.raises(QuadratureError, match="oscillating"):
        integrate_complex(lambda s: math.cos(1e4 * s), 0.0, 1.0, name="oscillating",
                          epsabs=1e-14, limit=2)


def test_subdivision_limit_at_the_noise_floor_is_accepted():
    value = integrate_complex(lambda s: math.cos(1e4 * s), 0.0, 1.0, name="oscillating",
                              epsabs=1e-14, limit=2, noise_floor=10.0)
    assert np.isfinite(value.real) and value.imag == 0


def test_real_integral_warnings_become_errors():
    with pytest.raises(QuadratureError, match="wiggles"):
        integrate_real(lambda s: math.cos(1e4 * s), 0.0, 1.0, name="wiggles", limit=1)
