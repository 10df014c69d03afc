import math

import mpmath
import numpy as np
import pytest

from backend.errors import LightConeError, ParameterError, PreconditionError
from backend.huygens import classify_mass
from backend.kernels import (CosmologyParams, DiracCombo, LightconeCoords, MassClass, MassTag,
                             dirac_combo_minus, dirac_combo_plus, kernel_E, kernel_K0, kernel_K1,
                             lattice_combo, lattice_index, lattice_mass, leading_coefficient,
                             phi_dist, script_F, tail_asymptote)
from conftest import mp_kernel_E


def central_difference(f, x, h=1e-4):
    def step(k):
        return (f(x + k) - f(x - k)) / (2 * k)
    return (4 * step(h / 2) - step(h)) / 3


@pytest.mark.parametrize("M", [0.3, 1 + 0.5j, -0.7j, 2.0])
def test_k1_collapses_to_half_at_origin(M):
    np.testing.assert_allclose(kernel_K1(0.0, 0.0, M, CosmologyParams(1.0)), 0.5, rtol=1e-14)


@pytest.mark.parametrize("A", [0.0, 0.3, 0.8])
@pytest.mark.parametrize("t", [0.1, 1.0, 2.5])
def test_k1_closed_forms(A, t):
    cp = CosmologyParams(2.0)
    H = cp.H
    r = A / H
    half = 0.5 * math.exp(0.5 * H * t)
    three_half = 0.25 * math.exp(-0.5 * H * t) * ((1 - A * A) * math.exp(2 * H * t) + 1)
    np.testing.assert_allclose(kernel_K1(r, t, 0.5 * H, cp), half, rtol=1e-12)
    np.testing.assert_allclose(kernel_K1(r, t, -0.5 * H, cp), half, rtol=1e-12)
    np.testing.assert_allclose(kernel_K1(r, t, 1.5 * H, cp), three_half, rtol=1e-12)


@pytest.mark.parametrize(
    "r, t, t0, M",
    (
        (0.1, 0.5, 0.0, 0.3),
        (0.2, 1.5, 0.3, 1 + 0.5j),
        (0.0, 2.0, 1.0, -0.7j),
        (0.5, 3.0, 0.0, 0.5 + 0.25j),
    )
)
def test_kernel_E_matches_oracle(r, t, t0, M):
    expected = complex(mp_kernel_E(r, t, t0, M, 1.0))
    np.testing.assert_allclose(kernel_E(r, t, t0, M, CosmologyParams(1.0)), expected, rtol=1e-11)


def test_kernel_E_collapses_on_the_diagonal():
    cp = CosmologyParams(1.0)
    for t in (0.0, 0.7, 3.0):
        np.testing.assert_allclose(kernel_E(0.0, t, t, 1 - 2j, cp), 0.5 * math.exp(t), rtol=1e-13)


@pytest.mark.parametrize("r, t", [(0.0, 0.5), (0.2, 1.0), (0.4, 2.0)])
def test_kernel_K0_matches_oracle_derivative(r, t):
    M = 0.5 + 0.25j
    expected = -complex(mpmath.diff(lambda s: mp_kernel_E(r, t, s, M, 1.0), 0))
    np.testing.assert_allclose(kernel_K0(r, t, M, CosmologyParams(1.0)), expected, rtol=1e-7)


def test_kernels_reject_points_outside_the_cone():
    cp = CosmologyParams(1.0)
    with pytest.raises(LightConeError):
        kernel_E(5.0, 0.1, 0.0, 0.3, cp)
    with pytest.raises(LightConeError):
        kernel_K1(2.0, 0.5, 0.3, cp)


def test_zero_hubble_constant_rejected():
    with pytest.raises(ParameterError):
        CosmologyParams(0.0)


def test_lightcone_coords():
    c = LightconeCoords.at(0.2, 1.0, 1.0)
    tau = math.exp(-1.0)
    assert c.tau == pytest.approx(tau)
    assert c.base == pytest.approx((1 + tau) ** 2 - 0.04)
    assert 1 - c.z == pytest.approx(c.one_minus_z)


def test_phi_dist():
    assert phi_dist(0.0, 1.0) == 0.0
    assert phi_dist(40.0, 2.0) == pytest.approx(0.5)


@pytest.mark.parametrize("m", [0.3, 1 + 0.5j, -0.7j, 0.25j])
@pytest.mark.parametrize("r, t", [(0.0, 0.5), (0.2, 1.0), (0.4, 2.5)])
def test_dirac_combo_is_the_time_derivative_combination(m, r, t):
    cp = CosmologyParams(1.0, m)
    M = cp.M_plus
    derivative = central_difference(lambda s: kernel_K1(r, s, M, cp), t)
    expected = derivative - (0.5 * cp.H + 1j * cp.m) * kernel_K1(r, t, M, cp)
    np.testing.assert_allclose(dirac_combo_plus(r, t, cp), expected, rtol=1e-6,
                               atol=1e-9 * abs(kernel_K1(r, t, M, cp)))


@pytest.mark.parametrize("m", [0.3, 1 + 0.5j, 0.25j])
def test_dirac_combo_at_the_origin(m):
    cp = CosmologyParams(1.0, m)
    np.testing.assert_allclose(dirac_combo_plus(0.0, 0.0, cp), -0.5j * cp.m, rtol=1e-12)


def test_second_pair_combo_mirrors_the_mass():
    cp = CosmologyParams(1.0, 0.3 + 0.2j)
    assert dirac_combo_minus(0.2, 1.0, cp) == dirac_combo_plus(0.2, 1.0, cp.mirrored())


def test_massless_combo_vanishes():
    assert DiracCombo(CosmologyParams(1.0))(0.3, 1.0) == 0


@pytest.mark.parametrize("ell", [0, 2, 3, -2, -4, -5])
def test_lattice_combo_matches_general_combo(ell):
    cp = CosmologyParams(1.0).with_ell(ell)
    for r, t in ((0.0, 0.5), (0.1, 1.0), (0.3, 3.0)):
        np.testing.assert_allclose(lattice_combo(r, t, cp, ell), dirac_combo_plus(r, t, cp),
                                   rtol=1e-9)


def test_lattice_index_and_classes():
    cp = CosmologyParams(2.0)
    assert lattice_mass(1, 2.0) == pytest.approx(2j)
    assert lattice_index(cp.with_ell(-5)) == -5
    assert lattice_index(CosmologyParams(2.0, 0.3j)) is None
    expected = {-1: MassTag.ZERO, 1: MassTag.PLUS_IH, -3: MassTag.MINUS_IH, 0: MassTag.PLUS_HALF,
                -2: MassTag.MINUS_HALF, 2: MassTag.EVEN_POS, 3: MassTag.ODD_POS,
                -4: MassTag.EVEN_NEG, -5: MassTag.ODD_NEG}
    for ell, tag in expected.items():
        assert classify_mass(cp.with_ell(ell)).tag is tag
    assert classify_mass(CosmologyParams(1.0, 0.5)).tag is MassTag.GENERIC
    assert MassClass.from_ell(-1).huygensian


@pytest.mark.parametrize("n", [3, 4])
def test_positive_class_limit(n):
    ell = 2 * n - 3
    tau = 1e-6
    value = script_F(tau, 0.0, ell) * tau ** (ell + 1) * 4.0 ** (ell + 1)
    np.testing.assert_allclose(value, math.gamma(2 * n - 1) / math.gamma(n) ** 2, rtol=1e-4)


def test_negative_class_coefficient():
    cp = CosmologyParams(1.0).with_ell(-5)
    np.testing.assert_allclose(leading_coefficient(MassClass.from_ell(-5), cp), 2.0, rtol=1e-14)


@pytest.mark.parametrize("ell", [0, 2, 3, -2, -4, -5, -6])
def test_lattice_leading_terms(ell):
    cp = CosmologyParams(1.0).with_ell(ell)
    cls = MassClass.from_ell(ell)
    t = 12.0
    for A in (0.0, 0.2):
        exact = script_F(math.exp(-t), A, ell)
        np.testing.assert_allclose(exact, tail_asymptote(cls, cp, A, t).real, rtol=1e-3)


def test_generic_leading_term(cp):
    cls = classify_mass(cp)
    combo = DiracCombo(cp)
    for r in (0.0, 0.15, 0.3):
        c = LightconeCoords.at(r, 12.0, cp.H)
        np.testing.assert_allclose(combo.bracket(c), tail_asymptote(cls, cp, r, 12.0), rtol=0.02)


def test_leading_term_preconditions(cp):
    cls = classify_mass(cp)
    with pytest.raises(PreconditionError):
        tail_asymptote(cls, cp, 0.0, 1.0)
    with pytest.raises(PreconditionError):
        tail_asymptote(cls, cp, 0.9, 12.0)
    with pytest.raises(ParameterError):
        tail_asymptote(MassClass.from_ell(2), cp, 0.0, 12.0)


def test_huygensian_leading_terms_vanish():
    for ell in (-1, 1, -3):
        cp = CosmologyParams(1.0).with_ell(ell)
        assert tail_asymptote(MassClass.from_ell(ell), cp, 0.0, 12.0) == 0


@pytest.mark.parametrize("ell", [-3, -5, -7])
@pytest.mark.parametrize("A", [0.0, 0.2, 0.5])
def test_script_F_vanishes_at_late_times_for_odd_negative_ell(ell, A):
    assert script_F(0.0, A, ell) == pytest.approx(0.0, abs=1e-12)


def test_term_scale_bounds_the_combination(cp):
    combo = DiracCombo(cp)
    for r, t in ((0.0, 3.0), (0.05, 6.0), (0.1, 12.0)):
        assert abs(combo(r, t)) <= combo.term_scale(r, t) * (1 + 1e-12)
    assert DiracCombo(CosmologyParams(1.0)).term_scale(0.0, 3.0) == 0.0
