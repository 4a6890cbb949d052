import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.core.config import thread_count
from src.core.distributions import DeltaPlusRegular, XGrid
from src.core.errors import ConfigError, DomainError
from src.core.linalg import SIGMA_1, is_hermitian, sigma1_sandwich_trace
from src.core.params import PhysicalParams, dispersion, g_factor, xi_cutoff, z_factors


def test_params_validation():
    with pytest.raises(ValidationError):
        PhysicalParams(m=0.0)
    with pytest.raises(ValidationError):
        PhysicalParams(c=-1.0)
    with pytest.raises(ValidationError):
        PhysicalParams(Z=-0.5)
    assert PhysicalParams(Z=1.0, c=2.0).lam == 0.25


def test_params_hashable():
    assert hash(PhysicalParams()) == hash(PhysicalParams(m=1.0, c=1.0, Z=1.0))


def test_dispersion(unit):
    np.testing.assert_allclose(dispersion(unit, [0.0, 1.0]), [1.0, math.sqrt(2)])


def test_g_factor_on_imaginary_axis(unit):
    u = np.linspace(-20, 20, 41)
    g = g_factor(unit, 1j * u)
    np.testing.assert_allclose(np.abs(g), 1.0, atol=1e-14)
    np.testing.assert_allclose(g, np.exp(1j * np.arctan(u)), atol=1e-14)
    assert g_factor(unit, 0.0) == pytest.approx(1.0)


def test_g_factor_branch_points(unit):
    with pytest.raises(DomainError):
        g_factor(unit, 1.0)
    with pytest.raises(DomainError):
        g_factor(unit, -1.0)


def test_xi_cutoff(unit):
    np.testing.assert_allclose(xi_cutoff(unit, math.inf, 0.3j), 1.0)
    assert abs(xi_cutoff(unit, 1e8, 0.3j) - 1) < 1e-7
    with pytest.raises(DomainError):
        xi_cutoff(unit, 0.0, 0.3j)


def test_z_factors_limits(unit):
    z1, z2 = z_factors(unit, math.inf, 0.0)
    assert z1 == pytest.approx(1 / (1 - 0.5))
    assert z2 == pytest.approx(1 / (1 + 0.5))

    z1, z2 = z_factors(unit, 10.0, 1e8)
    assert abs(z1 - 1) < 1e-6
    assert abs(z2 - 1) < 1e-6

    z1, z2 = z_factors(unit, math.inf, 1e9)
    assert abs(z1 - 1 / (1 - 0.5j)) < 1e-6
    assert abs(z2 - 1 / (1 + 0.5j)) < 1e-6


def test_z_factors_conjugate_symmetry(unit):
    u = np.array([0.1, 0.7, 3.0, 40.0])
    z1_plus, z2_plus = z_factors(unit, 10.0, u)
    z1_minus, z2_minus = z_factors(unit, 10.0, -u)
    np.testing.assert_allclose(z1_minus, np.conj(z1_plus), atol=1e-14)
    np.testing.assert_allclose(z2_minus, np.conj(z2_plus), atol=1e-14)


def test_z_factors_reject_supercritical():
    with pytest.raises(DomainError):
        z_factors(PhysicalParams(Z=2.0), math.inf, 0.5)


def test_sigma1_sandwich_trace():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(5, 2, 2)) + 1j * rng.normal(size=(5, 2, 2))
    b = rng.normal(size=(5, 2, 2)) + 1j * rng.normal(size=(5, 2, 2))
    direct = np.trace(SIGMA_1 @ a @ SIGMA_1 @ b, axis1=1, axis2=2)
    np.testing.assert_allclose(sigma1_sandwich_trace(a, b), direct, atol=1e-13)


def test_is_hermitian():
    assert is_hermitian(np.array([[1, 2j], [-2j, 3]]))
    assert not is_hermitian(np.array([[1, 2j], [2j, 3]]))


def test_xgrid_validation():
    with pytest.raises(DomainError):
        XGrid.from_points([0.0, 2.0, 1.0])
    with pytest.raises(DomainError):
        XGrid(np.array([0.0, 1.0]), np.array([1.0]))


def test_xgrid_does_not_freeze_caller_array():
    points = np.linspace(-1, 1, 5)
    XGrid.from_points(points)
    points[0] = -2.0


def test_delta_plus_regular_integral():
    grid = XGrid.from_points(np.linspace(-1, 1, 201))
    density = DeltaPlusRegular(0.5, grid, np.ones(201))
    assert density.integral() == pytest.approx(2.5)
    assert density.with_delta(-1.0).integral() == pytest.approx(1.0)


def test_delta_plus_regular_matrix_trace():
    grid = XGrid.from_points(np.linspace(-1, 1, 11))
    values = np.zeros((11, 2, 2), dtype=complex)
    values[:, 0, 0] = 1.0
    values[:, 1, 1] = 2.0
    density = DeltaPlusRegular(0.25, grid, values)
    assert density.is_matrix
    scalar = density.trace()
    assert scalar.delta_coeff == 0.5
    np.testing.assert_allclose(scalar.values, 3.0)
    np.testing.assert_allclose(density.integral(), np.diag([2.25, 4.25]))


def test_delta_plus_regular_shape_mismatch():
    grid = XGrid.from_points(np.linspace(-1, 1, 11))
    with pytest.raises(DomainError):
        DeltaPlusRegular(0.0, grid, np.ones(10))
    with pytest.raises(DomainError):
        DeltaPlusRegular(0.0, grid, np.full(11, np.nan))


def test_thread_count(monkeypatch):
    monkeypatch.setenv("QED1D_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("QED1D_THREADS", "zero")
    with pytest.raises(ConfigError):
        thread_count()
    monkeypatch.setenv("QED1D_THREADS", "0")
    with pytest.raises(ConfigError):
        thread_count()
    monkeypatch.delenv("QED1D_THREADS")
    assert thread_count() >= 1


def test_xi_cutoff_at_zero_energy(unit):
    assert xi_cutoff(unit, 1.0, 0.0).real == pytest.approx(0.5)


@pytest.mark.parametrize("u", [0.0, 0.5, 3.0, 40.0])
def test_xi_cutoff_bounded_and_monotone(unit, u):
    cutoffs = [0.1, 1.0, 10.0, 100.0]
    xi = np.array([xi_cutoff(unit, cutoff, 1j * u) for cutoff in cutoffs])
    np.testing.assert_allclose(xi.imag, 0.0, atol=1e-14)
    assert np.all((xi.real > 0) & (xi.real < 1))
    assert np.all(np.diff(xi.real) > 0)
