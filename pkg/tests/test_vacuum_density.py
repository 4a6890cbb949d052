import math

import numpy as np
import pytest
from scipy.integrate import quad

from src.core.distributions import XGrid
from src.core.errors import DomainError
from src.core.linalg import is_hermitian
from src.core.params import PhysicalParams
from src.numerics.quadrature import integrate_real_line, log_symmetric_grid, uniform_midpoint_grid
from src.physics.exact_model import first_order_delta_green
from src.physics.vacuum_density import (
    charge_summary,
    observed_charge,
    regular_charge,
    renormalized_density,
    total_momentum_density,
    total_momentum_density_reg,
    total_position_density,
    uehling_momentum_density,
    uehling_momentum_density_cutoff,
    uehling_pair_density,
    uehling_position_density,
    uehling_regular_momentum,
    uehling_t_kernel,
)

SQRT_2PI = math.sqrt(2 * math.pi)


def test_charge_summary_unit(unit):
    summary = charge_summary(unit)
    assert summary.N0 == pytest.approx(0.2546479, abs=1e-7)
    assert summary.Nreg == pytest.approx(-0.2951672, abs=1e-7)
    assert summary.Ntotal == pytest.approx(-0.0405193, abs=1e-7)
    assert summary.Zren == pytest.approx(1.0405193, abs=1e-7)


def test_charge_summary_critical_limit():
    summary = charge_summary(PhysicalParams(Z=2.0))
    assert summary.N0 == pytest.approx(1 / math.pi)
    assert summary.Nreg == pytest.approx(-0.5)
    with pytest.raises(DomainError):
        charge_summary(PhysicalParams(Z=2.5))


def test_pair_density_structure(unit):
    p = np.linspace(-3, 3, 7)
    diagonal = uehling_pair_density(unit, p, p)
    np.testing.assert_allclose(diagonal, 0.0, atol=1e-14)
    a = uehling_pair_density(unit, 0.7, -1.1)
    b = uehling_pair_density(unit, -1.1, 0.7)
    np.testing.assert_allclose(a[0, 1], -a[1, 0])
    np.testing.assert_allclose(a, b.conj().T, atol=1e-15)


@pytest.mark.parametrize("p, pp", [(0.3, -1.2), (2.0, 0.5)])
def test_pair_density_matches_contour_integral(unit, p, pp):
    integral = integrate_real_line(lambda u: first_order_delta_green(unit, p, pp, 1j * u)).value
    expected = integral / (2 * math.pi)
    np.testing.assert_allclose(uehling_pair_density(unit, p, pp), expected, atol=1e-9)


def test_uehling_momentum_neutral_at_zero(unit):
    value = uehling_momentum_density(unit, 0.0)
    assert np.trace(value).real == pytest.approx(0.0, abs=1e-14)


def test_uehling_momentum_off_diagonal_odd(unit):
    k = np.array([0.5, 2.0, 7.0])
    plus = uehling_momentum_density(unit, k)
    minus = uehling_momentum_density(unit, -k)
    np.testing.assert_allclose(plus[:, 0, 1], -minus[:, 0, 1], atol=1e-15)
    np.testing.assert_allclose(plus[:, 0, 0], minus[:, 0, 0], atol=1e-15)


@pytest.mark.parametrize("k", [0.5, 2.0, 7.0])
def test_uehling_momentum_closed_form_matches_pair_integral(unit, k):
    closed = uehling_momentum_density(unit, k)
    numeric = uehling_momentum_density_cutoff(unit, k, math.inf)
    np.testing.assert_allclose(numeric, closed, atol=1e-7)


def test_uehling_momentum_cutoff_converges(unit):
    closed = uehling_momentum_density(unit, 1.0)
    small = uehling_momentum_density_cutoff(unit, 1.0, 20.0)
    large = uehling_momentum_density_cutoff(unit, 1.0, 2000.0)
    assert np.abs(large - closed).max() < np.abs(small - closed).max()
    np.testing.assert_allclose(uehling_momentum_density_cutoff(unit, 5.0, 2.0), 0.0)


@pytest.mark.parametrize("x", [0.5, 1.0])
def test_uehling_momentum_and_position_are_fourier_pairs(unit, x):
    def trace(k):
        return float(np.trace(uehling_regular_momentum(unit, k)).real)

    transform, _ = quad(trace, 0.0, math.inf, weight="cos", wvar=x)
    expected = float(uehling_t_kernel(unit, x))
    assert 2 * transform / SQRT_2PI == pytest.approx(expected, rel=1e-6)


def test_uehling_position_delta_and_sum_rule(unit):
    grid = uniform_midpoint_grid(3.0, 40)
    density = uehling_position_density(unit, grid)
    assert density.delta_coeff == pytest.approx(1 / math.pi)
    for z in (0.5, 1.0):
        params = PhysicalParams(Z=z)
        assert regular_charge(params, "uehling") == pytest.approx(-z / math.pi, abs=1e-7)


def test_uehling_matrix_form_consistent(unit):
    grid = uniform_midpoint_grid(3.0, 40)
    scalar = uehling_position_density(unit, grid)
    matrix = uehling_position_density(unit, grid, matrix=True)
    assert is_hermitian(matrix.values)
    traced = matrix.trace()
    assert traced.delta_coeff == pytest.approx(scalar.delta_coeff)
    np.testing.assert_allclose(traced.values, scalar.values, rtol=1e-8)


def test_uehling_density_rejects_origin(unit):
    with pytest.raises(DomainError):
        uehling_t_kernel(unit, np.array([0.0, 1.0]))


def test_total_density_sum_rule(unit):
    assert regular_charge(unit, "total") == pytest.approx(charge_summary(unit).Nreg, abs=1e-7)


def test_total_density_first_order_limit(unit):
    small = PhysicalParams(Z=1e-3)
    grid = uniform_midpoint_grid(3.0, 30)
    mask = np.abs(grid.points) >= 0.1
    total = total_position_density(small, grid).values / small.Z
    uehling = uehling_position_density(unit, grid).values
    np.testing.assert_allclose(total[mask], uehling[mask], rtol=1e-2)


def test_total_density_requires_subcritical():
    grid = uniform_midpoint_grid(1.0, 4)
    with pytest.raises(DomainError):
        total_position_density(PhysicalParams(Z=2.0), grid)


def test_renormalized_density_integrates_to_zero(unit):
    grid = log_symmetric_grid(1e-12, 40.0, 1201)
    density = renormalized_density(unit, grid)
    assert density.delta_coeff == pytest.approx(0.2951672, abs=1e-7)
    assert density.integral() == pytest.approx(0.0, abs=1e-7)
    matrix = renormalized_density(unit, grid, matrix=True)
    assert matrix.delta_coeff == pytest.approx(0.2951672 / 2, abs=1e-7)


def test_total_momentum_at_zero(unit):
    reg = total_momentum_density_reg(unit, 0.0)
    assert np.trace(reg).real == pytest.approx(charge_summary(unit).Nreg / SQRT_2PI, abs=1e-8)
    full = total_momentum_density(unit, 0.0)
    assert np.trace(full).real == pytest.approx(charge_summary(unit).Ntotal / SQRT_2PI, abs=1e-8)


def test_total_momentum_first_order_limit(unit):
    small = PhysicalParams(Z=1e-3)
    k = np.array([0.5, 2.0])
    total = total_momentum_density_reg(small, k) / small.Z
    uehling = uehling_regular_momentum(unit, k)
    np.testing.assert_allclose(total, uehling, rtol=1e-2, atol=1e-6)


def test_total_momentum_decays(unit):
    value = total_momentum_density_reg(unit, np.array([1e4]))
    assert np.abs(value).max() < 1e-3


def test_observed_charge_limits(unit):
    summary = charge_summary(unit)
    assert observed_charge(unit, 1e-9) == pytest.approx(1.0 - summary.N0, abs=1e-6)
    assert observed_charge(unit, 60.0) == pytest.approx(summary.Zren, abs=1e-6)
    assert observed_charge(PhysicalParams(Z=0.0), 1.0) == 0.0
    with pytest.raises(DomainError):
        observed_charge(unit, 0.0)


def test_total_momentum_finite_on_wide_k_range(unit):
    k = np.array([0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 1e4])
    value = total_momentum_density_reg(unit, k)
    assert value.shape == (k.size, 2, 2)
    assert np.all(np.isfinite(value))
    np.testing.assert_allclose(value[:, 0, 1], -value[:, 1, 0], atol=1e-14)


def test_total_momentum_and_position_are_fourier_pairs(unit):
    def trace(k):
        return float(np.trace(total_momentum_density_reg(unit, k)).real)

    grid = XGrid.from_points([0.3, 1.0])
    position = total_position_density(unit, grid).values
    for x, expected in zip(grid.points, position):
        transform, _ = quad(trace, 0.0, math.inf, weight="cos", wvar=x)
        assert 2 * transform / SQRT_2PI == pytest.approx(expected, rel=1e-6)


def test_total_matrix_form_consistent(unit):
    grid = uniform_midpoint_grid(3.0, 40)
    scalar = total_position_density(unit, grid)
    matrix = total_position_density(unit, grid, matrix=True)
    assert is_hermitian(matrix.values)
    traced = matrix.trace()
    assert traced.delta_coeff == pytest.approx(scalar.delta_coeff)
    np.testing.assert_allclose(traced.values, scalar.values, rtol=1e-8)


def test_charge_summary_monotone_in_charge():
    charges = np.linspace(0.1, 1.9, 10)
    summaries = [charge_summary(PhysicalParams(Z=z)) for z in charges]
    assert np.all(np.diff([s.Nreg for s in summaries]) < 0)
    assert np.all(np.diff([s.N0 for s in summaries]) > 0)
    assert max(s.N0 for s in summaries) < charge_summary(PhysicalParams(Z=2.0)).N0
