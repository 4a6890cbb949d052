import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.integrate import quad
from scipy.special import k0

from src.core.errors import DomainError, QuadratureError
from src.numerics.quadrature import (
    QuadSpec,
    composite_grid_integral,
    integrate_endpoint_singularity,
    integrate_half_line,
    integrate_interval,
    integrate_real_line,
    log_symmetric_grid,
    periodic_grid,
    simpson_weights,
    uniform_midpoint_grid,
)


def test_real_line_algebraic_decay():
    result = integrate_real_line(lambda u: 1 / (1 + u * u))
    assert result.value == pytest.approx(math.pi, abs=1e-10)


def test_real_line_exponential_decay():
    result = integrate_real_line(lambda u: math.exp(-u * u), decay_hint="exponential")
    assert result.value == pytest.approx(math.sqrt(math.pi), abs=1e-10)


def test_real_line_vector_complex_integrand():
    def f(u):
        return np.array([1 / (1 + u * u), 1j / (1 + u * u) ** 2])

    value = integrate_real_line(f).value
    np.testing.assert_allclose(value, [math.pi, 0.5j * math.pi], atol=1e-10)


def test_matrix_integrand_keeps_shape():
    value = integrate_interval(lambda t: t * np.eye(2), 0.0, 2.0).value
    assert value.shape == (2, 2)
    np.testing.assert_allclose(value, 2 * np.eye(2), atol=1e-12)


def test_half_line():
    assert integrate_half_line(lambda x: math.exp(-x)).value == pytest.approx(1.0, abs=1e-10)


def test_unknown_decay_hint():
    with pytest.raises(DomainError):
        integrate_real_line(lambda u: 0.0, decay_hint="gaussian")


def test_interval_rejects_infinite_endpoints():
    with pytest.raises(DomainError):
        integrate_interval(lambda x: 1.0, 0.0, math.inf)


def test_endpoint_singularity_elementary():
    # ∫₁^∞ dt/(t√(t²−1)) = π/2
    value = integrate_endpoint_singularity(lambda t: 1 / t).value
    assert value == pytest.approx(math.pi / 2, abs=1e-10)


def test_endpoint_singularity_bessel():
    # ∫₁^∞ e^{−2t}/(t√(t²−1)) dt = ∫₂^∞ K₀(a) da
    value = integrate_endpoint_singularity(lambda t: math.exp(-2 * t) / t).value
    reference, _ = quad(k0, 2.0, math.inf, epsabs=1e-13)
    assert value == pytest.approx(reference, abs=1e-10)


def test_non_convergence_reports_partial_value():
    spec = QuadSpec(abs_tol=1e-14, rel_tol=1e-14, max_refinements=1)
    with pytest.raises(QuadratureError) as info:
        integrate_interval(lambda x: math.sin(1e6 * x), 0.0, 1.0, spec)
    assert info.value.value is not None
    assert info.value.error > 0


def test_quad_spec_validation():
    with pytest.raises(ValidationError):
        QuadSpec(abs_tol=0.0)
    with pytest.raises(ValidationError):
        QuadSpec(max_refinements=0)


def test_simpson_exact_for_cubic():
    x = np.linspace(0, 1, 11)
    assert composite_grid_integral(x**3, x[1] - x[0]) == pytest.approx(0.25, abs=1e-14)


def test_simpson_sine():
    x = np.linspace(0, math.pi, 101)
    assert abs(composite_grid_integral(np.sin(x), x[1] - x[0]) - 2) < 2e-8


def test_simpson_weights_sum():
    assert simpson_weights(11, 0.1).sum() == pytest.approx(1.0)
    assert simpson_weights(10, 0.1).sum() == pytest.approx(0.9)
    with pytest.raises(DomainError):
        simpson_weights(1, 0.1)


def test_uniform_midpoint_grid_excludes_zero():
    grid = uniform_midpoint_grid(3.0, 400)
    assert len(grid) == 400
    assert not np.any(grid.points == 0)
    assert grid.weights.sum() == pytest.approx(6.0)


def test_periodic_grid_exact_for_trigonometric_products():
    L, n = 10.0, 64
    grid = periodic_grid(L, n)
    k = 2 * math.pi * 3 / L
    value = np.dot(grid.weights, np.cos(k * grid.points) ** 2)
    assert value == pytest.approx(L / 2, abs=1e-12)
    assert np.dot(grid.weights, np.cos(k * grid.points)) == pytest.approx(0.0, abs=1e-12)


def test_periodic_grid_forces_even_count():
    assert len(periodic_grid(4.0, 33)) == 34


def test_log_symmetric_grid():
    grid = log_symmetric_grid(1e-12, 50.0, 1001)
    np.testing.assert_allclose(grid.points, -grid.points[::-1])
    assert np.dot(grid.weights, np.exp(-np.abs(grid.points))) == pytest.approx(2.0, abs=1e-9)
    with pytest.raises(DomainError):
        log_symmetric_grid(1.0, 0.5, 100)


def test_quad_spec_requires_positive_rel_tol():
    with pytest.raises(ValidationError):
        QuadSpec(rel_tol=0.0)


@pytest.mark.parametrize("a, b", [(2.0, -3.0), (0.5, 0.5)])
def test_integration_is_linear(a, b):
    def f(u):
        return 1 / (1 + u * u)

    def g(u):
        return math.exp(-abs(u)) / (1 + u * u)

    combined = integrate_real_line(lambda u: a * f(u) + b * g(u)).value
    separate = a * integrate_real_line(f).value + b * integrate_real_line(g).value
    assert combined == pytest.approx(separate, abs=1e-10)


def test_tighter_tolerance_does_not_increase_error():
    def f(x):
        return math.sqrt(x) * math.cos(20 * x)

    loose = integrate_interval(f, 0.0, 1.0, QuadSpec(abs_tol=1e-4, rel_tol=1e-4))
    tight = integrate_interval(f, 0.0, 1.0, QuadSpec(abs_tol=1e-12, rel_tol=1e-12))
    reference, _ = quad(f, 0.0, 1.0, epsabs=1e-14, epsrel=1e-14, limit=200)
    assert tight.error <= loose.error
    assert abs(tight.value - reference) <= abs(loose.value - reference) + 1e-12
