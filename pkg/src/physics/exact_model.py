"""Delta 势 Dirac 算符 D_Z 的精确解

包括束缚态、自由 Green 函数的动量表示、Dyson 方程的闭式解 ΔG_Z，
以及点相互作用下的矩阵元公式。
"""

import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..core.errors import DomainError
from ..core.linalg import matrix2
from ..core.params import PhysicalParams, dispersion, g_factor, xi_cutoff, z_pair
from ..numerics.quadrature import QuadSpec, integrate_half_line, integrate_interval, integrate_real_line


@dataclass(frozen=True)
class BoundState:
    """唯一束缚态 ψ_b 的闭式参数"""

    energy: float
    kappa: float
    amplitude: float
    lam: float


@dataclass(frozen=True)
class GreenEval:
    """给定 (Λ, ω) 下的动量积分 Ḡ̄₀"""

    cutoff: float
    omega: complex
    gbarbar: np.ndarray


@dataclass(frozen=True)
class PointInteractionState:
    """动量表示的旋量函数，以及 x = 0 两侧的极限值

    Attributes:
        momentum: k ↦ ψ̂(k)，返回长度为 2 的复数组 (约定 1/√(2π))。
        left: ψ(0⁻)。
        right: ψ(0⁺)。
    """

    momentum: Callable[[float], np.ndarray]
    left: np.ndarray
    right: np.ndarray

    @property
    def mean_at_zero(self) -> np.ndarray:
        return (np.asarray(self.left) + np.asarray(self.right)) / 2


@lru_cache(maxsize=64)
def bound_state(params: PhysicalParams) -> BoundState:
    """D_Z 的束缚态：ε_b = mc²(1−λ²)/(1+λ²)，κ_b = 2mcλ/(1+λ²)，A_b² = κ_b/(1+λ²)

    Raises:
        DomainError: Z = 0。
    """
    params.require_bound()
    lam = params.lam
    energy = params.rest_energy * (1 - lam**2) / (1 + lam**2)
    kappa = 2 * params.m * params.c * lam / (1 + lam**2)
    return BoundState(energy, kappa, math.sqrt(kappa / (1 + lam**2)), lam)


def bound_wavefunction(params: PhysicalParams, x) -> np.ndarray:
    """ψ_b(x)，形状 (..., 2)

    x = 0 处返回两侧极限的平均 (小分量为 0)，两侧极限本身见 bound_wavefunction_limits。
    """
    b = bound_state(params)
    x = np.asarray(x, dtype=float)
    envelope = b.amplitude * np.exp(-b.kappa * np.abs(x))
    out = np.empty(x.shape + (2,), dtype=complex)
    out[..., 0] = envelope
    out[..., 1] = 1j * np.sign(x) * b.lam * envelope
    return out


def bound_wavefunction_limits(params: PhysicalParams) -> tuple[np.ndarray, np.ndarray]:
    """(ψ_b(0⁻), ψ_b(0⁺))"""
    b = bound_state(params)
    a = b.amplitude
    return (
        np.array([a, -1j * b.lam * a], dtype=complex),
        np.array([a, 1j * b.lam * a], dtype=complex),
    )


def boundary_matrix(params: PhysicalParams) -> np.ndarray:
    """定义 D_Z 定义域的边界矩阵，ψ(0⁺) = M_Z ψ(0⁻)，θ = 2 arctan(Z/2c)"""
    theta = 2 * math.atan(params.lam)
    return matrix2(math.cos(theta), 1j * math.sin(theta), 1j * math.sin(theta), math.cos(theta))


def virial_energy(params: PhysicalParams, spec: QuadSpec | None = None) -> float:
    """按位力定理 ε_b = mc² ∫(|ψ^L|² − |ψ^S|²) dx 用数值积分求能量"""
    b = bound_state(params)

    def integrand(x: float) -> float:
        density = b.amplitude**2 * math.exp(-2 * b.kappa * x)
        return density * (1 - b.lam**2)

    half = integrate_half_line(integrand, spec).value
    return params.rest_energy * 2 * half


def gbar0(params: PhysicalParams, p, omega) -> np.ndarray:
    """自由 Green 函数的动量表示 Ḡ₀(p, ω) = (cσ₁p + σ₃mc² + ω)/(ω² − ε_p²)，形状 (..., 2, 2)

    Raises:
        DomainError: ω² = ε_p²。
    """
    p = np.asarray(p, dtype=float)
    omega = np.asarray(omega, dtype=complex)
    denom = omega**2 - dispersion(params, p) ** 2
    if np.any(np.abs(denom) < 1e-14):
        raise DomainError("ω² = ε_p²，Ḡ₀ 在极点上")
    mc2 = params.rest_energy
    cp = params.c * p
    return matrix2(mc2 + omega, cp, cp, omega - mc2) / denom[..., None, None]


def gbarbar0(params: PhysicalParams, cutoff: float, omega) -> GreenEval:
    """Ḡ̄₀ = ∫_{−Λ}^{Λ} Ḡ₀ dp = (πξ/c) diag(−g(ω), g(−ω))"""
    xi = xi_cutoff(params, cutoff, omega)
    scale = math.pi * xi / params.c
    value = matrix2(-scale * g_factor(params, omega), 0, 0, scale * g_factor(params, -omega))
    return GreenEval(cutoff, complex(omega), value)


def delta_green(params: PhysicalParams, p, pp, omega, cutoff: float = math.inf) -> np.ndarray:
    """Dyson 方程的闭式解 ΔG_Z(p, p′; ω)

    ΔG_Z = −(Z/2π) Ḡ₀(p) diag(z₁, z₂) Ḡ₀(p′)，p 与 p′ 可广播。
    """
    z1, z2 = z_pair(params, cutoff, omega)
    left = gbar0(params, p, omega)
    right = gbar0(params, pp, omega)
    middle = matrix2(z1, 0, 0, z2)
    return -(params.Z / (2 * math.pi)) * (left @ middle @ right)


def first_order_delta_green(params: PhysicalParams, p, pp, omega) -> np.ndarray:
    """ΔG_Z 的一阶部分 −(Z/2π) Ḡ₀(p) Ḡ₀(p′)"""
    return -(params.Z / (2 * math.pi)) * (gbar0(params, p, omega) @ gbar0(params, pp, omega))


def dyson_residual(
    params: PhysicalParams,
    p: float,
    pp: float,
    omega: complex,
    cutoff: float,
    spec: QuadSpec | None = None,
) -> float:
    """Dyson 方程在 (p, p′, ω) 处的残差 (最大模)

    右端的 ∫ΔG_Z(q, p′) dq 通过在 [−Λ, Λ] 上数值积分求得。
    """
    if math.isinf(cutoff):
        raise DomainError("Dyson 残差检验需要有限的截断 Λ")
    integral = integrate_interval(
        lambda q: delta_green(params, q, pp, omega, cutoff), -cutoff, cutoff, spec
    ).value
    lhs = delta_green(params, p, pp, omega, cutoff)
    inner = gbar0(params, pp, omega) + integral
    rhs = -(params.Z / (2 * math.pi)) * gbar0(params, p, omega) @ inner
    return float(np.max(np.abs(lhs - rhs)))


def delta_potential_term(Z: float, phi_zero: np.ndarray, psi_zero: np.ndarray) -> complex:
    """点势部分 −Z φ̄(0)†ψ̄(0)，φ̄(0) 与 ψ̄(0) 是 x = 0 两侧极限的平均"""
    return complex(-Z * np.vdot(phi_zero, psi_zero))


def matrix_element(
    params: PhysicalParams,
    phi: PointInteractionState,
    psi: PointInteractionState,
    spec: QuadSpec | None = None,
) -> complex:
    """⟨φ, D_Z ψ⟩ = ∫ φ̂†(k)(cσ₁k + σ₃mc²)ψ̂(k) dk − Z φ̄(0)†ψ̄(0)"""
    mc2 = params.rest_energy

    def integrand(k: float) -> complex:
        a = np.asarray(phi.momentum(k))
        b = np.asarray(psi.momentum(k))
        ck = params.c * k
        applied = np.array([mc2 * b[0] + ck * b[1], ck * b[0] - mc2 * b[1]])
        return complex(np.vdot(a, applied))

    kinetic = integrate_real_line(integrand, spec, decay_hint="algebraic").value
    potential = delta_potential_term(params.Z, phi.mean_at_zero, psi.mean_at_zero)
    return complex(kinetic) + potential


def bound_state_repr(params: PhysicalParams) -> PointInteractionState:
    """ψ_b 的动量表示 ψ̂(k) = A√(2/π)(κ, λk)/(κ² + k²)"""
    b = bound_state(params)
    prefactor = b.amplitude * math.sqrt(2 / math.pi)

    def momentum(k: float) -> np.ndarray:
        return prefactor * np.array([b.kappa, b.lam * k], dtype=complex) / (b.kappa**2 + k**2)

    left, right = bound_wavefunction_limits(params)
    return PointInteractionState(momentum, left, right)
