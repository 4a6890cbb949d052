"""精确的真空极化密度

Uehling 密度 (Z 的一阶) 与全阶密度，动量空间与位置空间，
均表示为 delta 加正则部分的分布。虚轴积分 ∫du 统一换元 u = mc² sinh s，
此时 κ(iu) = mc cosh s，g(iu) = exp(i arctan(sinh s))，
e^{−2κ|x|} 在 s 上双指数衰减。所有被积函数满足 F(−u) = F(u)*，
因此 ∫_ℝ F du = 2 Re ∫₀^∞ F du。
"""

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..core.distributions import DeltaPlusRegular, XGrid
from ..core.errors import DomainError
from ..core.linalg import matrix2
from ..core.params import PhysicalParams, dispersion
from ..numerics.quadrature import (
    QuadSpec,
    integrate_endpoint_singularity,
    integrate_half_line,
    integrate_interval,
    integrate_real_line,
    log_symmetric_grid,
)

_S_MAX = 700.0
_SQRT_2PI = math.sqrt(2 * math.pi)


@dataclass(frozen=True)
class ChargeSummary:
    """电荷积分的闭式结果"""

    N0: float
    Nreg: float
    Ntotal: float
    Zren: float


# ---------------------------------------------------------------------------
# Uehling 闭式核


def h_k(params: PhysicalParams, k):
    """h_k = √(k² + 4m²c²)"""
    k = np.asarray(k, dtype=float)
    return np.sqrt(k**2 + 4 * (params.m * params.c) ** 2)


def uehling_pair_density(params: PhysicalParams, p, pp) -> np.ndarray:
    """一阶密度矩阵的动量表示 n̂₁^{(1)}(p, p′)，与 Λ 无关"""
    p = np.asarray(p, dtype=float)
    pp = np.asarray(pp, dtype=float)
    m, c = params.m, params.c
    e, ee = dispersion(params, p), dispersion(params, pp)
    prefactor = -params.Z / (4 * math.pi * e * ee * (e + ee))
    diagonal = (m * c**2) ** 2 + c**2 * p * pp - e * ee
    off = m * c**3 * (p - pp)
    return prefactor[..., None, None] * matrix2(diagonal, -off, off, diagonal)


def uehling_regular_momentum(params: PhysicalParams, k) -> np.ndarray:
    """Uehling 动量密度的正则部分，|k| → ∞ 时趋于 0"""
    k = np.asarray(k, dtype=float)
    m, c = params.m, params.c
    h = h_k(params, k)
    safe_k = np.where(k == 0, 1.0, k)
    diagonal = np.where(
        k == 0, 4 * m * c / h, 4 * m * c / safe_k * np.arctanh(k / h)
    )
    log_term = np.log((h - k) / (h + k))
    prefactor = -params.Z * m / ((2 * math.pi) ** 1.5 * h)
    return prefactor[..., None, None] * matrix2(diagonal, log_term, -log_term, diagonal)


def uehling_momentum_density(params: PhysicalParams, k) -> np.ndarray:
    """Λ = ∞ 的 Uehling 动量密度：常数 Z/((2π)^{3/2}c)·I₂ 加正则部分"""
    constant = params.Z / ((2 * math.pi) ** 1.5 * params.c)
    return constant * np.eye(2) + uehling_regular_momentum(params, k)


def uehling_momentum_density_cutoff(
    params: PhysicalParams, k: float, cutoff: float, spec: QuadSpec | None = None
) -> np.ndarray:
    """有限 Λ 的 Uehling 动量密度，对闭式配对密度做 p 积分 (仅作检验用)

    积分区域为 |p ± k/2| ≤ Λ；Λ = ∞ 时积分到整条实轴。
    """
    half = abs(k) / 2

    def integrand(p: float) -> np.ndarray:
        return uehling_pair_density(params, p + k / 2, p - k / 2)

    if math.isinf(cutoff):
        value = integrate_real_line(integrand, spec, decay_hint="algebraic").value
    else:
        if cutoff <= half:
            return np.zeros((2, 2), dtype=complex)
        value = integrate_interval(integrand, -(cutoff - half), cutoff - half, spec).value
    return np.asarray(value) / _SQRT_2PI


def uehling_t_kernel(params: PhysicalParams, x, spec: QuadSpec | None = None) -> np.ndarray:
    """−(Zm/π) ∫₁^∞ e^{−2mc|x|t}/(t√(t²−1)) dt，x 可为数组"""
    x = np.abs(np.asarray(x, dtype=float))
    if np.any(x == 0):
        raise DomainError("正则部分在 x = 0 处对数发散，网格不能包含 0")
    mc = params.m * params.c

    def h(t: float) -> np.ndarray:
        return np.exp(-2 * mc * x * t) / t

    value = integrate_endpoint_singularity(h, spec).value
    return -(params.Z * params.m / math.pi) * np.asarray(value)


# ---------------------------------------------------------------------------
# 虚轴积分的公共部分


def _contour_functions(params: PhysicalParams, s, interacting: bool):
    """返回 (D11, D22, O)：z₁g² + z₂，z₁ + z₂g(−)²，z₁g + z₂g(−)

    interacting=False 时 z₁ = z₂ = 1 (Uehling)。
    """
    g = np.exp(1j * np.arctan(np.sinh(s)))
    g_minus = np.conj(g)
    if interacting:
        z1 = 1 / (1 - params.lam * g)
        z2 = 1 / (1 + params.lam * g_minus)
    else:
        z1 = z2 = 1.0
    return z1 * g**2 + z2, z1 + z2 * g_minus**2, z1 * g + z2 * g_minus


def _position_regular_matrix(
    params: PhysicalParams, x: np.ndarray, interacting: bool, spec: QuadSpec | None
) -> np.ndarray:
    """−(Z/4c²)∫du/2π e^{−2κ|x|}[...]，逐点返回 (N, 2, 2)"""
    if np.any(x == 0):
        raise DomainError("正则部分在 x = 0 处对数发散，网格不能包含 0")
    if params.Z == 0:
        return np.zeros(x.shape + (2, 2), dtype=complex)
    m, c = params.m, params.c
    mc, mc2 = m * c, m * c**2
    ax = np.abs(x)

    def integrand(s: float) -> np.ndarray:
        s = min(s, _S_MAX)
        cosh = math.cosh(s)
        d11, d22, off = _contour_functions(params, s, interacting)
        weight = mc2 * cosh * np.exp(-2 * mc * cosh * ax)
        return np.stack([weight * d11.real, weight * d22.real, weight * off.real])

    values = np.asarray(integrate_half_line(integrand, spec).value)
    prefactor = -(params.Z / (4 * c**2)) * 2 / (2 * math.pi)
    i11, i22, io = prefactor * values
    sgn = np.sign(x)
    return matrix2(i11, -1j * sgn * io, 1j * sgn * io, i22)


# ---------------------------------------------------------------------------
# 位置空间


def uehling_position_density(
    params: PhysicalParams, grid: XGrid, matrix: bool = False, spec: QuadSpec | None = None
) -> DeltaPlusRegular:
    """Uehling 密度：(Z/πc)δ(x) + 正则部分；矩阵形式为 (Z/2πc)δ(x)I₂ + 正则矩阵"""
    delta = params.Z / (math.pi * params.c)
    if matrix:
        values = _position_regular_matrix(params, grid.points, False, spec)
        return DeltaPlusRegular(delta / 2, grid, values)
    if params.Z == 0:
        return DeltaPlusRegular(0.0, grid, np.zeros(len(grid)))
    return DeltaPlusRegular(delta, grid, uehling_t_kernel(params, grid.points, spec))


def total_position_density(
    params: PhysicalParams, grid: XGrid, matrix: bool = False, spec: QuadSpec | None = None
) -> DeltaPlusRegular:
    """全阶真空极化密度 𝒩₀δ(x) + n_reg(x)

    Raises:
        DomainError: Z ≥ 2c 或网格包含 0。
    """
    params.require_subcritical()
    summary = charge_summary(params)
    values = _position_regular_matrix(params, grid.points, True, spec)
    if matrix:
        return DeltaPlusRegular(summary.N0 / 2, grid, values)
    return DeltaPlusRegular(summary.N0, grid, np.trace(values, axis1=1, axis2=2).real)


def renormalized_density(
    params: PhysicalParams, grid: XGrid, matrix: bool = False, spec: QuadSpec | None = None
) -> DeltaPlusRegular:
    """重整化密度：正则部分不变，delta 系数取 −𝒩_reg (矩阵形式每个对角元 −𝒩_reg/2)，积分为零"""
    density = total_position_density(params, grid, matrix, spec)
    nreg = charge_summary(params).Nreg
    return density.with_delta(-nreg / 2 if matrix else -nreg)


# ---------------------------------------------------------------------------
# 动量空间


def total_momentum_density_reg(
    params: PhysicalParams, k, spec: QuadSpec | None = None
) -> np.ndarray:
    """全阶动量密度的正则部分，k 可为数组，返回 (..., 2, 2)"""
    params.require_subcritical()
    k = np.asarray(k, dtype=float)
    if params.Z == 0:
        return np.zeros(k.shape + (2, 2), dtype=complex)
    m, c = params.m, params.c
    mc2 = m * c**2
    flat_k = np.atleast_1d(k).ravel()

    def integrand(s: float) -> np.ndarray:
        # mc² ± iu = mc² cosh s · g^{±1}，分子分母同除 cosh² s，各量有界
        s = min(s, _S_MAX)
        sech = 1 / math.cosh(s)
        d11, d22, off = _contour_functions(params, s, True)
        scale = (flat_k * c * sech) ** 2 + 4 * mc2**2
        b11 = c * mc2**2 * d11.real / scale
        b22 = c * mc2**2 * d22.real / scale
        b12 = -(flat_k * c**2 * mc2 / 2) * sech * off.real / scale
        return np.stack([b11, b22, b12])

    values = np.asarray(integrate_half_line(integrand, spec).value)
    prefactor = -(params.Z / (_SQRT_2PI * c**2)) * 2 / (2 * math.pi)
    i11, i22, i12 = prefactor * values
    out = matrix2(i11, i12, -i12, i22)
    return out.reshape(k.shape + (2, 2))


def total_momentum_density(params: PhysicalParams, k, spec: QuadSpec | None = None) -> np.ndarray:
    """全阶动量密度：常数 𝒩₀/(2√(2π)) 每个对角元，加正则部分"""
    constant = charge_summary(params).N0 / (2 * _SQRT_2PI)
    return constant * np.eye(2) + total_momentum_density_reg(params, k, spec)


# ---------------------------------------------------------------------------
# 电荷


def charge_summary(params: PhysicalParams) -> ChargeSummary:
    """𝒩₀、𝒩_reg、𝒩 与 Z_ren 的闭式

    允许 Z = 2c 作为公式极限；Z > 2c 被拒绝。
    """
    if params.Z > 2 * params.c:
        raise DomainError(f"电荷积分要求 Z ≤ 2c，当前 Z = {params.Z}")
    lam = params.lam
    n0 = (params.Z / params.c) / (math.pi * (1 + lam**2))
    nreg = -(2 / math.pi) * math.atan(lam)
    total = n0 + nreg
    return ChargeSummary(n0, nreg, total, params.Z - total)


def regular_charge(
    params: PhysicalParams,
    variant: Literal["total", "uehling"] = "total",
    spec: QuadSpec | None = None,
    n_half: int = 1201,
) -> float:
    """在对数网格上积分正则密度，用于检验求和规则"""
    mc = params.m * params.c
    grid = log_symmetric_grid(1e-12 / mc, 40 / mc, n_half)
    if variant == "uehling":
        density = uehling_position_density(params, grid, spec=spec)
    elif variant == "total":
        density = total_position_density(params, grid, spec=spec)
    else:
        raise DomainError(f"未知的密度类型: {variant}")
    return float(density.regular_integral())


def _regular_charge_within(params: PhysicalParams, d: float, spec: QuadSpec | None) -> float:
    """∫_{−d}^{d} n_reg dx，交换积分次序后只剩 s 积分"""
    if params.Z == 0:
        return 0.0
    mc = params.m * params.c

    def integrand(s: float) -> float:
        s = min(s, _S_MAX)
        d11, d22, _ = _contour_functions(params, s, True)
        window = 1.0 if math.isinf(d) else -math.expm1(-2 * mc * d * math.cosh(s))
        return float((d11 + d22).real) * window

    value = integrate_half_line(integrand, spec).value
    return -(params.Z / (4 * math.pi * params.c)) * float(value)


def observed_charge(params: PhysicalParams, d: float, spec: QuadSpec | None = None) -> float:
    """距核 d 处观测到的有效电荷 Z − 𝒩₀ − ∫_{−d}^{d} n_reg dx"""
    if not d > 0:
        raise DomainError(f"距离 d 必须为正，当前为 {d}")
    params.require_subcritical()
    summary = charge_summary(params)
    return params.Z - summary.N0 - _regular_charge_within(params, d, spec)
