import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .errors import DomainError


class PhysicalParams(BaseModel):
    """物理参数 (原子单位)"""

    model_config = ConfigDict(frozen=True)

    m: float = Field(1.0, gt=0, description="电子质量")
    c: float = Field(1.0, gt=0, description="光速")
    Z: float = Field(1.0, ge=0, description="核电荷")

    @property
    def lam(self) -> float:
        """耦合常数 λ = Z/(2c)"""
        return self.Z / (2 * self.c)

    @property
    def rest_energy(self) -> float:
        return self.m * self.c**2

    def require_bound(self) -> None:
        if self.Z <= 0:
            raise DomainError("Z = 0 时不存在束缚态")

    def require_subcritical(self) -> None:
        """真空极化相关运算要求 Z < 2c"""
        if self.Z >= 2 * self.c:
            raise DomainError(
                f"真空极化运算要求 Z < 2c，当前 Z = {self.Z}, 2c = {2 * self.c}"
            )


def dispersion(params: PhysicalParams, p):
    """自由粒子能量 ε_p = √(p²c² + m²c⁴)"""
    p = np.asarray(p, dtype=float)
    return np.sqrt((p * params.c) ** 2 + params.rest_energy**2)


def _check_off_branch_points(params: PhysicalParams, omega) -> None:
    mc2 = params.rest_energy
    if np.any(np.isclose(omega, mc2, rtol=0, atol=1e-14 * mc2)) or np.any(
        np.isclose(omega, -mc2, rtol=0, atol=1e-14 * mc2)
    ):
        raise DomainError("ω = ±mc² 是分支点，无法求值")


def g_factor(params: PhysicalParams, omega):
    """g(ω) = √((mc² + ω)/(mc² − ω))，主值分支，实轴上 |ω| > mc² 为割线

    Args:
        params (PhysicalParams): 物理参数。
        omega: 复能量，可以是数组。

    Returns:
        复数或复数组。

    Raises:
        DomainError: ω = ±mc²。
    """
    omega = np.asarray(omega, dtype=complex)
    _check_off_branch_points(params, omega)
    mc2 = params.rest_energy
    return np.sqrt((mc2 + omega) / (mc2 - omega))


def xi_cutoff(params: PhysicalParams, cutoff: float, omega):
    """截断因子 ξ(Λ, ω) = (2/π) arctan(cΛ/√(m²c⁴ − ω²))，Λ = ∞ 时恰为 1"""
    if not cutoff > 0:
        raise DomainError(f"截断动量 Λ 必须为正，当前为 {cutoff}")
    omega = np.asarray(omega, dtype=complex)
    _check_off_branch_points(params, omega)
    if math.isinf(cutoff):
        return np.ones_like(omega)
    root = np.sqrt(params.rest_energy**2 - omega**2)
    return (2 / np.pi) * np.arctan(params.c * cutoff / root)


def z_pair(params: PhysicalParams, cutoff: float, omega):
    """一般复能量下的 (z₁, z₂)

    Raises:
        DomainError: 分母为零 (ω 落在 D_Z 的本征值上)。
    """
    omega = np.asarray(omega, dtype=complex)
    xi = xi_cutoff(params, cutoff, omega)
    denom1 = 1 - params.lam * g_factor(params, omega) * xi
    denom2 = 1 + params.lam * g_factor(params, -omega) * xi
    if np.any(np.abs(denom1) < 1e-14) or np.any(np.abs(denom2) < 1e-14):
        raise DomainError("ω 位于 z 因子的极点上")
    return 1 / denom1, 1 / denom2


def z_factors(params: PhysicalParams, cutoff: float, u):
    """虚轴 ω = iu 上的 z₁, z₂

    Args:
        params (PhysicalParams): 物理参数，要求 Z < 2c。
        cutoff (float): 截断动量 Λ，可为 math.inf。
        u: 实数或实数组。

    Returns:
        tuple: (z₁, z₂)。
    """
    params.require_subcritical()
    u = np.asarray(u, dtype=float)
    return z_pair(params, cutoff, 1j * u)
