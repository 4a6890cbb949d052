"""束缚态能量的一阶真空极化修正 (DC、XC、DB、XB 四项)

一维中 Breit 相互作用恰好化为 Gaunt 相互作用，这里不区分两者。
"""

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..core.distributions import DeltaPlusRegular, XGrid
from ..core.errors import DomainError
from ..core.linalg import sigma1_sandwich_trace, trace2
from ..core.params import PhysicalParams
from ..numerics.quadrature import QuadSpec, log_symmetric_grid, periodic_grid
from .exact_model import bound_state, bound_wavefunction
from .planewave import (
    BasisBoundState,
    BasisSpec,
    basis_bound_state,
    electron_density_matrix,
    regularize,
    renormalized_basis_density,
    solve_basis,
    vp_momentum_density,
    vp_position_density,
)
from .vacuum_density import renormalized_density, uehling_position_density

SourceTag = Literal["exact", "basis_raw", "basis_improved"]
VpVariant = Literal["raw", "regularized", "exact", "uehling"]


@dataclass(frozen=True)
class ShiftBreakdown:
    dc: float
    xc: float
    db: float
    xb: float

    @property
    def total(self) -> float:
        return self.dc + self.xc + self.db + self.xb


@dataclass(frozen=True)
class DensitySource:
    """电子密度矩阵：网格上的采样值与 delta 项在 x = 0 处使用的矩阵"""

    tag: SourceTag
    grid: XGrid
    values: np.ndarray
    at_zero: np.ndarray


def exact_source(params: PhysicalParams, grid: XGrid) -> DensitySource:
    """精确束缚态的密度矩阵；x = 0 处取两侧极限的平均 diag(A², A²λ²)"""
    b = bound_state(params)
    psi = bound_wavefunction(params, grid.points)
    values = psi[:, :, None] * np.conj(psi[:, None, :])
    a2 = b.amplitude**2
    at_zero = np.diag([a2, a2 * b.lam**2]).astype(complex)
    return DensitySource("exact", grid, values, at_zero)


def basis_source(bound: BasisBoundState, grid: XGrid, improved: bool = False) -> DensitySource:
    density = electron_density_matrix(bound, grid)
    if improved:
        return DensitySource("basis_improved", grid, density.values, density.improved_at_zero)
    return DensitySource("basis_raw", grid, density.values, density.at_zero)


def _check_grid(source: DensitySource, vp: DeltaPlusRegular) -> None:
    if not source.grid.same_as(vp.grid):
        raise DomainError("电子密度与真空极化密度必须定义在同一网格上")


def _require_matrix(vp: DeltaPlusRegular) -> None:
    if not vp.is_matrix:
        raise DomainError("该修正项需要矩阵形式的真空极化密度")


def dc_correction(source: DensitySource, vp: DeltaPlusRegular) -> float:
    """直接 Coulomb 项 α·n^el(0) + ∫ n^el n_reg dx，vp 为标量分布"""
    _check_grid(source, vp)
    if vp.is_matrix:
        vp = vp.trace()
    n_el = trace2(source.values).real
    at_zero = trace2(source.at_zero).real
    return float(vp.delta_coeff * at_zero + np.dot(vp.grid.weights, n_el * vp.values))


def xc_correction(source: DensitySource, vp: DeltaPlusRegular) -> float:
    """交换 Coulomb 项 −∫ tr[n^el n^vp] dx"""
    _check_grid(source, vp)
    _require_matrix(vp)
    regular = trace2(source.values @ vp.values).real
    delta = vp.delta_coeff * trace2(source.at_zero).real
    return float(-(delta + np.dot(vp.grid.weights, regular)))


def db_correction(source: DensitySource, vp: DeltaPlusRegular) -> float:
    """直接 Breit 项 −(1/c²)∫ j^el j^vp dx，j = tr(cσ₁n)；c² 因子相消

    delta 部分正比于 I₂，对流密度没有贡献。
    """
    _check_grid(source, vp)
    _require_matrix(vp)
    j_el = (source.values[:, 0, 1] + source.values[:, 1, 0]).real
    j_vp = (vp.values[:, 0, 1] + vp.values[:, 1, 0]).real
    return float(-np.dot(vp.grid.weights, j_el * j_vp))


def xb_correction(source: DensitySource, vp: DeltaPlusRegular) -> float:
    """交换 Breit 项 (1/c²)∫ tr[(cσ₁n^el)(cσ₁n^vp)] dx"""
    _check_grid(source, vp)
    _require_matrix(vp)
    regular = sigma1_sandwich_trace(source.values, vp.values).real
    delta = vp.delta_coeff * trace2(source.at_zero).real
    return float(delta + np.dot(vp.grid.weights, regular))


def default_shift_grid(
    params: PhysicalParams,
    source_tag: SourceTag,
    vp_variant: VpVariant,
    basis: BasisSpec | None = None,
) -> XGrid:
    """两个精确对象之间用对数网格；涉及基组时用周期盒上的等距网格

    基组密度是三角多项式，点数超过 4n_max 时周期中点公式精确。
    """
    exact_only = source_tag == "exact" and vp_variant in ("exact", "uehling")
    if exact_only:
        kappa = bound_state(params).kappa
        mc = params.m * params.c
        x_min = 1e-10 * min(1 / mc, 1 / kappa)
        return log_symmetric_grid(x_min, 20 / kappa, 801)
    if basis is None:
        raise DomainError("涉及基组的修正需要给出 BasisSpec")
    return periodic_grid(basis.L, 32 * basis.n_max)


def vp_matrix_density(
    params: PhysicalParams,
    variant: VpVariant,
    grid: XGrid,
    basis: BasisSpec | None = None,
    spec: QuadSpec | None = None,
) -> DeltaPlusRegular:
    """按类型构造矩阵形式的真空极化分布"""
    if variant == "exact":
        return renormalized_density(params, grid, matrix=True, spec=spec)
    if variant == "uehling":
        return uehling_position_density(params, grid, matrix=True, spec=spec)
    if basis is None:
        raise DomainError(f"真空极化类型 {variant} 需要给出 BasisSpec")
    density = vp_momentum_density(params, basis)
    if variant == "raw":
        return DeltaPlusRegular(0.0, grid, vp_position_density(density, grid.points, matrix=True))
    if variant == "regularized":
        return renormalized_basis_density(regularize(density), grid, matrix=True)
    raise DomainError(f"未知的真空极化类型: {variant}")


def total_shift(
    source: DensitySource | SourceTag,
    vp_variant: VpVariant,
    params: PhysicalParams,
    basis: BasisSpec | None = None,
    spec: QuadSpec | None = None,
) -> ShiftBreakdown:
    """组装四项修正

    source 可以是已构造的 DensitySource，也可以只给出类型，此时按
    default_shift_grid 选网格并构造电子密度。

    Raises:
        DomainError: 改进的电子密度与未正则化 (不含 delta 项) 的基组密度配对。
    """
    tag = source if isinstance(source, str) else source.tag
    if tag == "basis_improved" and vp_variant == "raw":
        raise DomainError("改进的 x = 0 电子密度不能与未正则化的基组真空极化密度一起使用")

    if isinstance(source, str):
        grid = default_shift_grid(params, tag, vp_variant, basis)
        source = build_source(params, tag, grid, basis)

    vp = vp_matrix_density(params, vp_variant, source.grid, basis, spec)
    return ShiftBreakdown(
        dc=dc_correction(source, vp),
        xc=xc_correction(source, vp),
        db=db_correction(source, vp),
        xb=xb_correction(source, vp),
    )


def build_source(
    params: PhysicalParams, tag: SourceTag, grid: XGrid, basis: BasisSpec | None = None
) -> DensitySource:
    if tag == "exact":
        return exact_source(params, grid)
    if basis is None:
        raise DomainError(f"电子密度类型 {tag} 需要给出 BasisSpec")
    bound = basis_bound_state(solve_basis(params, basis), params, basis)
    return basis_source(bound, grid, improved=tag == "basis_improved")


def inverse_c_params(params: PhysicalParams, inv_c: float) -> PhysicalParams:
    """固定 m 与 Z，按 1/c 取新的参数"""
    if not inv_c > 0 or not math.isfinite(inv_c):
        raise DomainError(f"1/c 必须为正，当前为 {inv_c}")
    return params.model_copy(update={"c": 1 / inv_c})
