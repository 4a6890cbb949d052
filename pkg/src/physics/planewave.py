"""平面波基下的有限维近似

基函数 χ_n(x) = e^{ik_n x}/√L，k_n = 2πn/L，|n| ≤ n_max。
大、小分量各用同一组平面波，哈密顿矩阵为实对称矩阵。
"""

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.linalg import LinAlgError, eigh

from ..core.distributions import DeltaPlusRegular, XGrid
from ..core.errors import SolverError
from ..core.params import PhysicalParams
from ..core.utils import logger
from .exact_model import delta_potential_term

_SQRT_2PI = math.sqrt(2 * math.pi)


class BasisSpec(BaseModel):
    """平面波基：盒长 L 与紫外截断 Λ"""

    model_config = ConfigDict(frozen=True)

    L: float = Field(..., gt=0, description="盒长 (红外截断)")
    Lambda: float = Field(..., gt=0, description="最大平面波动量 (紫外截断)")

    @model_validator(mode="after")
    def _check_n_max(self):
        if self.n_max < 1:
            raise ValueError(f"LΛ/2π < 1，基组为空 (L = {self.L}, Λ = {self.Lambda})")
        return self

    @property
    def n_max(self) -> int:
        return math.floor(self.L * self.Lambda / (2 * math.pi))

    @property
    def size(self) -> int:
        """单个分量的基函数个数 2n_max + 1"""
        return 2 * self.n_max + 1

    @property
    def momenta(self) -> np.ndarray:
        n = np.arange(-self.n_max, self.n_max + 1)
        return 2 * math.pi * n / self.L

    def plane_waves(self, x) -> np.ndarray:
        """χ_n(x)，形状 (len(x), 2n_max+1)"""
        x = np.asarray(x, dtype=float)
        return np.exp(1j * np.multiply.outer(x, self.momenta)) / math.sqrt(self.L)


@dataclass(frozen=True)
class SpectralSolution:
    """对角化结果：升序本征值与按列排列的本征向量 (前一半是大分量系数)"""

    energies: np.ndarray
    vectors: np.ndarray
    n_max: int

    @property
    def size(self) -> int:
        return 2 * self.n_max + 1

    @cached_property
    def large(self) -> np.ndarray:
        """大分量系数，形状 (态数, 2n_max+1)"""
        return self.vectors[: self.size].T

    @cached_property
    def small(self) -> np.ndarray:
        return self.vectors[self.size :].T

    @cached_property
    def ns_indices(self) -> np.ndarray:
        return np.flatnonzero(self.energies < 0)

    @cached_property
    def ps_indices(self) -> np.ndarray:
        return np.flatnonzero(self.energies >= 0)

    def gap_indices(self, params: PhysicalParams) -> np.ndarray:
        mc2 = params.rest_energy
        return np.flatnonzero((self.energies > -mc2) & (self.energies < mc2))


@dataclass(frozen=True)
class BasisBoundState:
    energy: float
    large: np.ndarray
    small: np.ndarray
    basis: BasisSpec


@dataclass(frozen=True)
class MomentumDensity:
    """基组真空极化密度的 Fourier 系数 n̂(k_j)，j ∈ [−2n_max, 2n_max]

    trace 为标量密度的系数 (实数)，matrix 为 2×2 矩阵系数。
    超出存储范围 (|k_j| > 2Λ) 的系数为 0。
    """

    basis: BasisSpec
    j: np.ndarray
    trace: np.ndarray
    matrix: np.ndarray

    @property
    def k(self) -> np.ndarray:
        return 2 * math.pi * self.j / self.basis.L

    def value_at(self, k: float) -> float:
        """按 k 查询标量系数，不在网格上或超出范围时为 0"""
        j = k * self.basis.L / (2 * math.pi)
        index = int(round(j)) + int(self.j[-1])
        if not math.isclose(j, round(j), abs_tol=1e-9) or not 0 <= index < self.j.size:
            return 0.0
        return float(self.trace[index])


@dataclass(frozen=True)
class RegularizedDensity:
    """k_max 滤波后的动量密度"""

    density: MomentumDensity
    k_max: float
    n_reg: float


@dataclass(frozen=True)
class ElectronDensity:
    """束缚态电子密度矩阵 ψψ† 在网格上的采样

    at_zero 是 x = 0 处直接求值的结果；improved_at_zero 把小分量密度替换为其最大值。
    """

    grid: XGrid
    values: np.ndarray
    at_zero: np.ndarray
    improved_at_zero: np.ndarray


def assemble_hamiltonian(params: PhysicalParams, basis: BasisSpec) -> np.ndarray:
    """组装 [[mc²I + V, cP], [cP, −mc²I + V]]，P = diag(k_n)，V_nm = −Z/L"""
    size = basis.size
    mc2 = params.rest_energy
    chi_zero = np.array([1 / math.sqrt(basis.L)])
    potential = np.full((size, size), delta_potential_term(params.Z, chi_zero, chi_zero).real)
    kinetic = params.c * np.diag(basis.momenta)
    identity = np.eye(size)
    return np.block(
        [
            [mc2 * identity + potential, kinetic],
            [kinetic, -mc2 * identity + potential],
        ]
    )


def diagonalize(matrix: np.ndarray) -> SpectralSolution:
    """实对称本征值问题

    Raises:
        SolverError: 求解器不收敛或矩阵尺寸不是 2(2n_max+1)。
    """
    dim = matrix.shape[0]
    if matrix.shape != (dim, dim) or dim % 2 or (dim // 2) % 2 == 0:
        raise SolverError(f"矩阵尺寸 {matrix.shape} 不是 2(2n_max+1)")
    try:
        energies, vectors = eigh(matrix)
    except LinAlgError as e:
        raise SolverError(f"本征值求解失败: {e}") from e
    energies.setflags(write=False)
    vectors.setflags(write=False)
    return SpectralSolution(energies, vectors, (dim // 2 - 1) // 2)


@lru_cache(maxsize=32)
def solve_basis(params: PhysicalParams, basis: BasisSpec) -> SpectralSolution:
    """组装并对角化，按 (params, basis) 缓存"""
    logger.debug(f"对角化 L = {basis.L}, Λ = {basis.Lambda}, 矩阵维数 {4 * basis.n_max + 2}")
    return diagonalize(assemble_hamiltonian(params, basis))


def basis_bound_state(
    solution: SpectralSolution, params: PhysicalParams, basis: BasisSpec
) -> BasisBoundState:
    """能隙 (−mc², mc²) 中唯一的本征对

    Raises:
        DomainError: Z = 0 或 Z ≥ 2c。
        SolverError: 能隙中没有或有多个本征值。
    """
    params.require_bound()
    params.require_subcritical()
    gap = solution.gap_indices(params)
    if gap.size != 1:
        raise SolverError(f"能隙中应有一个本征值，实际为 {gap.size} 个")
    i = int(gap[0])
    return BasisBoundState(
        float(solution.energies[i]), solution.large[i], solution.small[i], basis
    )


def _diagonal_sums(r: np.ndarray, n_max: int) -> np.ndarray:
    """Σ_{n−m=j} R_nm，j = −2n_max … 2n_max"""
    return np.array([np.trace(r, offset=-j) for j in range(-2 * n_max, 2 * n_max + 1)])


def _negative_energy_blocks(solution: SpectralSolution) -> dict[str, np.ndarray]:
    ns = solution.ns_indices
    large, small = solution.large[ns], solution.small[ns]
    return {
        "LL": large.T @ large,
        "LS": large.T @ small,
        "SL": small.T @ large,
        "SS": small.T @ small,
    }


def vp_momentum_density(params: PhysicalParams, basis: BasisSpec) -> MomentumDensity:
    """基组真空极化密度的 Fourier 系数

    n̂^{ab}(k_j) = (1/√2π) Σ_{n−m=j} Σ_{p∈NS} c^a_{p,n} c^b_{p,m}，再减去 Z = 0 的同一求和。

    Raises:
        SolverError: 负能态个数与自由情形不同。
    """
    params.require_subcritical()
    n_max = basis.n_max
    interacting = solve_basis(params, basis)
    free = solve_basis(params.model_copy(update={"Z": 0.0}), basis)
    if interacting.ns_indices.size != free.ns_indices.size:
        raise SolverError(
            f"负能态个数 {interacting.ns_indices.size} 与自由情形 {free.ns_indices.size} 不同"
        )

    blocks = _negative_energy_blocks(interacting)
    free_blocks = _negative_energy_blocks(free)
    sums = {
        key: _diagonal_sums(blocks[key] - free_blocks[key], n_max) / _SQRT_2PI
        for key in blocks
    }
    matrix = np.empty((4 * n_max + 1, 2, 2), dtype=complex)
    matrix[:, 0, 0] = sums["LL"]
    matrix[:, 0, 1] = sums["LS"]
    matrix[:, 1, 0] = sums["SL"]
    matrix[:, 1, 1] = sums["SS"]

    trace = (sums["LL"] + sums["SS"]).real
    # 两组负能态个数相同，k = 0 处的迹严格为零
    trace[2 * n_max] = 0.0
    j = np.arange(-2 * n_max, 2 * n_max + 1)
    return MomentumDensity(basis, j, trace, matrix)


def _fourier_series(density: MomentumDensity, coeffs: np.ndarray, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    phases = np.exp(1j * np.multiply.outer(x, density.k))
    scale = _SQRT_2PI / density.basis.L
    return scale * np.tensordot(phases, coeffs, axes=(1, 0))


def vp_position_density(density: MomentumDensity, x, matrix: bool = False) -> np.ndarray:
    """n(x) = (1/√2π)(2π/L) Σ_j n̂(k_j) e^{ik_j x}

    标量形式返回实数组，矩阵形式返回 (N, 2, 2) 复数组。
    """
    if matrix:
        return _fourier_series(density, density.matrix, x)
    return _fourier_series(density, density.trace.astype(complex), x).real


def regularize(density: MomentumDensity) -> RegularizedDensity:
    """k_max 滤波：在 k_j ≥ 0 上取迹的最大值，减去该值并截断到 |k_j| < k_max

    𝒩_reg(L, Λ) = −√(2π) n̂(k_max)。并列时取较小的 j。
    """
    n_max = density.basis.n_max
    positive = density.trace[2 * n_max :]
    if not np.any(positive):
        logger.warning("密度恒为零 (Z = 0)，跳过 k_max 滤波")
        return RegularizedDensity(density, 0.0, 0.0)
    j_max = int(np.argmax(positive))
    peak_trace = positive[j_max]
    # 负 k 一侧减去 −k_max 处的值，保持 n̂(−k) = n̂(k)†
    peak_matrix = np.where(
        (density.j >= 0)[:, None, None],
        density.matrix[2 * n_max + j_max],
        density.matrix[2 * n_max - j_max],
    )

    inside = np.abs(density.j) < j_max
    trace = np.where(inside, density.trace - peak_trace, 0.0)
    matrix = np.where(inside[:, None, None], density.matrix - peak_matrix, 0.0)
    k_max = 2 * math.pi * j_max / density.basis.L
    n_reg = -_SQRT_2PI * float(peak_trace)
    logger.info(f"k_max = {k_max:.4f} (Λ = {density.basis.Lambda})，𝒩_reg(L, Λ) = {n_reg:.7f}")
    return RegularizedDensity(
        MomentumDensity(density.basis, density.j, trace, matrix), k_max, n_reg
    )


def renormalized_basis_density(
    regularized: RegularizedDensity, grid: XGrid, matrix: bool = False
) -> DeltaPlusRegular:
    """−𝒩_reg(L, Λ) δ(x) 加上滤波后系数的 Fourier 级数 (矩阵形式 delta 系数减半)"""
    values = vp_position_density(regularized.density, grid.points, matrix)
    delta = -regularized.n_reg / 2 if matrix else -regularized.n_reg
    return DeltaPlusRegular(delta, grid, values)


def basis_wavefunction(bound: BasisBoundState, x) -> np.ndarray:
    """基组束缚态 ψ(x)，形状 (N, 2)"""
    waves = bound.basis.plane_waves(x)
    return np.stack([waves @ bound.large, waves @ bound.small], axis=-1)


def _density_matrix(psi: np.ndarray) -> np.ndarray:
    return psi[..., :, None] * np.conj(psi[..., None, :])


def electron_density_matrix(bound: BasisBoundState, grid: XGrid) -> ElectronDensity:
    """ψψ† 在网格上的采样，以及 x = 0 处的直接值与改进值

    改进值的小分量密度取 (0, L/2] 上加密网格和输入网格上的最大值。
    """
    basis = bound.basis
    values = _density_matrix(basis_wavefunction(bound, grid.points))
    at_zero = _density_matrix(basis_wavefunction(bound, np.zeros(1)))[0]

    fine = np.linspace(0.0, basis.L / 2, 16 * basis.n_max + 1)[1:]
    small_fine = np.abs(basis_wavefunction(bound, fine)[:, 1]) ** 2
    peak = max(float(small_fine.max()), float(values[:, 1, 1].real.max()))
    improved = at_zero.copy()
    improved[1, 1] = peak
    return ElectronDensity(grid, values, at_zero, improved)
