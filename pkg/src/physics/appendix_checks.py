"""附录中的数值验证：mollifier 乘积的极限、非对称截断、奇异核的 delta 提取、
以及束缚态在截断平面波基中的解析收敛模型。
"""

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.interpolate import BSpline
from scipy.special import k1

from ..core.errors import DomainError
from ..core.linalg import matrix2
from ..core.params import PhysicalParams
from ..numerics.quadrature import QuadSpec, integrate_interval
from .exact_model import bound_state
from .planewave import BasisSpec

# ---------------------------------------------------------------------------
# mollifier


@dataclass(frozen=True)
class Mollifier:
    """[−1, 1] 上归一化的光滑紧支撑函数 φ 及其累积函数 Φ"""

    name: str
    density: Callable[[float], float]
    cumulative: Callable[[float], float]


def _bump_raw(y: float) -> float:
    return math.exp(-1 / (1 - y * y)) if abs(y) < 1 else 0.0


@dataclass(frozen=True)
class _BumpMollifier:
    @cached_property
    def norm(self) -> float:
        return float(integrate_interval(_bump_raw, -1.0, 1.0).value)

    def density(self, y: float) -> float:
        return _bump_raw(y) / self.norm

    def cumulative(self, y: float) -> float:
        if y <= -1:
            return 0.0
        if y >= 1:
            return 1.0
        return float(integrate_interval(self.density, -1.0, y).value)


_BUMP = _BumpMollifier()
# 节点间距 1/2 的三次 B 样条积分为 1/2，乘 2 后归一化
_SPLINE = BSpline.basis_element([-1.0, -0.5, 0.0, 0.5, 1.0], extrapolate=False)
_SPLINE_CUMULATIVE = _SPLINE.antiderivative()


def _spline_density(y: float) -> float:
    return 0.0 if abs(y) >= 1 else 2 * float(_SPLINE(y))


def _spline_cumulative(y: float) -> float:
    if y <= -1:
        return 0.0
    if y >= 1:
        return 1.0
    return 2 * float(_SPLINE_CUMULATIVE(y) - _SPLINE_CUMULATIVE(-1.0))


MOLLIFIERS: dict[str, Mollifier] = {
    "bump": Mollifier("bump", _BUMP.density, _BUMP.cumulative),
    "bspline": Mollifier("bspline", _spline_density, _spline_cumulative),
}


@dataclass(frozen=True)
class MollifierLimit:
    mollifier: str
    epsilons: tuple[float, ...]
    estimates: tuple[float, ...]
    limit: float


def mollifier_product_integral(
    f: Callable[[float], float], epsilon: float, mollifier: Mollifier, spec: QuadSpec | None = None
) -> float:
    """∫ H_ε δ_ε f dx = ∫ Φ(y) φ(y) f(εy) dy"""
    if not epsilon > 0:
        raise DomainError(f"ε 必须为正，当前为 {epsilon}")

    def integrand(y: float) -> float:
        return mollifier.cumulative(y) * mollifier.density(y) * f(epsilon * y)

    return float(integrate_interval(integrand, -1.0, 1.0, spec).value)


def mollifier_half_delta(
    f: Callable[[float], float],
    epsilons: Sequence[float] = (1e-1, 1e-2, 1e-3),
    mollifier: str | Mollifier = "bump",
    spec: QuadSpec | None = None,
) -> MollifierLimit:
    """ε → 0 时 ∫H_ε δ_ε f → f(0)/2，对最后两个 ε 做线性 Richardson 外推"""
    if len(epsilons) < 2:
        raise DomainError("至少需要两个 ε 值")
    moll = MOLLIFIERS[mollifier] if isinstance(mollifier, str) else mollifier
    estimates = tuple(mollifier_product_integral(f, e, moll, spec) for e in epsilons)
    e1, e2 = epsilons[-2], epsilons[-1]
    i1, i2 = estimates[-2], estimates[-1]
    limit = (e1 * i2 - e2 * i1) / (e1 - e2)
    return MollifierLimit(moll.name, tuple(epsilons), estimates, limit)


def charge_for_boundary_angle(zeta: float, c: float) -> float:
    """边界角 θ′ = ζ/c 对应的核电荷 Z(ζ) = 2c tan(ζ/2c)，0 ≤ ζ < cπ"""
    if not 0 <= zeta < c * math.pi:
        raise DomainError(f"ζ 必须在 [0, cπ) 内，当前为 {zeta}")
    return 2 * c * math.tan(zeta / (2 * c))


def regularized_potential_matrix(
    params: PhysicalParams,
    basis: BasisSpec,
    epsilon: float,
    kind: Literal["local", "nonlocal"] = "local",
    mollifier: str = "bump",
    nodes: int = 200,
) -> np.ndarray:
    """正则化势在平面波基中的矩阵

    local: −Z∫v_ε χ_n* χ_m dx；nonlocal: −Z⟨χ_n|v_ε⟩⟨v_ε|χ_m⟩，v_ε(x) = φ(x/ε)/ε。
    ε → 0 时两者的每个元素都趋于 −Z/L。
    """
    moll = MOLLIFIERS[mollifier]
    y, w = np.polynomial.legendre.leggauss(nodes)
    weights = w * np.array([moll.density(v) for v in y])
    k = basis.momenta

    def transform(q: np.ndarray) -> np.ndarray:
        # ∫ φ(y) e^{−iqεy} dy
        return np.exp(-1j * epsilon * np.multiply.outer(q, y)) @ weights

    if kind == "local":
        diff = np.subtract.outer(k, k)
        values = transform(diff.ravel()).reshape(diff.shape)
        return -(params.Z / basis.L) * values
    if kind == "nonlocal":
        f = transform(k)
        return -(params.Z / basis.L) * np.outer(f, np.conj(f))
    raise DomainError(f"未知的势类型: {kind}")


# ---------------------------------------------------------------------------
# 非对称截断


class CutoffFamily(BaseModel):
    """非对称截断区间族 I(Λ) = [−Λ, rΛ]"""

    model_config = ConfigDict(frozen=True)

    r: float = Field(..., gt=0, description="上下截断之比")

    @property
    def a(self) -> float:
        return -math.log(self.r) / math.pi

    def interval(self, cutoff: float) -> tuple[float, float]:
        return -cutoff, self.r * cutoff


@dataclass(frozen=True)
class AsymmetricCutoff:
    """M_Z^a = w^{1/2} [[A, iB], [−iC, D]]"""

    a: float
    boundary_matrix: np.ndarray
    w: complex
    A: float
    B: float
    C: float
    D: float

    @property
    def det(self) -> float:
        return self.A * self.D - self.B * self.C


def asymmetric_cutoff(params: PhysicalParams, r: float) -> AsymmetricCutoff:
    """非对称截断下 Ḡ̄₀ 多出的常数 a 及相应的边界矩阵"""
    a = CutoffFamily(r=r).a
    lam = params.lam
    denom = 1 - (a - 1j) ** 2 * lam**2
    diagonal = 1 - (a**2 + 1) * lam**2
    matrix = matrix2(diagonal, 2j * lam, 2j * lam, diagonal) / denom
    w = complex((1 - (a + 1j) ** 2 * lam**2) / denom)
    p = 1 - 2 * (a**2 - 1) * lam**2 + (a**2 + 1) ** 2 * lam**4
    root = math.sqrt(p)
    return AsymmetricCutoff(
        a=a,
        boundary_matrix=matrix,
        w=w,
        A=diagonal / root,
        B=2 * lam / root,
        C=-2 * lam / root,
        D=diagonal / root,
    )


def offdiagonal_cutoff_constant(
    params: PhysicalParams, r: float, cutoff: float, u: float = 0.0, spec: QuadSpec | None = None
) -> float:
    """(c/π)∫_{−Λ}^{rΛ} cp/(ω² − ε_p²) dp，ω = iu；Λ → ∞ 时趋于 a(r)"""
    lo, hi = CutoffFamily(r=r).interval(cutoff)
    c = params.c
    shift = params.rest_energy**2 + u**2

    def integrand(p: float) -> float:
        return -c * p / (c * c * p * p + shift)

    return c / math.pi * float(integrate_interval(integrand, lo, hi, spec).value)


# ---------------------------------------------------------------------------
# 奇异核


def singular_kernel(x):
    """f(x) = ½ln(4/(1−x²)) − x·arctanh(x)，|x| < 1；其余为 0"""
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < 1
    safe = np.where(inside, x, 0.0)
    value = 0.5 * np.log(4 / (1 - safe**2)) - safe * np.arctanh(safe)
    out = np.where(inside, value, 0.0)
    return out.item() if out.ndim == 0 else out


def averaged_singular_density(
    params: PhysicalParams, x: float, epsilon: float, spec: QuadSpec | None = None
) -> float:
    """奇异核 tr n_sing(y, y′) 在以 (x, x) 为中心、边长 2ε 的正方形上的平均

    tr n_sing = −(mZ/2π)[sgn y sgn y′ − 1] K₁(mc(|y| + |y′|))，只有 y、y′ 异号时非零。
    二重积分化为 s = |y| + |y′| 上的一维积分。
    """
    if not epsilon > 0:
        raise DomainError(f"ε 必须为正，当前为 {epsilon}")
    p, q = epsilon - abs(x), epsilon + abs(x)
    if p <= 0:
        return 0.0
    mc = params.m * params.c
    prefactor = params.m * params.Z / math.pi

    def integrand(s: float) -> float:
        length = max(0.0, min(p, s) - max(0.0, s - q))
        return prefactor * float(k1(mc * s)) * length

    # 在 min(p, q)、max(p, q) 处分段，长度函数在这两点不光滑
    breaks = sorted({0.0, p, q, p + q})
    total = sum(
        integrate_interval(integrand, lo, hi, spec).value for lo, hi in zip(breaks, breaks[1:])
    )
    return 2 * float(total) / (4 * epsilon**2)


def averaged_delta_coefficient(
    params: PhysicalParams, epsilon: float, spec: QuadSpec | None = None
) -> float:
    """由 x = 0 处的平均值还原 delta 系数 ε·avg(0)/f(0)，ε → 0 时趋于 Z/(πc)"""
    return epsilon * averaged_singular_density(params, 0.0, epsilon, spec) / singular_kernel(0.0)


# ---------------------------------------------------------------------------
# 截断基中的收敛模型


@dataclass(frozen=True)
class ConvergenceModel:
    L: float
    Lambda: float
    n_max: int
    coeffs_large: np.ndarray
    coeffs_small: np.ndarray
    energy: float
    energy_limit: float
    asymptotic_error: float


def model_coefficients(params: PhysicalParams, L: float, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """ψ_b 在 [−L/2, L/2] 上实平面波基中的展开系数

    返回 (c^L_n, n = 0…n_max) 与 (c^S_n, n = 0…n_max)，c^S_0 = 0。
    """
    b = bound_state(params)
    kappa, amp = b.kappa, b.amplitude
    n = np.arange(n_max + 1)
    k = 2 * math.pi * n / L
    edge = math.exp(-kappa * L / 2)
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    large = 2 * math.sqrt(2) * amp * kappa * (1 - sign * edge) / (math.sqrt(L) * (kappa**2 + k**2))
    large[0] = 2 * amp * (1 - edge) / (kappa * math.sqrt(L))
    small = -(b.lam * k / kappa) * large
    small[0] = 0.0
    return large, small


def model_partial_sums(params: PhysicalParams, L: float, n_max: int) -> float:
    """Σ|c^L|² + Σ|c^S|²，n_max → ∞ 时趋于 1 − e^{−κL}"""
    large, small = model_coefficients(params, L, n_max)
    return float(np.sum(large**2) + np.sum(small**2))


def truncated_energy_model(params: PhysicalParams, L: float, Lambda: float) -> ConvergenceModel:
    """最佳 L² 近似的能量 ε̃(L, Λ) = mc²(Σ|c^L|² − Σ|c^S|²)

    ε̃(L, ∞) = (1 − e^{−κL})ε_b，主导误差 mc²·A²Z²(1 + e^{−κL})/(πc²Λ)。
    """
    params.require_bound()
    n_max = BasisSpec(L=L, Lambda=Lambda).n_max
    large, small = model_coefficients(params, L, n_max)
    b = bound_state(params)
    mc2 = params.rest_energy
    energy = mc2 * float(np.sum(large**2) - np.sum(small**2))
    decay = math.exp(-b.kappa * L)
    limit = (1 - decay) * b.energy
    asymptotic = mc2 * b.amplitude**2 * params.Z**2 * (1 + decay) / (math.pi * params.c**2 * Lambda)
    return ConvergenceModel(L, Lambda, n_max, large, small, energy, limit, asymptotic)


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float


def convergence_slope_fit(
    x: Sequence[float], errors: Sequence[float], kind: Literal["power", "exponential"] = "power"
) -> SlopeFit:
    """最小二乘拟合收敛速率

    power: ln|err| 对 ln x 的斜率 (Λ 扫描)；exponential: ln|err| 对 x 的斜率 (L 扫描)。

    Raises:
        DomainError: 少于四个点或误差为零。
    """
    x = np.asarray(x, dtype=float)
    errors = np.abs(np.asarray(errors, dtype=float))
    if x.size < 4 or x.size != errors.size:
        raise DomainError("拟合至少需要四个扫描点")
    if np.any(errors == 0) or not np.all(np.isfinite(errors)):
        raise DomainError("误差必须非零且有限")
    if kind == "power":
        if np.any(x <= 0):
            raise DomainError("幂律拟合要求 x > 0")
        abscissa = np.log(x)
    elif kind == "exponential":
        abscissa = x
    else:
        raise DomainError(f"未知的拟合类型: {kind}")
    slope, intercept = np.polyfit(abscissa, np.log(errors), 1)
    return SlopeFit(float(slope), float(intercept))
