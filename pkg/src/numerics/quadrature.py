"""自适应积分与网格积分

所有积分器都接受标量、向量、矩阵或复数值的被积函数，各分量共用同一组
Gauss-Kronrod 子区间 (scipy.integrate.quad_vec)。没有收敛时按 tenacity
的重试策略把子区间上限翻倍，最终失败抛出带部分结果的 QuadratureError。
"""

import math
from collections.abc import Callable
from typing import Literal, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.integrate import quad_vec, simpson, trapezoid
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from ..core.config import (
    QUAD_ABS_TOL,
    QUAD_BASE_LIMIT,
    QUAD_MAX_REFINEMENTS,
    QUAD_REL_TOL,
)
from ..core.distributions import XGrid
from ..core.errors import DomainError, NumericalError, QuadratureError
from ..core.utils import logger


# cosh 的参数上限，再大会溢出
_S_MAX = 700.0


class QuadSpec(BaseModel):
    """自适应积分的容差设置"""

    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(QUAD_ABS_TOL, gt=0, description="绝对容差")
    rel_tol: float = Field(QUAD_REL_TOL, gt=0, description="相对容差")
    max_refinements: int = Field(
        QUAD_MAX_REFINEMENTS, ge=1, description="子区间上限翻倍的最大次数"
    )


class QuadResult(NamedTuple):
    value: float | complex | np.ndarray
    error: float


class _Flattened:
    """把任意形状的 (复) 数值被积函数展平成实向量"""

    def __init__(self, f: Callable):
        self.f = f
        self.shape: tuple[int, ...] | None = None
        self.is_complex = False

    def __call__(self, t: float) -> np.ndarray:
        v = np.asarray(self.f(t))
        if self.shape is None:
            self.shape = v.shape
            self.is_complex = np.iscomplexobj(v)
        if self.is_complex:
            return np.concatenate([v.real.ravel(), v.imag.ravel()])
        return v.ravel().astype(float)

    def restore(self, flat: np.ndarray):
        flat = np.atleast_1d(flat)
        if self.is_complex:
            half = flat.size // 2
            v = flat[:half] + 1j * flat[half:]
        else:
            v = flat
        v = v.reshape(self.shape)
        return v.item() if v.ndim == 0 else v


def _adaptive(f: Callable, a: float, b: float, spec: QuadSpec | None) -> QuadResult:
    spec = spec or QuadSpec()
    flat = _Flattened(f)
    value = error = None

    retrying = Retrying(
        stop=stop_after_attempt(spec.max_refinements),
        retry=retry_if_exception_type(QuadratureError),
        reraise=True,
    )
    for attempt in retrying:
        with attempt:
            n = attempt.retry_state.attempt_number
            limit = QUAD_BASE_LIMIT * 2 ** (n - 1)
            value, error, info = quad_vec(
                flat,
                a,
                b,
                epsabs=spec.abs_tol,
                epsrel=spec.rel_tol,
                norm="max",
                limit=limit,
                full_output=True,
            )
            if info.status == 2:
                raise NumericalError(f"被积函数在 [{a}, {b}] 上出现非有限值")
            if info.status != 0:
                if n < spec.max_refinements:
                    logger.warning(
                        f"积分未在 {limit} 个子区间内收敛 (误差 {error:.3e})，加倍细化"
                    )
                raise QuadratureError(
                    f"积分在 {spec.max_refinements} 次细化后仍未收敛，误差估计 {error:.3e}",
                    value=flat.restore(value),
                    error=float(error),
                )
    return QuadResult(flat.restore(value), float(error))


def integrate_interval(
    f: Callable, a: float, b: float, spec: QuadSpec | None = None
) -> QuadResult:
    """有限区间 [a, b] 上的自适应积分"""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integrate_interval 只接受有限端点")
    return _adaptive(f, a, b, spec)


def integrate_half_line(f: Callable, spec: QuadSpec | None = None) -> QuadResult:
    """[0, ∞) 上的自适应积分"""
    return _adaptive(f, 0.0, math.inf, spec)


def integrate_real_line(
    f: Callable,
    spec: QuadSpec | None = None,
    decay_hint: Literal["algebraic", "exponential"] = "algebraic",
) -> QuadResult:
    """整条实轴上的积分

    Args:
        f (Callable): 被积函数 f(u)。
        spec (QuadSpec, optional): 容差设置。
        decay_hint (str): "algebraic" 时用 u = tan θ 映射到 (−π/2, π/2)，
            要求 |f(u)| 至少按 1/u² 衰减；"exponential" 直接交给 quad_vec 的无穷区间变换。

    Returns:
        QuadResult: 积分值与误差估计。
    """
    if decay_hint == "algebraic":

        def mapped(theta: float):
            cos = math.cos(theta)
            return np.asarray(f(math.tan(theta))) / (cos * cos)

        return _adaptive(mapped, -math.pi / 2, math.pi / 2, spec)
    if decay_hint == "exponential":
        return _adaptive(f, -math.inf, math.inf, spec)
    raise DomainError(f"未知的衰减类型: {decay_hint}")


def integrate_endpoint_singularity(
    h: Callable, spec: QuadSpec | None = None
) -> QuadResult:
    """计算 ∫₁^∞ h(t)/√(t²−1) dt

    用 t = cosh s 消去端点奇异性，积分变为 ∫₀^∞ h(cosh s) ds。
    调用方只提供光滑部分 h(t)。
    """
    return integrate_half_line(lambda s: h(math.cosh(min(s, _S_MAX))), spec)


def simpson_weights(n: int, h: float) -> np.ndarray:
    """n 个等距点的复合 Simpson 权重，n 为偶数时退化为梯形权重"""
    if n < 2:
        raise DomainError("网格积分至少需要两个采样点")
    if n % 2 == 0:
        w = np.full(n, h)
        w[0] = w[-1] = h / 2
        return w
    w = np.full(n, 2 * h / 3)
    w[1::2] = 4 * h / 3
    w[0] = w[-1] = h / 3
    return w


def composite_grid_integral(samples, h: float):
    """等距采样的复合 Simpson 积分 (奇数个点)，偶数个点时用梯形公式"""
    samples = np.asarray(samples)
    if samples.shape[0] < 2:
        raise DomainError("网格积分至少需要两个采样点")
    if samples.shape[0] % 2 == 1:
        return simpson(samples, dx=h, axis=0)
    return trapezoid(samples, dx=h, axis=0)


def uniform_midpoint_grid(x_max: float, n: int) -> XGrid:
    """[−x_max, x_max] 上 n 个单元的中点，n 为偶数时网格不含 0"""
    if x_max <= 0 or n < 2:
        raise DomainError("网格需要 x_max > 0 且至少两个点")
    h = 2 * x_max / n
    points = -x_max + (np.arange(n) + 0.5) * h
    return XGrid(points, np.full(n, h))


def periodic_grid(box_length: float, n: int) -> XGrid:
    """周期盒 [−L/2, L/2] 上的等距中点网格

    对频率小于 n·2π/L 的三角多项式，中点公式给出精确的积分。
    """
    if n % 2:
        n += 1
    return uniform_midpoint_grid(box_length / 2, n)


def log_symmetric_grid(x_min: float, x_max: float, n_half: int) -> XGrid:
    """关于 0 对称、在 ln|x| 上等距的网格 (不含 0)

    权重是 ln|x| 变量下的梯形权重乘以 |x|；对两端都衰减的光滑被积函数，
    这个规则的收敛非常快。区间 (0, x_min) 用矩形补上。
    """
    if not 0 < x_min < x_max or n_half < 3:
        raise DomainError("对数网格需要 0 < x_min < x_max 且每侧至少三个点")
    y = np.linspace(math.log(x_min), math.log(x_max), n_half)
    h = y[1] - y[0]
    positive = np.exp(y)
    w = h * positive
    w[0] = w[0] / 2 + x_min
    w[-1] /= 2
    points = np.concatenate([-positive[::-1], positive])
    weights = np.concatenate([w[::-1], w])
    return XGrid(points, weights)
