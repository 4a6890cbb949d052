from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class XGrid:
    """位置网格：严格递增的采样点及其积分权重"""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        points = np.array(self.points, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if points.ndim != 1 or points.size < 2:
            raise DomainError("网格至少需要两个一维采样点")
        if points.shape != weights.shape:
            raise DomainError("网格点与权重的长度不一致")
        if not np.all(np.diff(points) > 0):
            raise DomainError("网格点必须严格递增")
        if not np.all(np.isfinite(points)):
            raise DomainError("网格点必须是有限值")
        points.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_points(cls, points) -> "XGrid":
        """任意递增点上的梯形权重"""
        points = np.asarray(points, dtype=float)
        if points.size < 2:
            raise DomainError("网格至少需要两个一维采样点")
        dx = np.diff(points)
        weights = np.zeros_like(points)
        weights[:-1] += dx / 2
        weights[1:] += dx / 2
        return cls(points, weights)

    def __len__(self) -> int:
        return self.points.size

    def same_as(self, other: "XGrid") -> bool:
        return self is other or np.array_equal(self.points, other.points)


@dataclass(frozen=True)
class DeltaPlusRegular:
    """分布 α·δ(x) + 正则部分

    标量形式下 values 的形状为 (N,)；矩阵形式下为 (N, 2, 2)，
    此时 delta_coeff 是对角元上的系数，即 α·I₂·δ(x)。
    """

    delta_coeff: float
    grid: XGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values)
        n = len(self.grid)
        if values.shape not in ((n,), (n, 2, 2)):
            raise DomainError(f"采样值的形状 {values.shape} 与网格长度 {n} 不匹配")
        if not np.all(np.isfinite(values)):
            raise DomainError("正则部分在采样点上必须是有限值")
        if not np.isfinite(self.delta_coeff):
            raise DomainError("delta 系数必须是有限值")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def is_matrix(self) -> bool:
        return self.values.ndim == 3

    def regular_integral(self):
        """正则部分按网格权重积分"""
        return np.tensordot(self.grid.weights, self.values, axes=(0, 0))

    def integral(self):
        """delta 系数加上正则部分的积分；矩阵形式返回 2×2 矩阵"""
        if self.is_matrix:
            return self.delta_coeff * np.eye(2) + self.regular_integral()
        return self.delta_coeff + self.regular_integral()

    def trace(self) -> "DeltaPlusRegular":
        """矩阵形式取迹，得到标量分布"""
        if not self.is_matrix:
            return self
        return DeltaPlusRegular(
            2 * self.delta_coeff, self.grid, np.trace(self.values, axis1=1, axis2=2).real
        )

    def with_delta(self, delta_coeff: float) -> "DeltaPlusRegular":
        return replace(self, delta_coeff=float(delta_coeff))
