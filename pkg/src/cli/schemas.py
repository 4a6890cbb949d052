import json
import math
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.errors import ConfigError
from ..core.params import PhysicalParams
from ..numerics.quadrature import QuadSpec

# 配置文件中按逗号拆分的列表字段
LIST_FIELDS = {"L", "Lambda", "inv_c", "r", "epsilon", "d"}


class RunConfig(BaseModel):
    """一次命令行运行的完整配置，任何计算开始之前完成校验"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    m: float = Field(1.0, gt=0, description="电子质量")
    c: float = Field(1.0, gt=0, description="光速")
    Z: float = Field(1.0, ge=0, description="核电荷")
    L: list[float] = Field([10.0], min_length=1, description="盒长，可扫描")
    Lambda: list[float] = Field([50.0], min_length=1, description="紫外截断，可扫描")
    grid_points: int = Field(400, ge=2, description="位置网格点数")
    x_max: float = Field(3.0, gt=0, description="位置网格半宽")
    exclude_zero: bool = Field(True, description="位置网格关于 0 对称且不含 0，要求偶数点数")
    k_max: float = Field(100.0, gt=0, description="动量输出的最大 k")
    momentum: bool = Field(False, description="输出动量空间密度")
    source: Literal["exact", "basis-raw", "basis-improved"] = Field(
        "exact", description="电子密度来源"
    )
    vp: Literal["raw", "regularized", "exact", "uehling"] = Field(
        "exact", description="真空极化密度类型"
    )
    inv_c: list[float] | None = Field(None, description="1/c 扫描点")
    r: list[float] = Field(
        [0.5, 1.0, 2.0, math.e], min_length=1, description="非对称截断比例"
    )
    epsilon: list[float] = Field(
        [1e-1, 1e-2, 1e-3], min_length=2, description="mollifier 与奇异核平均的 ε 序列"
    )
    d: list[float] | None = Field(None, description="观测电荷的距离")
    abs_tol: float | None = Field(None, gt=0, description="积分绝对容差")
    rel_tol: float | None = Field(None, gt=0, description="积分相对容差")
    out: Path | None = Field(None, description="输出 CSV 路径，缺省写到 stdout")

    @model_validator(mode="after")
    def _check_values(self):
        PhysicalParams(m=self.m, c=self.c, Z=self.Z)
        for name in ("L", "Lambda", "r", "epsilon", "inv_c", "d"):
            values = getattr(self, name)
            if values is not None and any(not (v > 0 and math.isfinite(v)) for v in values):
                raise ValueError(f"{name} 中的值必须为有限正数")
        if self.exclude_zero and not self.momentum and self.grid_points % 2:
            raise ValueError(f"grid_points 必须为偶数才能避开 x = 0，当前为 {self.grid_points}")
        return self

    @property
    def params(self) -> PhysicalParams:
        return PhysicalParams(m=self.m, c=self.c, Z=self.Z)

    @property
    def quad_spec(self) -> QuadSpec:
        overrides = {
            key: value
            for key, value in (("abs_tol", self.abs_tol), ("rel_tol", self.rel_tol))
            if value is not None
        }
        return QuadSpec(**overrides)

    def metadata(self) -> dict:
        """写入 CSV 前言的已解析配置"""
        return self.model_dump(mode="json", exclude={"out"})


def load_config_file(path: Path) -> dict:
    """读取配置文件：单个 JSON 对象，或每行一个 key=value

    Raises:
        ConfigError: 文件无法读取或格式错误。
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"无法读取配置文件 {path}: {e}") from e

    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"配置文件不是合法的 JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError("JSON 配置文件必须是一个对象")
        return {key.replace("-", "_"): value for key, value in data.items()}

    data: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"配置文件第 {lineno} 行缺少 '=': {raw}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key in LIST_FIELDS:
            data[key] = [item.strip() for item in value.split(",") if item.strip()]
        else:
            data[key] = value
    return data


def resolve_config(file_values: dict, flag_values: dict) -> RunConfig:
    """合并配置文件与命令行参数，命令行优先"""
    merged = {**file_values, **flag_values}
    return RunConfig(**merged)
