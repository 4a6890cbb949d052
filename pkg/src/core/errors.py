class QED1DError(Exception):
    """本项目所有异常的基类"""


class ConfigError(QED1DError, ValueError):
    """运行配置或配置文件无效"""


class DomainError(QED1DError, ValueError):
    """物理运算的前提条件不满足"""


class NumericalError(QED1DError, RuntimeError):
    """数值计算失败"""


class QuadratureError(NumericalError):
    """自适应积分在允许的细化次数内没有收敛

    Attributes:
        value: 最后一次尝试得到的部分结果。
        error: 对应的误差估计。
    """

    def __init__(self, message: str, value=None, error: float | None = None):
        super().__init__(message)
        self.value = value
        self.error = error


class SolverError(NumericalError):
    """本征值求解失败或能隙本征值个数不对"""
