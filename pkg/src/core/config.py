import os

from dotenv import load_dotenv

from .errors import ConfigError

# 从项目根目录的 .env 文件加载环境变量
load_dotenv()

# 日志级别
LOG_LEVEL = os.getenv("QED1D_LOG_LEVEL", "INFO").upper()

# 自适应积分的默认容差与细化次数
QUAD_ABS_TOL = float(os.getenv("QED1D_ABS_TOL", "1e-10"))
QUAD_REL_TOL = float(os.getenv("QED1D_REL_TOL", "1e-10"))
QUAD_MAX_REFINEMENTS = int(os.getenv("QED1D_MAX_REFINEMENTS", "8"))

# 第一次尝试的子区间上限，之后每次细化翻倍
QUAD_BASE_LIMIT = 200

# 输出 CSV 中浮点数的有效数字
CSV_SIGNIFICANT_DIGITS = 17


def thread_count() -> int:
    """读取 QED1D_THREADS，返回扫描允许的最大线程数

    Returns:
        int: 线程数，未设置时为机器的 CPU 数。

    Raises:
        ConfigError: 环境变量不是正整数。
    """
    raw = os.getenv("QED1D_THREADS")
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigError(f"QED1D_THREADS 必须是正整数，当前为 '{raw}'") from e
    if value < 1:
        raise ConfigError(f"QED1D_THREADS 必须是正整数，当前为 '{raw}'")
    return value
