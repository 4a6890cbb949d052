import argparse
import sys
from collections.abc import Sequence

import numpy as np
from pydantic import ValidationError

from . import __version__
from .cli.commands import (
    APPENDIX_KINDS,
    DENSITY_KINDS,
    cmd_appendix,
    cmd_bound_state,
    cmd_charge_summary,
    cmd_density,
    cmd_lamb_shift,
    cmd_wavefunction,
)
from .cli.schemas import load_config_file, resolve_config
from .cli.writer import render_csv, write_output
from .core.errors import ConfigError, DomainError, NumericalError
from .core.utils import logger

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--m", type=float, help="电子质量 (默认 1)")
    common.add_argument("--c", type=float, help="光速 (默认 1)")
    common.add_argument("--Z", type=float, help="核电荷 (默认 1)")
    common.add_argument("--L", type=float, action="append", help="盒长，可重复用于扫描")
    common.add_argument("--Lambda", type=float, action="append", help="紫外截断，可重复")
    common.add_argument("--grid-points", dest="grid_points", type=int, help="网格点数")
    common.add_argument("--x-max", dest="x_max", type=float, help="位置网格半宽")
    common.add_argument(
        "--include-zero",
        dest="exclude_zero",
        action="store_false",
        help="允许位置网格包含 x = 0 (奇数点数)",
    )
    common.add_argument("--k-max", dest="k_max", type=float, help="动量输出的最大 k")
    common.add_argument("--momentum", action="store_true", help="输出动量空间密度")
    common.add_argument("--source", choices=["exact", "basis-raw", "basis-improved"])
    common.add_argument("--vp", choices=["raw", "regularized", "exact", "uehling"])
    common.add_argument("--inv-c", dest="inv_c", type=float, action="append", help="1/c 扫描点")
    common.add_argument("--r", type=float, action="append", help="非对称截断比例 (附录 b)")
    common.add_argument("--epsilon", type=float, action="append", help="ε 序列 (附录 a、c)")
    common.add_argument("--d", type=float, action="append", help="观测电荷的距离")
    common.add_argument("--abs-tol", dest="abs_tol", type=float, help="积分绝对容差")
    common.add_argument("--rel-tol", dest="rel_tol", type=float, help="积分相对容差")
    common.add_argument("--out", help="输出 CSV 路径，缺省写到 stdout")
    common.add_argument("--config", help="配置文件 (key=value 或 JSON)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="qed1d", description="一维 delta 势类氢原子的有效 QED 计算"
    )
    parser.add_argument("--version", action="version", version=f"qed1d {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("bound-state", parents=[common], help="束缚态能量收敛扫描")
    density = sub.add_parser("density", parents=[common], help="真空极化密度")
    density.add_argument("which", choices=DENSITY_KINDS)
    sub.add_parser("lamb-shift", parents=[common], help="一阶真空极化能量修正")
    appendix = sub.add_parser(
        "appendix",
        parents=[common],
        help="附录检验",
        description=cmd_appendix.__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    appendix.add_argument("which", choices=APPENDIX_KINDS)
    sub.add_parser("charge-summary", parents=[common], help="电荷积分与观测电荷")
    sub.add_parser("wavefunction", parents=[common], help="基组束缚态波函数")
    return parser


def run(args: argparse.Namespace) -> str:
    flags = vars(args).copy()
    command = flags.pop("command")
    which = flags.pop("which", None)
    config_path = flags.pop("config", None)

    file_values = load_config_file(config_path) if config_path else {}
    config = resolve_config(file_values, flags)

    if command == "bound-state":
        table = cmd_bound_state(config)
    elif command == "density":
        table = cmd_density(config, which)
    elif command == "lamb-shift":
        table = cmd_lamb_shift(config)
    elif command == "appendix":
        table = cmd_appendix(config, which)
    elif command == "charge-summary":
        table = cmd_charge_summary(config)
    else:
        table = cmd_wavefunction(config)

    name = command if which is None else f"{command} {which}"
    text = render_csv(name, config.metadata(), table)
    write_output(text, config.out, sys.stdout)
    return text


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        logger.info(f"启动 {args.command} ...")
        run(args)
        logger.info(f"{args.command} 完成。")
        return EXIT_OK
    except (ConfigError, ValidationError) as e:
        logger.error(f"配置错误: {e}")
        return EXIT_CONFIG
    except DomainError as e:
        logger.error(f"参数不满足前提条件: {e}")
        return EXIT_CONFIG
    except (NumericalError, ArithmeticError, np.linalg.LinAlgError) as e:
        logger.error(f"数值计算失败: {e}")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
