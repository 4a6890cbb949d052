from pathlib import Path

from src.core.utils import logger
from src.main import main

RESULTS_DIR = Path(__file__).parent / "results"

# 每个数据集对应的命令行参数
DATASETS: dict[str, list[str]] = {
    "bound_state_lambda_scan.csv": ["bound-state", "--L", "10"]
    + [arg for v in (10, 20, 30, 40, 50, 75, 100) for arg in ("--Lambda", str(v))],
    "bound_state_L_scan.csv": ["bound-state", "--Lambda", "100"]
    + [arg for v in (4, 6, 8, 10, 12, 14) for arg in ("--L", str(v))],
    "density_uehling.csv": ["density", "uehling_exact"],
    "density_total.csv": ["density", "total_exact"],
    "density_basis.csv": ["density", "basis", "--L", "10", "--Lambda", "50"],
    "density_basis_momentum.csv": ["density", "basis", "--momentum"],
    "density_basis_regularized.csv": ["density", "basis_regularized"],
    "lamb_shift_exact.csv": ["lamb-shift", "--source", "exact", "--vp", "exact"]
    + [arg for v in range(1, 11) for arg in ("--inv-c", str(v / 10))],
    "lamb_shift_basis_raw.csv": ["lamb-shift", "--source", "basis-raw", "--vp", "raw"]
    + [arg for v in (10, 20, 30, 40, 50) for arg in ("--Lambda", str(v))],
    "lamb_shift_basis_improved.csv": [
        "lamb-shift",
        "--source",
        "basis-improved",
        "--vp",
        "regularized",
    ]
    + [arg for v in (10, 20, 30, 40, 50) for arg in ("--Lambda", str(v))],
    "appendix_a.csv": ["appendix", "a"],
    "appendix_b.csv": ["appendix", "b"],
    "appendix_c.csv": ["appendix", "c"],
    "appendix_d.csv": ["appendix", "d", "--L", "10"]
    + [arg for v in (10, 20, 50, 100, 200) for arg in ("--Lambda", str(v))],
    "charge_summary.csv": ["charge-summary"],
}

if __name__ == "__main__":
    try:
        logger.info("启动数据集生成流程...")
        failed = []
        for name, argv in DATASETS.items():
            code = main([*argv, "--out", str(RESULTS_DIR / name)])
            if code != 0:
                failed.append(name)
        if failed:
            logger.error(f"以下数据集生成失败: {', '.join(failed)}")
        else:
            logger.info(f"全部数据集已写入 {RESULTS_DIR}")
    except Exception as e:
        logger.error(f"数据集生成过程中发生错误: {e}")
