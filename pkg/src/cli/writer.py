import csv
import io
import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import __version__
from ..core.config import CSV_SIGNIFICANT_DIGITS


@dataclass
class Table:
    """一个 CSV 数据集：列名、数据行，以及写在前言里的附加元数据"""

    columns: Sequence[str]
    rows: list[Sequence] = field(default_factory=list)
    meta: dict[str, object] = field(default_factory=dict)


def format_value(value) -> str:
    """固定格式：浮点数 17 位有效数字，布尔值小写"""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), f".{CSV_SIGNIFICANT_DIGITS}g")
    return str(value)


def render_csv(command: str, config: dict, table: Table) -> str:
    buffer = io.StringIO()
    buffer.write(f"# qed1d {__version__}\n")
    buffer.write(f"# command: {command}\n")
    buffer.write(f"# config: {json.dumps(config, sort_keys=True, ensure_ascii=False)}\n")
    for key, value in table.meta.items():
        buffer.write(f"# {key}: {format_value(value)}\n")

    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    writer.writerows([format_value(v) for v in row] for row in table.rows)
    return buffer.getvalue()


def write_output(text: str, out: Path | None, stream) -> None:
    """写到文件或给定的流；文件先写临时文件再改名，失败时不留下半截输出"""
    if out is None:
        stream.write(text)
        return
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    tmp = out.with_name(out.name + ".part")
    try:
        tmp.write_text(text, encoding="utf-8", newline="\n")
        tmp.replace(out)
    finally:
        tmp.unlink(missing_ok=True)


def rows_from_columns(*columns: Iterable) -> list[tuple]:
    return list(zip(*columns))
