"""
结果输出：CSV 表、JSON 报告、SVG 衰减图

所有文件先写临时文件再改名
"""
import csv
import io
import json
import os
from pathlib import Path
from typing import Any, Dict, List, Sequence

import logging

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ..core.serialization import format_float, to_serializable
from .exceptions import OutputError
from .types import DecayPlot, RunReport

logger = logging.getLogger("experiments.output")

# SVG 中的元素 id 与日期固定，保证逐字节复现
matplotlib.rcParams['svg.hashsalt'] = 'divlab'


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if isinstance(value, (list, tuple)):
        return ' '.join(_cell(v) for v in value)
    return str(value)


def _columns(rows: Sequence[Dict[str, Any]]) -> List[str]:
    columns: List[str] = []
    for row in rows:
        columns.extend(key for key in row if key not in columns)
    return columns


def atomic_write_text(path: Path, text: str) -> Path:
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except OSError as e:
        raise OutputError(f"failed to write {path}: {e}", path=str(path), original_error=e)
    return path


def table_csv(rows: Sequence[Dict[str, Any]]) -> str:
    """浮点数 17 位有效数字"""
    columns = _columns(rows)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c, "")) for c in columns])
    return buffer.getvalue()


def write_csv(path: Path, rows: Sequence[Dict[str, Any]]) -> Path:
    return atomic_write_text(path, table_csv(rows))


def write_json(path: Path, data: Any) -> Path:
    return atomic_write_text(path, json.dumps(to_serializable(data), indent=2, sort_keys=True) + "\n")


def write_decay_plot(path: Path, plot: DecayPlot) -> Path:
    """log-log 半径对幅值，标注拟合斜率"""
    radii = np.asarray(plot.radii, dtype=float)
    values = np.asarray(plot.values, dtype=float)
    keep = (radii > 0) & (values > 0) & np.isfinite(values)

    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.loglog(radii[keep], values[keep], "o-", label=plot.name)
    if plot.exponent is not None and np.count_nonzero(keep) >= 2:
        r0, v0 = radii[keep][0], values[keep][0]
        ax.loglog(radii[keep], v0 * (radii[keep] / r0) ** (-plot.exponent), "--",
                  label=f"slope -{plot.exponent:.3f}")
    ax.set_xlabel("|x|")
    ax.set_ylabel(plot.ylabel)
    ax.set_title(plot.name)
    ax.legend()
    fig.tight_layout()

    buffer = io.StringIO()
    fig.savefig(buffer, format="svg", metadata={'Date': None})
    plt.close(fig)
    return atomic_write_text(path, buffer.getvalue())


def write_outputs(report: RunReport, out_dir: Path, stem: str, plots: bool = True) -> List[Path]:
    """<stem>_<table>.csv、<stem>_report.json 与 <stem>_<plot>.svg"""
    out_dir = Path(out_dir)
    written = [write_csv(out_dir / f"{stem}_{name}.csv", rows) for name, rows in report.tables.items()]
    written.append(write_json(out_dir / f"{stem}_report.json", report.to_dict()))
    if plots:
        written.extend(write_decay_plot(out_dir / f"{stem}_{p.name}.svg", p) for p in report.plots)
    logger.info(f"wrote {len(written)} files to {out_dir}")
    return written
