"""
结果序列化

把 numpy / 复数 / dataclass 结果转换为 JSON 可序列化结构
"""
import json
from dataclasses import asdict, is_dataclass
from enum import Enum
from typing import Any

import numpy as np


def to_serializable(obj: Any) -> Any:
    """将对象转换为 JSON 可序列化的类型，复数写成 [re, im]"""
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_serializable(asdict(obj))
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return _finite_or_str(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        c = complex(obj)
        return [_finite_or_str(c.real), _finite_or_str(c.imag)]
    if isinstance(obj, np.ndarray):
        return to_serializable(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): to_serializable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_serializable(item) for item in obj]
    return obj


def _finite_or_str(x: float):
    # JSON 没有 inf/nan，用字符串哨兵保留信息
    if np.isfinite(x):
        return x
    return "nan" if np.isnan(x) else ("inf" if x > 0 else "-inf")


def canonical_json(obj: Any) -> str:
    """键排序、无多余空白的规范 JSON，用于摘要计算"""
    return json.dumps(to_serializable(obj), sort_keys=True, separators=(",", ":"))


def format_float(x: float) -> str:
    """17位有效数字，保证可逐字节复现"""
    return format(float(x), ".17g")
