"""
几何辅助函数

夹角、标准方向集合、局部正交标架
"""
import itertools
from typing import Tuple

import numpy as np

from .exceptions import DomainError
from .random import stream
from .types import Point3


def angle_zeta(u: Point3, v: Point3) -> float:
    """
    向量 u 与 v 的夹角 ζ(u, v) ∈ [0, π]

    用 atan2(|u×v|, u·v) 计算，小角度和接近 π 时都保持精度
    """
    a = u.as_array()
    b = v.as_array()
    if not np.any(a) or not np.any(b):
        raise DomainError("angle is undefined for a zero vector")
    cross = np.linalg.norm(np.cross(a, b))
    return float(np.arctan2(cross, float(np.dot(a, b))))


def angles_between(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """angle_zeta 的数组版本，u、v 形状 (N, 3) 或可广播"""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    cross = np.linalg.norm(np.cross(u, v), axis=-1)
    dot = np.sum(u * v, axis=-1)
    return np.arctan2(cross, dot)


def cube_directions() -> np.ndarray:
    """
    26个标准方向（立方体的面心、棱中点、顶点），单位化

    包络估计与程函网格共用，保证 m(Q) 可复现
    """
    dirs = [d for d in itertools.product((-1, 0, 1), repeat=3) if any(d)]
    arr = np.array(dirs, dtype=float)
    return arr / np.linalg.norm(arr, axis=1, keepdims=True)


def dyadic_radii(r_min: float = 1.0, r_max: float = 256.0) -> np.ndarray:
    """二进半径 {r_min, 2 r_min, ..., r_max}"""
    n = int(round(np.log2(r_max / r_min))) + 1
    return r_min * 2.0 ** np.arange(n)


def orthonormal_frame(axis: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """以 axis 为第一轴的右手正交标架 (e1, e2, e3)"""
    e1 = np.asarray(axis, dtype=float)
    e1 = e1 / np.linalg.norm(e1)
    helper = np.array([1.0, 0.0, 0.0]) if abs(e1[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e2 = np.cross(e1, helper)
    e2 /= np.linalg.norm(e2)
    e3 = np.cross(e1, e2)
    return e1, e2, e3


def as_points(points) -> np.ndarray:
    """把 Point3 / 序列 / 数组统一成 (N, 3) 数组"""
    if isinstance(points, Point3):
        return points.as_array()[None, :]
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    return arr


def random_directions(n: int, seed: int, stream_index: int = 0) -> np.ndarray:
    """n 个球面均匀分布的单位向量，由 (seed, stream_index) 决定"""
    v = stream(seed, stream_index).normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)
