"""
核心类型定义

空间点与复波数
"""
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .exceptions import ParameterError


# ============================================================================
# 几何类型
# ============================================================================

@dataclass(frozen=True)
class Point3:
    """三维空间中的点 x = (x1, x2, x3)"""
    x1: float
    x2: float
    x3: float

    @classmethod
    def from_array(cls, values) -> "Point3":
        """从长度为3的序列构造"""
        a = np.asarray(values, dtype=float).reshape(3)
        return cls(float(a[0]), float(a[1]), float(a[2]))

    @property
    def norm(self) -> float:
        """欧氏范数 |x|"""
        return math.sqrt(self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3)

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3], dtype=float)

    def distance(self, other: "Point3") -> float:
        """|x - y|，关于参数对称"""
        return (self - other).norm

    def __sub__(self, other: "Point3") -> "Point3":
        return Point3(self.x1 - other.x1, self.x2 - other.x2, self.x3 - other.x3)

    def __add__(self, other: "Point3") -> "Point3":
        return Point3(self.x1 + other.x1, self.x2 + other.x2, self.x3 + other.x3)

    def scaled(self, factor: float) -> "Point3":
        return Point3(factor * self.x1, factor * self.x2, factor * self.x3)

    def to_tuple(self) -> Tuple[float, float, float]:
        return (self.x1, self.x2, self.x3)


ORIGIN = Point3(0.0, 0.0, 0.0)


# ============================================================================
# 波数
# ============================================================================

@dataclass(frozen=True)
class ComplexWavenumber:
    """
    复波数 k = tau + i*delta，谱参数 z = k^2

    delta > 0 时为预解式工作区（上半平面）
    """
    tau: float
    delta: float

    @classmethod
    def from_complex(cls, k: complex) -> "ComplexWavenumber":
        k = complex(k)
        return cls(k.real, k.imag)

    @property
    def k(self) -> complex:
        return complex(self.tau, self.delta)

    @property
    def z(self) -> complex:
        """谱参数 z = k^2"""
        return self.k * self.k

    @property
    def energy(self) -> float:
        """实轴能量 E = tau^2（仅用于边界值）"""
        return self.tau * self.tau

    def require_resolvent(self) -> None:
        """预解式计算要求 Im k > 0"""
        if not self.delta > 0:
            raise ParameterError(f"resolvent work requires delta > 0, got {self.delta}")

    def in_strip(self, a: float, b: float) -> bool:
        """|tau| < a 且 0 < delta < b"""
        return abs(self.tau) < a and 0 < self.delta < b

    def in_interval(self, a1: float, a2: float) -> bool:
        return a1 < self.tau < a2

    def __complex__(self) -> complex:
        return self.k
