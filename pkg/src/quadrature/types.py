"""
求积模块的数据类型定义
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from ..core.exceptions import ParameterError
from ..core.serialization import to_serializable


@dataclass(frozen=True)
class QuadratureSpec:
    """求积配置"""
    # 球面乘积网格：θ 方向 Gauss-Legendre 节点数 × φ 方向梯形节点数
    n_theta: int = 16
    n_phi: int = 32

    # 径向每个子区间的 Gauss-Legendre 节点数
    n_radial: int = 16

    # 径向初始子区间数
    radial_panels: int = 1

    # 自适应加密次数上限（每次所有节点数翻倍）
    max_refine: int = 3

    # 相对容差 / 绝对下限
    tol: float = 1e-8
    atol: float = 1e-14

    # 外部积分截断策略（目前只有解析指数尾界）
    truncation_policy: str = "exponential-tail"

    def __post_init__(self):
        """验证配置参数"""
        if self.n_theta < 4 or self.n_phi < 4:
            raise ParameterError(f"n_theta and n_phi must be >= 4, got ({self.n_theta}, {self.n_phi})")
        if self.n_radial < 2:
            raise ParameterError(f"n_radial must be >= 2, got {self.n_radial}")
        if self.radial_panels < 1:
            raise ParameterError(f"radial_panels must be >= 1, got {self.radial_panels}")
        if self.max_refine < 0:
            raise ParameterError(f"max_refine must be >= 0, got {self.max_refine}")
        if not self.tol > 0:
            raise ParameterError(f"tol must be > 0, got {self.tol}")

    def refined(self, factor: int = 2) -> "QuadratureSpec":
        """所有节点数乘以 factor"""
        return replace(
            self,
            n_theta=self.n_theta * factor,
            n_phi=self.n_phi * factor,
            n_radial=self.n_radial * factor,
        )

    def oracle(self) -> "QuadratureSpec":
        """独立参照求积：4 倍节点数"""
        return replace(self.refined(4), max_refine=0)

    def fixed(self) -> "QuadratureSpec":
        """不做加密的单次规则（网格批量求值用）"""
        return replace(self, max_refine=0)

    def accepts(self, error: float, value: complex) -> bool:
        return error <= max(self.tol * abs(value), self.atol)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n_theta': self.n_theta,
            'n_phi': self.n_phi,
            'n_radial': self.n_radial,
            'radial_panels': self.radial_panels,
            'max_refine': self.max_refine,
            'tol': self.tol,
            'atol': self.atol,
            'truncation_policy': self.truncation_policy,
        }


class RegionTag(Enum):
    """|x| > 1 时对 R^3 的三区域划分"""
    NEAR = "near"            # |y| < 2|x|/3
    SHIFTED = "shifted"      # |y - x| < 2|x|/3
    UPSILON = "upsilon"      # |y| > 2|x|/3 且 |x - y| > 2|x|/3

    def contains(self, y: np.ndarray, x: np.ndarray) -> np.ndarray:
        """y 形状 (N, 3)，返回布尔数组"""
        y = np.atleast_2d(np.asarray(y, dtype=float))
        x = np.asarray(x, dtype=float).reshape(3)
        radius = 2.0 * np.linalg.norm(x) / 3.0
        ry = np.linalg.norm(y, axis=1)
        rxy = np.linalg.norm(y - x, axis=1)
        if self is RegionTag.NEAR:
            return ry < radius
        if self is RegionTag.SHIFTED:
            return rxy < radius
        return (ry >= radius) & (rxy >= radius)

    @staticmethod
    def classify(y: np.ndarray, x: np.ndarray) -> np.ndarray:
        """不相交的归类：shifted 优先，其次 near，其余为 upsilon"""
        labels = np.full(len(np.atleast_2d(y)), RegionTag.UPSILON.value, dtype=object)
        labels[RegionTag.NEAR.contains(y, x)] = RegionTag.NEAR.value
        labels[RegionTag.SHIFTED.contains(y, x)] = RegionTag.SHIFTED.value
        return labels


@dataclass
class QuadratureResult:
    """一次求积的结果及诊断信息"""
    value: complex
    error: float
    n_nodes: int
    refinements: int = 0
    truncation_radius: Optional[float] = None
    regions: Dict[str, complex] = field(default_factory=dict)

    @property
    def real(self) -> float:
        return float(np.real(self.value))

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable({
            'value': complex(self.value),
            'error': self.error,
            'n_nodes': self.n_nodes,
            'refinements': self.refinements,
            'truncation_radius': self.truncation_radius,
            'regions': {k: complex(v) for k, v in self.regions.items()},
        })
