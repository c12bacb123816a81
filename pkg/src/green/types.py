"""
Green 函数模块的数据类型定义
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from scipy.integrate import trapezoid

from ..core.exceptions import ParameterError
from ..core.geometry import cube_directions
from ..core.serialization import to_serializable
from ..core.types import ComplexWavenumber, Point3
from ..quadrature.types import QuadratureSpec


@dataclass
class BornSettings:
    """Born 迭代的网格与求积设置"""
    # 网格：以支撑中心为心，对数均匀半径 × 方向集合
    n_radii: int = 24
    # 最小半径 = 支撑半径 / grid_span
    grid_span: float = 32.0
    directions: np.ndarray = field(default_factory=cube_directions)

    # 双中心求积：s 方向每段节点数、t 方向节点数、方位角节点数、s 段数
    n_s: int = 12
    n_t: int = 12
    n_phi: int = 8
    s_panels: int = 2

    # 非紧支撑场的截断容差
    truncation_tol: float = 1e-10

    # 发散判据：连续增长的阶数
    growth_window: int = 3

    def __post_init__(self):
        self.directions = np.asarray(self.directions, dtype=float)
        if self.n_radii < 4:
            raise ParameterError(f"n_radii must be >= 4, got {self.n_radii}")
        if min(self.n_s, self.n_t) < 2 or self.n_phi < 4:
            raise ParameterError("two-center rule needs n_s, n_t >= 2 and n_phi >= 4")
        if self.grid_span <= 1:
            raise ParameterError(f"grid_span must be > 1, got {self.grid_span}")

    @property
    def quadrature(self) -> QuadratureSpec:
        """对应的固定求积规则"""
        return QuadratureSpec(n_theta=max(self.n_t, 4), n_phi=self.n_phi, n_radial=self.n_s,
                              radial_panels=self.s_panels, max_refine=0)

    def refined(self, factor: int = 2) -> "BornSettings":
        return BornSettings(
            n_radii=self.n_radii, grid_span=self.grid_span, directions=self.directions,
            n_s=self.n_s * factor, n_t=self.n_t * factor, n_phi=self.n_phi * factor,
            s_panels=self.s_panels, truncation_tol=self.truncation_tol,
            growth_window=self.growth_window,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n_radii': self.n_radii,
            'grid_span': self.grid_span,
            'n_directions': len(self.directions),
            'n_s': self.n_s,
            'n_t': self.n_t,
            'n_phi': self.n_phi,
            's_panels': self.s_panels,
            'truncation_tol': self.truncation_tol,
            'growth_window': self.growth_window,
        }


@dataclass
class GreenEvaluation:
    """G_z(x, y) 的 Born 级数值及收敛证书"""
    x: Point3
    y: Point3
    k: ComplexWavenumber
    value: complex
    free_value: complex
    orders: List[float]
    converged: bool
    smallness_ratio: float
    grid_orders: List[float] = field(default_factory=list)

    @property
    def deviation(self) -> complex:
        """G - G⁰"""
        return self.value - self.free_value

    @property
    def n_orders(self) -> int:
        return len(self.orders)

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable({
            'x': self.x.to_tuple(),
            'y': self.y.to_tuple(),
            'k': self.k.k,
            'value': self.value,
            'free_value': self.free_value,
            'orders': self.orders,
            'grid_orders': self.grid_orders,
            'converged': self.converged,
            'smallness_ratio': self.smallness_ratio,
        })


@dataclass
class ResolventTable:
    """u(x, k) 在 方向 × 半径 上的采样"""
    k: ComplexWavenumber
    directions: np.ndarray
    radii: np.ndarray
    values: np.ndarray              # (n_dir, n_r) complex
    n_orders: int = 1
    converged: bool = True
    orders: List[float] = field(default_factory=list)
    # 逐点证书：最后一阶 / |u|
    tail: Optional[np.ndarray] = None

    def __post_init__(self):
        self.directions = np.atleast_2d(np.asarray(self.directions, dtype=float))
        self.radii = np.asarray(self.radii, dtype=float)
        self.values = np.asarray(self.values, dtype=complex).reshape(len(self.directions), len(self.radii))

    @property
    def points(self) -> np.ndarray:
        pts = self.directions[:, None, :] * self.radii[None, :, None]
        return pts.reshape(-1, 3)

    def along(self, direction_index: int) -> np.ndarray:
        return self.values[direction_index]

    def l2_norm(self) -> float:
        """
        ‖u‖₂ 在采样球 |x| ≤ r_max 上的估计

        方向取平均，径向对 4π r²|u|² 用梯形公式
        """
        mean_sq = np.mean(np.abs(self.values) ** 2, axis=0)
        return float(np.sqrt(trapezoid(4.0 * np.pi * self.radii ** 2 * mean_sq, self.radii)))

    def rows(self):
        """CSV 行：方向编号、半径、实部、虚部、阶数"""
        for i in range(len(self.directions)):
            for j, r in enumerate(self.radii):
                v = self.values[i, j]
                yield i, float(r), float(v.real), float(v.imag), self.n_orders


@dataclass
class ClassClDecomposition:
    """ψ = e^{ik|x|}(ψ1 + ψ2) 的拟合分解"""
    k: ComplexWavenumber
    radii: np.ndarray
    p1: float
    p2: float
    p2_grad: float
    r_squared: Dict[str, float]
    alpha: np.ndarray
    beta: np.ndarray

    @property
    def unreliable(self) -> List[str]:
        """R² < 0.9 的拟合项"""
        return [name for name, r2 in self.r_squared.items() if np.isfinite(r2) and r2 < 0.9]

    @property
    def p_min(self) -> float:
        """非 NaN 指数中的最小值"""
        values = [p for p in (self.p1, self.p2) if np.isfinite(p)]
        return min(values) if values else float("nan")

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable({
            'k': self.k.k,
            'p1': self.p1,
            'p2': self.p2,
            'p2_grad': self.p2_grad,
            'r_squared': self.r_squared,
            'unreliable': self.unreliable,
            'radii': [float(self.radii.min()), float(self.radii.max())],
        })


@dataclass
class GrowthEstimate:
    """截断预解式增长估计"""
    delta: float
    A_delta: float
    R_used: float
    gamma_fit: float = float("nan")
    octave: Optional[List[float]] = None
    free_A: Optional[float] = None
    n_orders: int = 0

    def __post_init__(self):
        if self.A_delta < 0:
            raise ParameterError(f"A_delta must be >= 0, got {self.A_delta}")

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable({
            'delta': self.delta,
            'A_delta': self.A_delta,
            'R_used': self.R_used,
            'gamma_fit': self.gamma_fit,
            'octave': self.octave,
            'free_A': self.free_A,
            'n_orders': self.n_orders,
        })


@dataclass
class SmallnessCalibration:
    """C_cal = max_η q(η)·δ³ / m(Q_η)"""
    C_cal: float
    k: ComplexWavenumber
    amplitudes: List[float]
    ratios: List[float]
    envelopes: List[float]

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable({
            'C_cal': self.C_cal,
            'k': self.k.k,
            'amplitudes': self.amplitudes,
            'ratios': self.ratios,
            'envelopes': self.envelopes,
            'recipe': 'max over bump amplitudes of observed term ratio * delta^3 / m(Q)',
        })
