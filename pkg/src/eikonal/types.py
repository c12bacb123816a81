"""
程函模块的数据类型定义
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from ..core.exceptions import ParameterError
from ..core.geometry import cube_directions
from ..core.serialization import to_serializable
from ..quadrature.shells import ShellField, ShellGrid, log_radii
from ..quadrature.types import QuadratureSpec


@dataclass
class EikonalSettings:
    """Picard 迭代的网格、求积与差分设置"""
    # 网格：[r_min, r_max] 上对数均匀的球壳 × 方向集合
    n_shells: int = 32
    r_min: float = 1.25
    r_max: float = 32.0
    directions: np.ndarray = field(default_factory=cube_directions)

    # |∇μ|² 在 [taper_inner, r_min] 上用五次 smoothstep 接到零
    taper_inner: float = 1.0

    # 双中心求积：s 每段节点数、t 节点数、方位角节点数、s 段数
    n_s: int = 16
    n_t: int = 24
    n_phi: int = 8
    s_panels: int = 3

    # 中心差分步长
    fd_step: float = 1e-3

    # 连续增大多少步判为不收缩
    growth_window: int = 2

    def __post_init__(self):
        self.directions = np.asarray(self.directions, dtype=float)
        if self.n_shells < 5:
            raise ParameterError(f"n_shells must be >= 5, got {self.n_shells}")
        if not 1.0 <= self.taper_inner < self.r_min < self.r_max:
            raise ParameterError("need 1 <= taper_inner < r_min < r_max")
        if not self.fd_step > 0:
            raise ParameterError(f"fd_step must be > 0, got {self.fd_step}")

    @property
    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(n_theta=max(self.n_t, 4), n_phi=self.n_phi, n_radial=self.n_s,
                              radial_panels=self.s_panels, max_refine=0)

    def grid(self) -> ShellGrid:
        return ShellGrid(radii=log_radii(self.r_min, self.r_max, self.n_shells),
                         directions=self.directions)

    def refined(self, factor: int = 2) -> "EikonalSettings":
        """同一网格，求积节点加倍"""
        return EikonalSettings(
            n_shells=self.n_shells, r_min=self.r_min, r_max=self.r_max, directions=self.directions,
            taper_inner=self.taper_inner, n_s=self.n_s * factor, n_t=self.n_t * factor,
            n_phi=self.n_phi * factor, s_panels=self.s_panels, fd_step=self.fd_step,
            growth_window=self.growth_window,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n_shells': self.n_shells,
            'r_min': self.r_min,
            'r_max': self.r_max,
            'n_directions': len(self.directions),
            'taper_inner': self.taper_inner,
            'n_s': self.n_s,
            'n_t': self.n_t,
            'n_phi': self.n_phi,
            's_panels': self.s_panels,
            'fd_step': self.fd_step,
        }


@dataclass
class PhaseCorrection:
    """
    相位修正 μ（u = e^{-k|x| + μ}/|x|），只在 |x| > 1 上有定义

    values 形状 (n_shells, n_directions)
    """
    k: float
    grid: ShellGrid
    values: np.ndarray
    iteration: int = 0
    diff_norms: List[float] = field(default_factory=list)
    history: List[np.ndarray] = field(default_factory=list)
    converged: bool = False

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).reshape(self.grid.shape)

    @property
    def shell_field(self) -> ShellField:
        return self.grid.sample(self.values)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.shell_field(points)

    @property
    def contraction_ratios(self) -> List[float]:
        """‖μ_{n+1} - μ_n‖ / ‖μ_n - μ_{n-1}‖"""
        d = self.diff_norms
        return [b / a if a > 0 else float("nan") for a, b in zip(d, d[1:])]

    def iterate(self, n: int) -> "PhaseCorrection":
        """第 n 次迭代的快照（history[0] 为 μ₀）"""
        if not 0 <= n < len(self.history):
            raise ParameterError(f"iteration {n} not recorded (have {len(self.history)})")
        return PhaseCorrection(k=self.k, grid=self.grid, values=self.history[n], iteration=n,
                               diff_norms=self.diff_norms[:n])

    def rows(self):
        """CSV 行：方向编号、半径、值、迭代次数"""
        for j in range(len(self.grid.directions)):
            for i, r in enumerate(self.grid.radii):
                yield j, float(r), float(self.values[i, j]), self.iteration

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable({
            'k': self.k,
            'iteration': self.iteration,
            'diff_norms': self.diff_norms,
            'contraction_ratios': self.contraction_ratios,
            'converged': self.converged,
            'max_abs': float(np.max(np.abs(self.values))) if self.values.size else 0.0,
        })

