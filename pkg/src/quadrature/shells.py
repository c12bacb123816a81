"""
径向 × 角向采样网格及其可分离插值

每个球壳上用 l ≤ l_max 的实球谐（齐次调和多项式）做最小二乘，
系数沿半径做三次样条。Born 迭代与程函 Picard 迭代都在这种网格上
保存函数值，在网格之间插值。
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from ..core.exceptions import InsufficientDataError, ParameterError
from ..core.geometry import cube_directions
from ..core.types import ORIGIN, Point3

_CHUNK = 65536


def harmonic_basis(directions: np.ndarray, l_max: int = 2) -> np.ndarray:
    """
    单位方向上的实调和多项式基，形状 (N, (l_max+1)²)

    l = 0: 1；l = 1: x, y, z；l = 2: xy, yz, zx, x²-y², 3z²-1
    """
    d = np.atleast_2d(directions)
    x, y, z = d[:, 0], d[:, 1], d[:, 2]
    cols = [np.ones_like(x)]
    if l_max >= 1:
        cols += [x, y, z]
    if l_max >= 2:
        cols += [x * y, y * z, z * x, x * x - y * y, 3.0 * z * z - 1.0]
    if l_max > 2:
        raise ParameterError(f"l_max must be 0, 1 or 2, got {l_max}")
    return np.stack(cols, axis=1)


def log_radii(r_min: float, r_max: float, n: int) -> np.ndarray:
    """[r_min, r_max] 上对数均匀的 n 个半径"""
    if not 0 < r_min < r_max:
        raise ParameterError(f"need 0 < r_min < r_max, got ({r_min}, {r_max})")
    return np.geomspace(r_min, r_max, n)


@dataclass
class ShellGrid:
    """以 center 为中心的球壳网格，节点按 (半径, 方向) 排列"""
    radii: np.ndarray
    directions: np.ndarray = field(default_factory=cube_directions)
    center: Point3 = ORIGIN
    l_max: int = 2

    def __post_init__(self):
        self.radii = np.asarray(self.radii, dtype=float)
        self.directions = np.asarray(self.directions, dtype=float)
        if self.radii.ndim != 1 or len(self.radii) < 4:
            raise InsufficientDataError("shell grid needs at least 4 radii", required=4, got=len(self.radii))
        if np.any(np.diff(self.radii) <= 0) or self.radii[0] <= 0:
            raise ParameterError("shell radii must be positive and strictly increasing")
        n_basis = (self.l_max + 1) ** 2
        if len(self.directions) < n_basis:
            raise InsufficientDataError("too few directions for the angular basis",
                                        required=n_basis, got=len(self.directions))
        self._pinv = np.linalg.pinv(harmonic_basis(self.directions, self.l_max))

    @property
    def shape(self):
        return (len(self.radii), len(self.directions))

    @property
    def points(self) -> np.ndarray:
        """所有节点坐标 (n_r·n_d, 3)"""
        c = self.center.as_array()
        pts = c + self.radii[:, None, None] * self.directions[None, :, :]
        return pts.reshape(-1, 3)

    def sample(self, values: np.ndarray) -> "ShellField":
        return ShellField(self, np.asarray(values).reshape(self.shape))


class ShellField:
    """网格上的函数值及其插值"""

    def __init__(self, grid: ShellGrid, values: np.ndarray):
        self.grid = grid
        self.values = np.asarray(values).reshape(grid.shape)
        # (n_r, n_basis)
        coeffs = self.values @ grid._pinv.T
        self._spline = CubicSpline(grid.radii, coeffs, axis=0)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.values)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        """
        插值到任意点；半径超出网格时夹到 [r_min, r_max]
        """
        points = np.atleast_2d(points)
        out = np.empty(len(points), dtype=self.values.dtype if np.iscomplexobj(self.values) else float)
        c = self.grid.center.as_array()
        for start in range(0, len(points), _CHUNK):
            d = points[start:start + _CHUNK] - c
            r = np.linalg.norm(d, axis=1)
            safe = np.where(r > 0, r, 1.0)
            omega = d / safe[:, None]
            omega[r == 0] = (0.0, 0.0, 1.0)
            rc = np.clip(r, self.grid.radii[0], self.grid.radii[-1])
            basis = harmonic_basis(omega, self.grid.l_max)
            out[start:start + _CHUNK] = np.sum(self._spline(rc) * basis, axis=1)
        return out
