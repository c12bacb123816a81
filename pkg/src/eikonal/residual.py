"""
带黏性的程函方程 (HJ) 的差分残差

    Δμ + |∇μ|² - 2k ∂_r μ - V - (2/r) ∂_r μ
"""
from typing import Callable, Optional, Union

import logging

import numpy as np

from ..core.exceptions import InsufficientDataError
from ..core.geometry import as_points
from ..fields.types import FieldSpec
from .picard import central_gradient
from .types import PhaseCorrection

logger = logging.getLogger("eikonal.residual")

RealMap = Callable[[np.ndarray], np.ndarray]

_AXES = np.eye(3)


def central_laplacian(fn: RealMap, points: np.ndarray, h: float) -> np.ndarray:
    """七点差分 Laplace"""
    center = fn(points)
    total = -6.0 * center
    for e in _AXES:
        total = total + fn(points + h * e) + fn(points - h * e)
    return total / (h * h)


def hj_residual(mu: RealMap, V: Union[FieldSpec, RealMap], k: float,
                points: np.ndarray, h: float) -> np.ndarray:
    """各点上 (HJ) 的残差"""
    pts = as_points(points)
    r = np.linalg.norm(pts, axis=1)
    grad = central_gradient(mu, pts, h)
    d_r = np.sum(grad * pts, axis=1) / r
    lap = central_laplacian(mu, pts, h)
    return lap + np.sum(grad * grad, axis=1) - 2.0 * k * d_r - np.asarray(V(pts)) - 2.0 / r * d_r


def eikonal_residual(mu: PhaseCorrection, V: FieldSpec, k: Optional[float] = None,
                     h: float = 1e-2) -> float:
    """
    网格内部节点（去掉首末球壳）上 (HJ) 残差的最大模

    μ 用网格插值，导数用步长 h 的中心差分；径向至少要 5 个球壳
    """
    grid = mu.grid
    if len(grid.radii) < 5:
        raise InsufficientDataError("eikonal residual needs at least 5 shells", required=5, got=len(grid.radii))
    k = mu.k if k is None else k
    interior = (grid.radii[1:-1, None, None] * grid.directions[None, :, :]).reshape(-1, 3)
    residual = hj_residual(mu.shell_field, V, k, interior, h)
    worst = float(np.max(np.abs(residual)))
    logger.debug(f"HJ residual at iteration {mu.iteration}: {worst:.3e}")
    return worst
