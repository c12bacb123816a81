"""
衰减包络的测量

m(F) = sup |F(x)|·(1 + |x|^{0.5+ε})，在 方向 × 半径 网格上取最大
"""
from typing import Optional, Sequence, Tuple

import logging

import numpy as np

from ..core.exceptions import ParameterError
from ..core.fitting import fit_power_law
from ..core.geometry import cube_directions, dyadic_radii
from .types import FieldSpec

logger = logging.getLogger("fields.envelope")


def _radial_grid(radii: Optional[Sequence[float]], directions: Optional[np.ndarray]):
    radii = dyadic_radii() if radii is None else np.asarray(radii, dtype=float)
    directions = cube_directions() if directions is None else np.asarray(directions, dtype=float)
    if radii.size == 0:
        raise ParameterError("radius grid is empty")
    if len(directions) == 0:
        raise ParameterError("direction set is empty")
    points = radii[:, None, None] * directions[None, :, :]
    return radii, directions, points.reshape(-1, 3)


def refine_radii(radii: Sequence[float]) -> np.ndarray:
    """在相邻半径之间插入几何中点"""
    radii = np.asarray(radii, dtype=float)
    mids = np.sqrt(radii[:-1] * radii[1:])
    return np.sort(np.concatenate([radii, mids]))


def estimate_decay_envelope(F: FieldSpec, eps: float, radii: Optional[Sequence[float]] = None,
                            directions: Optional[np.ndarray] = None) -> float:
    """
    采样网格上 |F(x)|(1 + |x|^{0.5+eps}) 的最大值

    默认网格：26 个立方体方向 × 二进半径 {1, 2, ..., 256}
    """
    if not eps > 0:
        raise ParameterError(f"eps must be > 0, got {eps}")
    radii, directions, points = _radial_grid(radii, directions)
    mags = F.magnitude(points).reshape(len(radii), len(directions))
    weighted = mags * (1.0 + radii[:, None] ** (0.5 + eps))
    m = float(np.max(weighted))
    logger.debug(f"envelope of {F.name or 'field'}: m={m:.4e} (eps={eps}, {points.shape[0]} points)")
    return m


def fit_decay_exponent(F: FieldSpec, radii: Sequence[float],
                       directions: Optional[np.ndarray] = None) -> Tuple[float, float]:
    """
    max_方向 |F(r ω)| 对 r 的对数线性拟合

    返回 (衰减指数, R²)
    """
    radii, directions, points = _radial_grid(radii, directions)
    mags = F.magnitude(points).reshape(len(radii), len(directions))
    fit = fit_power_law(radii, mags.max(axis=1))
    return fit.exponent, fit.r_squared


def is_short_range(V: FieldSpec, eps: float, radii: Optional[Sequence[float]] = None,
                   directions: Optional[np.ndarray] = None) -> bool:
    """|V| ≲ C/(1 + |x|^{1+ε}) 即拟合指数 ≥ 1 + ε"""
    radii = dyadic_radii(8.0, 256.0) if radii is None else radii
    exponent, r2 = fit_decay_exponent(V, radii, directions)
    if r2 < 0.9:
        logger.warning(f"decay fit for {V.name or 'potential'} has R²={r2:.3f}")
    return bool(np.isfinite(exponent) and exponent >= 1.0 + eps)
