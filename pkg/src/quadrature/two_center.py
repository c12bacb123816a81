"""
双中心积分

被积函数在 a、b 两点同时带 1/|y-a|、1/|y-b| 奇性时，改用
s = |y-a| + |y-b|，t = |y-a| - |y-b|，以及绕 a-b 轴的方位角 φ：

    dy = (s² - t²) / (8c) ds dt dφ,   c = |a - b|

雅可比在两个奇点处恰好为零，抵消两个库仑奇性。
积分区域为 |y - a| < radius，即 t < 2·radius - s。
"""
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import logging

import numpy as np

from ..core.exceptions import ParameterError
from ..core.geometry import orthonormal_frame
from .ball import ball_nodes
from .rules import composite_gauss, gauss_legendre, graded_edges, panel_edges, refine_until
from .types import QuadratureResult, QuadratureSpec

logger = logging.getLogger("quadrature.two_center")

# |a - b| 小于此值（相对 radius）时退化为以 a 为中心的球坐标
_DEGENERATE = 1e-12


@dataclass
class TwoCenterNodes:
    """双中心节点：点、完整权重、到两个中心的距离"""
    points: np.ndarray
    weights: np.ndarray
    r_a: np.ndarray
    r_b: np.ndarray
    separation: float

    def __len__(self) -> int:
        return len(self.weights)


def two_center_nodes(a: np.ndarray, b: np.ndarray, radius: float,
                     n_s: int, n_t: int, n_phi: int,
                     damping: float = 0.0, s_panels: int = 1,
                     s_breaks: Sequence[float] = ()) -> TwoCenterNodes:
    """
    |y - a| < radius 上的双中心乘积节点

    damping > 0 时 s 方向按 1/damping 几何加密，
    适配 e^{-damping·(s - c)} 型的衰减权重
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if not radius > 0:
        raise ParameterError(f"integration radius must be positive, got {radius}")
    c = float(np.linalg.norm(b - a))

    if c <= _DEGENERATE * max(radius, 1.0):
        # 两中心重合：单中心球坐标，r² 雅可比
        spec = QuadratureSpec(n_theta=n_t, n_phi=n_phi, n_radial=n_s, radial_panels=s_panels)
        points, weights = ball_nodes(a, radius, spec)
        r = np.linalg.norm(points - a, axis=1)
        return TwoCenterNodes(points, weights, r, r.copy(), 0.0)

    s_hi = c + 2.0 * radius
    breaks = list(s_breaks)
    if radius > c:
        # t 的上限在 s = 2R - c 处由 c 切换为 2R - s
        breaks.append(2.0 * radius - c)
    if damping > 0 and damping * (s_hi - c) > 8.0:
        edges = graded_edges(c, s_hi, 1.0 / damping, s_panels)
        edges = np.array(sorted(set(edges.tolist()) | {t for t in breaks if c < t < s_hi}))
    else:
        edges = panel_edges(c, s_hi, s_panels, breaks)
    s, ws = composite_gauss(n_s, edges)

    # 每个 s 节点上 t ∈ [-c, min(c, 2R - s)]
    t_ref, wt_ref = gauss_legendre(n_t, -1.0, 1.0)
    t_hi = np.minimum(c, 2.0 * radius - s)
    half = 0.5 * (t_hi + c)
    t = -c + half[:, None] * (t_ref[None, :] + 1.0)
    wt = half[:, None] * wt_ref[None, :]

    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    wphi = 2.0 * np.pi / n_phi

    ss = np.broadcast_to(s[:, None], t.shape)
    r_a = 0.5 * (ss + t)
    r_b = 0.5 * (ss - t)
    # 沿轴分量与垂直分量
    along = (r_a * r_a - r_b * r_b + c * c) / (2.0 * c)
    perp = np.sqrt(np.maximum(r_a * r_a - along * along, 0.0))

    e1, e2, e3 = orthonormal_frame(b - a)
    cos_p = np.cos(phi)
    sin_p = np.sin(phi)
    points = (
        a[None, None, None, :]
        + along[:, :, None, None] * e1[None, None, None, :]
        + perp[:, :, None, None] * (
            cos_p[None, None, :, None] * e2[None, None, None, :]
            + sin_p[None, None, :, None] * e3[None, None, None, :]
        )
    )
    jac = (ss * ss - t * t) / (8.0 * c)
    w2 = ws[:, None] * wt * jac * wphi
    weights = np.broadcast_to(w2[:, :, None], points.shape[:3])

    n = points.shape[0] * points.shape[1] * points.shape[2]
    return TwoCenterNodes(
        points=points.reshape(n, 3),
        weights=np.ascontiguousarray(weights).reshape(n),
        r_a=np.repeat(r_a.reshape(-1), n_phi),
        r_b=np.repeat(r_b.reshape(-1), n_phi),
        separation=c,
    )


def integrate_two_center(g: Callable[[TwoCenterNodes], np.ndarray], a: np.ndarray, b: np.ndarray,
                         radius: float, spec: Optional[QuadratureSpec] = None,
                         damping: float = 0.0) -> QuadratureResult:
    """
    ∫_{|y - a| < radius} g dy

    g 接收 TwoCenterNodes，返回各节点的被积函数值；
    可以直接用 nodes.r_a / nodes.r_b 写出奇性因子，两者在节点上都大于零
    """
    spec = spec or QuadratureSpec()

    def evaluate(s: QuadratureSpec):
        nodes = two_center_nodes(a, b, radius, s.n_radial, s.n_theta, s.n_phi,
                                 damping=damping, s_panels=s.radial_panels)
        return complex(np.sum(nodes.weights * np.asarray(g(nodes)))), len(nodes)

    result = refine_until(evaluate, spec, f"two-center integral (R={radius})")
    logger.debug(f"two-center R={radius}: value={result.value:.6e}, nodes={result.n_nodes}")
    return result
