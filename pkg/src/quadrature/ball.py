"""
球体与外部区域积分

- integrate_ball：以中心为原点的球坐标，r² 雅可比
- integrate_ball_singular：被积函数带 1/|y - center| 奇性，r² 抵消 1/r
- integrate_exterior：带指数阻尼的全空间积分，按解析尾界截断
"""
from typing import Callable, Optional, Sequence

import logging

import numpy as np
from scipy.optimize import brentq

from ..core.exceptions import DivergenceError, ParameterError
from ..core.types import ORIGIN, Point3
from .rules import composite_gauss, panel_edges, refine_until, sphere_rule
from .types import QuadratureResult, QuadratureSpec

logger = logging.getLogger("quadrature.ball")


def ball_nodes(center: np.ndarray, radius: float, spec: QuadratureSpec,
               breaks: Sequence[float] = (), panels: Optional[int] = None,
               axis: Optional[np.ndarray] = None, r_power: int = 2):
    """
    球 B(center, radius) 的乘积节点

    返回 (点 (N, 3), 权重 (N,))，权重含 r^r_power 因子
    """
    edges = panel_edges(0.0, radius, panels or spec.radial_panels, breaks)
    r, wr = composite_gauss(spec.n_radial, edges)
    dirs, wd = sphere_rule(spec.n_theta, spec.n_phi, axis)
    points = center[None, None, :] + r[:, None, None] * dirs[None, :, :]
    weights = np.outer(wr * r ** r_power, wd)
    return points.reshape(-1, 3), weights.ravel()


def integrate_ball(f: Callable[[np.ndarray], np.ndarray], center: Point3, radius: float,
                   spec: Optional[QuadratureSpec] = None, breaks: Sequence[float] = (),
                   axis: Optional[np.ndarray] = None) -> QuadratureResult:
    """∫_{|y - center| < radius} f(y) dy"""
    if not radius > 0:
        raise ParameterError(f"ball radius must be positive, got {radius}")
    spec = spec or QuadratureSpec()
    c = center.as_array()

    def evaluate(s: QuadratureSpec):
        points, w = ball_nodes(c, radius, s, breaks, axis=axis)
        return complex(np.sum(w * np.asarray(f(points)))), len(w)

    return refine_until(evaluate, spec, f"ball integral (R={radius})")


def integrate_ball_singular(f_smooth: Callable[[np.ndarray], np.ndarray], center: Point3,
                            radius: float, spec: Optional[QuadratureSpec] = None,
                            breaks: Sequence[float] = ()) -> QuadratureResult:
    """
    ∫_{|y - center| < radius} f_smooth(y) / |y - center| dy

    径向 Gauss 节点不含 r = 0，权重只带一个 r 因子，从不在奇点处求值
    """
    if not radius > 0:
        raise ParameterError(f"ball radius must be positive, got {radius}")
    spec = spec or QuadratureSpec()
    c = center.as_array()

    def evaluate(s: QuadratureSpec):
        points, w = ball_nodes(c, radius, s, breaks, r_power=1)
        return complex(np.sum(w * np.asarray(f_smooth(points)))), len(w)

    return refine_until(evaluate, spec, f"singular ball integral (R={radius})")


def exponential_tail(radius: float, delta: float, bound: float = 1.0) -> float:
    """M·4π ∫_R^∞ r² e^{-δr} dr 的闭式"""
    return bound * 4.0 * np.pi * np.exp(-delta * radius) * (
        radius * radius / delta + 2.0 * radius / delta ** 2 + 2.0 / delta ** 3
    )


def exterior_truncation_radius(delta: float, bound: float = 1.0, tol: float = 1e-10) -> float:
    """
    截断半径 R*：M·4π ∫_{R*}^∞ r² e^{-δr} dr = tol

    尾积分单调递减，用 brentq 求根
    """
    if not delta > 0:
        raise DivergenceError(f"exterior integral needs positive damping, got delta={delta}")
    if not tol > 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    if bound <= 0 or exponential_tail(0.0, delta, bound) <= tol:
        return 0.0
    hi = 1.0 / delta
    while exponential_tail(hi, delta, bound) > tol:
        hi *= 2.0
    return float(brentq(lambda r: exponential_tail(r, delta, bound) - tol, 0.0, hi, xtol=1e-12))


def integrate_exterior(f: Callable[[np.ndarray], np.ndarray], damping_delta: float,
                       spec: Optional[QuadratureSpec] = None, bound: float = 1.0,
                       center: Point3 = ORIGIN, axis: Optional[np.ndarray] = None,
                       breaks: Sequence[float] = ()) -> QuadratureResult:
    """
    ∫_{R^3} f(y) dy，其中 |f(y)| ≤ M e^{-δ|y - center|}

    在 R* 处截断，R* 写入结果；径向按 ~4/δ 宽度分段
    """
    if not damping_delta > 0:
        raise DivergenceError(f"exterior integral needs positive damping, got delta={damping_delta}")
    spec = spec or QuadratureSpec()
    tail_tol = max(spec.tol * 1e-2, spec.atol)
    radius = exterior_truncation_radius(damping_delta, bound, tail_tol)
    if radius == 0.0:
        return QuadratureResult(value=0.0, error=0.0, n_nodes=0, truncation_radius=0.0)

    panels = max(spec.radial_panels, int(np.ceil(damping_delta * radius / 4.0)))
    c = center.as_array()

    def evaluate(s: QuadratureSpec):
        points, w = ball_nodes(c, radius, s, breaks, panels=panels, axis=axis)
        return complex(np.sum(w * np.asarray(f(points)))), len(w)

    result = refine_until(evaluate, spec, f"exterior integral (delta={damping_delta})")
    result.truncation_radius = radius
    logger.debug(f"exterior delta={damping_delta}: R*={radius:.3f}, panels={panels}, nodes={result.n_nodes}")
    return result
