"""
基础求积规则

Gauss-Legendre / Gauss-Laguerre 节点、复合区间规则、球面乘积规则
"""
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import logging

import numpy as np
from scipy.special import roots_laguerre, roots_legendre

from ..core.exceptions import AccuracyError
from ..core.geometry import orthonormal_frame
from .types import QuadratureResult, QuadratureSpec

logger = logging.getLogger("quadrature.rules")


@lru_cache(maxsize=64)
def _legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(n)
    return x, w


@lru_cache(maxsize=32)
def _laguerre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = roots_laguerre(n)
    return x, w


def gauss_legendre(n: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    """[a, b] 上的 n 点 Gauss-Legendre 节点与权重"""
    x, w = _legendre(int(n))
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def gauss_laguerre(n: int, rate: float = 1.0, shift: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
    """
    ∫_shift^∞ e^{-rate (s - shift)} f(s) ds 的 Gauss-Laguerre 规则

    返回的权重已含指数因子，调用方只需乘 f(s)
    """
    x, w = _laguerre(int(n))
    return shift + x / rate, w / rate


def composite_gauss(n: int, edges: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """按给定断点拼接的复合 Gauss-Legendre 规则"""
    edges = np.asarray(sorted(set(float(e) for e in edges)), dtype=float)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        if b - a <= 0:
            continue
        x, w = gauss_legendre(n, a, b)
        nodes.append(x)
        weights.append(w)
    if not nodes:
        return np.empty(0), np.empty(0)
    return np.concatenate(nodes), np.concatenate(weights)


def panel_edges(a: float, b: float, panels: int, breaks: Sequence[float] = ()) -> np.ndarray:
    """[a, b] 均分为 panels 段，再插入落在区间内部的断点"""
    edges = list(np.linspace(a, b, panels + 1))
    edges.extend(float(t) for t in breaks if a < t < b)
    return np.array(sorted(set(edges)))


def graded_edges(a: float, b: float, scale: float, panels: int = 1) -> np.ndarray:
    """
    从 a 出发按 scale·{1, 2, 4, ...} 几何加密的断点

    用于 e^{-(s-a)/scale} 型的衰减权重
    """
    edges = [a]
    step = scale
    while a + step < b:
        edges.append(a + step)
        step *= 2.0
    edges.append(b)
    edges = np.array(edges)
    if panels > 1:
        extra = np.linspace(a, b, panels + 1)
        edges = np.array(sorted(set(edges.tolist()) | set(extra.tolist())))
    return edges


def sphere_rule(n_theta: int, n_phi: int, axis: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    单位球面乘积规则：θ 用 Gauss-Legendre，φ 用梯形

    axis 给出极轴方向；返回 (方向 (M, 3), 权重 (M,))，权重之和为 4π
    """
    theta, wt = gauss_legendre(n_theta, 0.0, np.pi)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    wp = np.full(n_phi, 2.0 * np.pi / n_phi)

    st = np.sin(theta)
    ct = np.cos(theta)
    local = np.stack([
        np.repeat(ct, n_phi),
        np.outer(st, np.cos(phi)).ravel(),
        np.outer(st, np.sin(phi)).ravel(),
    ], axis=1)
    weights = np.outer(wt * st, wp).ravel()

    if axis is None:
        # 默认极轴为 x3
        directions = local[:, [1, 2, 0]]
    else:
        e1, e2, e3 = orthonormal_frame(axis)
        directions = local[:, :1] * e1 + local[:, 1:2] * e2 + local[:, 2:3] * e3
    return directions, weights


def refine_until(evaluate: Callable[[QuadratureSpec], Tuple[complex, int]],
                 spec: QuadratureSpec, what: str) -> QuadratureResult:
    """
    逐级加密直到相邻两级的差满足容差

    evaluate(spec) 返回 (数值, 节点数)，数值可以是向量；
    误差估计取最后一次加密的差（分量最大值）
    """
    value, n_nodes = evaluate(spec)
    current = spec
    error = float("inf")
    for level in range(1, spec.max_refine + 1):
        current = current.refined(2)
        refined_value, n_nodes = evaluate(current)
        error = float(np.max(np.abs(np.asarray(refined_value) - np.asarray(value))))
        value = refined_value
        if spec.accepts(error, float(np.max(np.abs(value)))):
            return QuadratureResult(value=value, error=error, n_nodes=n_nodes, refinements=level)
    if spec.max_refine == 0:
        # 固定规则：不做误差估计
        return QuadratureResult(value=value, error=float("nan"), n_nodes=n_nodes)
    logger.warning(f"{what}: refinement exhausted, error={error:.3e}, tol={spec.tol:.1e}")
    raise AccuracyError(what, estimate=error, tolerance=spec.tol, value=value)
