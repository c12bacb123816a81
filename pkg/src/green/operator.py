"""
算子 B(k)

    (B(k) f)(x) = ∫ G⁰(x, z) div Q(z) f(z) dz

积分区域取 div Q 的（有效）支撑球。核在 z = x 处有 1/|x - z| 奇性，
f 可能在 f_center 处再带一个 1/|z - y| 奇性，两者用双中心坐标同时消去。
"""
from typing import Callable, Optional

import logging

import numpy as np

from ..core.exceptions import ParameterError
from ..core.geometry import as_points
from ..core.types import ComplexWavenumber, Point3
from ..fields.types import FieldSpec
from ..quadrature.ball import exterior_truncation_radius
from ..quadrature.rules import refine_until
from ..quadrature.two_center import two_center_nodes
from ..quadrature.types import QuadratureResult, QuadratureSpec, RegionTag

logger = logging.getLogger("green.operator")

# n_theta 对应双中心的 t 方向，n_radial 对应 s 方向
DEFAULT_SPEC = QuadratureSpec(n_theta=16, n_phi=8, n_radial=16, radial_panels=2,
                              max_refine=3, tol=1e-8, atol=1e-15)

ComplexMap = Callable[[np.ndarray], np.ndarray]


def support_radius(Q: FieldSpec, k: ComplexWavenumber, tol: float = 1e-10) -> float:
    """
    div Q·f 的积分半径（以原点为心）

    紧支撑场取 reach；否则被积函数按 m·e^{-δ|z|} 估计，
    用阻尼尾界求截断半径
    """
    if Q.reach is not None:
        return float(Q.reach)
    k.require_resolvent()
    if not Q.envelope.m > 0:
        raise ParameterError(f"non-compact field {Q.name or 'Q'} needs a decay envelope with m > 0")
    return max(exterior_truncation_radius(k.delta, Q.envelope.m, tol), 1.0)


def apply_B(k: ComplexWavenumber, Q: FieldSpec, f: ComplexMap, x: Point3,
            spec: Optional[QuadratureSpec] = None,
            f_center: Optional[np.ndarray] = None,
            radius: Optional[float] = None) -> QuadratureResult:
    """
    (B(k) f)(x)

    f 接受 (N, 3) 点数组；f_center 为 f 的奇点（如 G⁰(·, y) 的 y）。
    |x| > 1 时结果的 regions 给出三区域（near / shifted / upsilon）的分量。
    """
    k.require_resolvent()
    spec = spec or DEFAULT_SPEC
    if Q.is_zero:
        return QuadratureResult(value=0.0, error=0.0, n_nodes=0)

    R = radius if radius is not None else support_radius(Q, k)
    xa = x.as_array()
    a = np.zeros(3) if f_center is None else np.asarray(f_center, dtype=float).reshape(3)
    # B(a, |a| + R) ⊇ B(0, R)
    ball = float(np.linalg.norm(a)) + R
    kk = k.k
    last = {}

    def evaluate(s: QuadratureSpec):
        nodes = two_center_nodes(a, xa, ball, s.n_radial, s.n_theta, s.n_phi,
                                 damping=k.delta, s_panels=s.radial_panels)
        kernel = np.exp(1j * kk * nodes.r_b) / (4.0 * np.pi * nodes.r_b)
        values = nodes.weights * kernel * Q.div(nodes.points) * np.asarray(f(nodes.points))
        last['points'], last['values'] = nodes.points, values
        return complex(np.sum(values)), len(nodes)

    result = refine_until(evaluate, spec, f"B(k) at |x|={x.norm:.3g}")
    result.truncation_radius = R
    if x.norm > 1.0:
        labels = RegionTag.classify(last['points'], xa)
        result.regions = {tag.value: complex(np.sum(last['values'][labels == tag.value]))
                          for tag in RegionTag}
    logger.debug(f"B(k) |x|={x.norm:.3g}: value={complex(result.value):.6e}, nodes={result.n_nodes}")
    return result


def apply_B_many(k: ComplexWavenumber, Q: FieldSpec, f: ComplexMap, targets: np.ndarray,
                 spec: Optional[QuadratureSpec] = None,
                 f_center: Optional[np.ndarray] = None,
                 radius: Optional[float] = None) -> np.ndarray:
    """在一批目标点上求 (B(k) f)，各点独立"""
    pts = as_points(targets)
    if Q.is_zero:
        return np.zeros(len(pts), dtype=complex)
    R = radius if radius is not None else support_radius(Q, k)
    return np.array([
        complex(apply_B(k, Q, f, Point3.from_array(p), spec, f_center, R).value) for p in pts
    ], dtype=complex)


def newton_source(k: ComplexWavenumber, f: FieldSpec, targets: np.ndarray,
                  spec: Optional[QuadratureSpec] = None) -> np.ndarray:
    """
    u0 = G⁰ * f 在目标点上的值

    f 支撑在 B(0, f.reach) 内；以原点和目标点为双中心，
    支撑边界 |z| = reach 正好是坐标面
    """
    spec = spec or DEFAULT_SPEC
    pts = as_points(targets)
    if f.is_zero:
        return np.zeros(len(pts), dtype=complex)
    if f.reach is None:
        raise ParameterError("source f must be compactly supported")
    kk = k.k
    out = np.empty(len(pts), dtype=complex)
    for i, p in enumerate(pts):
        def integrand(nodes):
            return np.exp(1j * kk * nodes.r_b) / (4.0 * np.pi * nodes.r_b) * f.evaluate(nodes.points)

        def evaluate(s: QuadratureSpec):
            nodes = two_center_nodes(np.zeros(3), p, f.reach, s.n_radial, s.n_theta, s.n_phi,
                                     s_panels=s.radial_panels)
            return complex(np.sum(nodes.weights * integrand(nodes))), len(nodes)

        out[i] = complex(refine_until(evaluate, spec, f"G0*f at |x|={np.linalg.norm(p):.3g}").value)
    return out
