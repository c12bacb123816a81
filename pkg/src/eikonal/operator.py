"""
算子 G

    (Gf)(x) = |x| e^{k|x|} ∫ e^{-k(|x-y| + |y|)} / (4π|x-y||y|) f(y) dy

以 0 和 x 为双中心，s = |y| + |x-y| ≥ |x|，前因子化为 |x| e^{-k(s - |x|)} ≤ |x|，
两个库仑奇性由双中心雅可比抵消。
"""
from typing import Callable, Optional, Union

import logging

import numpy as np

from ..core.exceptions import DomainError, ParameterError
from ..core.geometry import as_points
from ..core.types import Point3
from ..fields.types import FieldSpec
from ..quadrature.rules import refine_until
from ..quadrature.two_center import TwoCenterNodes, two_center_nodes
from ..quadrature.types import QuadratureResult, QuadratureSpec

logger = logging.getLogger("eikonal.operator")

# n_theta 对应 t，n_radial 对应 s
DEFAULT_SPEC = QuadratureSpec(n_theta=12, n_phi=8, n_radial=16, radial_panels=3,
                              max_refine=3, tol=1e-9, atol=1e-14)

# e^{-k(s - |x|)} 的截断：s - |x| ≤ DAMPING_DEPTH / k
DAMPING_DEPTH = 40.0

RealMap = Callable[[np.ndarray], np.ndarray]
Source = Union[FieldSpec, RealMap]


def _require_k(k: float) -> float:
    k = float(k)
    if not k > 0:
        raise ParameterError(f"G needs k > 0, got {k}")
    return k


def integration_radius(f: Source, k: float, x_norm: float) -> float:
    """|y| < R 覆盖 s - |x| ≤ DAMPING_DEPTH/k；f 有支撑时取二者较小者"""
    R = x_norm + 0.5 * DAMPING_DEPTH / k
    reach = f.reach if isinstance(f, FieldSpec) else None
    return min(R, reach) if reach is not None else R


def damping_prefactor(nodes: TwoCenterNodes, x_norm: float, k: float) -> np.ndarray:
    """|x| e^{k|x|} e^{-k(|x-y| + |y|)}"""
    return x_norm * np.exp(-k * (nodes.r_a + nodes.r_b - x_norm))


def apply_G_result(k: float, f: Source, x: Point3, spec: Optional[QuadratureSpec] = None,
                   radius: Optional[float] = None) -> QuadratureResult:
    """(Gf)(x) 及其求积误差估计"""
    k = _require_k(k)
    if x.norm <= 1.0:
        raise DomainError(f"G is evaluated for |x| > 1, got |x|={x.norm:.3g}")
    spec = spec or DEFAULT_SPEC
    if isinstance(f, FieldSpec) and f.is_zero:
        return QuadratureResult(value=0.0, error=0.0, n_nodes=0)

    xa = x.as_array()
    c = x.norm
    R = radius if radius is not None else integration_radius(f, k, c)

    def evaluate(s: QuadratureSpec):
        nodes = two_center_nodes(np.zeros(3), xa, R, s.n_radial, s.n_theta, s.n_phi,
                                 damping=k, s_panels=s.radial_panels)
        kernel = damping_prefactor(nodes, c, k) / (4.0 * np.pi * nodes.r_a * nodes.r_b)
        return float(np.sum(nodes.weights * kernel * np.asarray(f(nodes.points)))), len(nodes)

    result = refine_until(evaluate, spec, f"G at |x|={c:.3g}")
    result.truncation_radius = R
    return result


def apply_G(k: float, f: Source, x: Point3, spec: Optional[QuadratureSpec] = None,
            radius: Optional[float] = None) -> float:
    """(Gf)(x)"""
    return float(np.real(apply_G_result(k, f, x, spec, radius).value))


def apply_G_many(k: float, f: Source, targets: np.ndarray,
                 spec: Optional[QuadratureSpec] = None) -> np.ndarray:
    """在一批目标点上求 (Gf)，各点独立"""
    pts = as_points(targets)
    if isinstance(f, FieldSpec) and f.is_zero:
        return np.zeros(len(pts))
    out = np.array([apply_G(k, f, Point3.from_array(p), spec) for p in pts])
    logger.debug(f"G on {len(pts)} targets: max |Gf| = {np.max(np.abs(out)):.3e}")
    return out
