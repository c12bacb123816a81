"""
球面积分
"""
from typing import Callable, Optional

import logging

import numpy as np

from ..core.exceptions import ParameterError
from ..core.types import ORIGIN, Point3
from .rules import refine_until, sphere_rule
from .types import QuadratureResult, QuadratureSpec

logger = logging.getLogger("quadrature.sphere")


def integrate_sphere(f: Callable[[np.ndarray], np.ndarray], rho: float,
                     spec: Optional[QuadratureSpec] = None,
                     center: Point3 = ORIGIN,
                     axis: Optional[np.ndarray] = None) -> QuadratureResult:
    """
    ∫_{|y - center| = ρ} f(y) dτ_y

    f 接受 (N, 3) 点数组返回 (N,) 数值；axis 为极轴方向，
    被积函数在某点附近集中时应把极轴对准它
    """
    if not rho > 0:
        raise ParameterError(f"sphere radius must be positive, got {rho}")
    spec = spec or QuadratureSpec()
    c = center.as_array()

    def evaluate(s: QuadratureSpec):
        dirs, w = sphere_rule(s.n_theta, s.n_phi, axis)
        values = np.asarray(f(c + rho * dirs))
        return complex(np.sum(w * values) * rho * rho), len(w)

    result = refine_until(evaluate, spec, f"sphere integral (rho={rho})")
    logger.debug(f"sphere rho={rho}: value={result.value:.6e}, err={result.error:.1e}, nodes={result.n_nodes}")
    return result
