"""
Cl(k) 类的径向衰减分析

ψ(x) = e^{ik|x|}(ψ1 + ψ2)，ψ1 ~ |x|^{-1.5}（A 组），ψ2 ~ |x|^{-1}、
∇ψ2 ~ |x|^{-1.5}（B 组）。沿每条射线对 e^{-ik|x|}ψ 做两项最小二乘
α/r + β/r^{1.5}，两组分别取“去掉另一组后的残余”再做对数回归。
"""
from typing import Dict, Optional

import logging

import numpy as np

from ..core.exceptions import InsufficientDataError
from ..core.fitting import fit_power_law
from ..core.types import ComplexWavenumber
from .types import ClassClDecomposition, ResolventTable

logger = logging.getLogger("green.class_cl")

MIN_RADII = 8
MIN_OCTAVES = 3

# 低于此相对量级的分量视为零，指数报告为 NaN
_ZERO = 1e-10


def _envelope(values: np.ndarray) -> np.ndarray:
    """每个半径上所有方向的最大模"""
    return np.max(np.abs(values), axis=0)


def _exponent(radii: np.ndarray, values: np.ndarray, scale: float, name: str,
              r_squared: Dict[str, float]) -> float:
    env = _envelope(values)
    if not np.max(env) > _ZERO * scale:
        r_squared[name] = float("nan")
        return float("nan")
    fit = fit_power_law(radii, env)
    r_squared[name] = fit.r_squared
    if not fit.reliable:
        logger.warning(f"{name}: log-log fit unreliable (R²={fit.r_squared:.3f})")
    return fit.exponent


def fit_class_cl(table: ResolventTable, k: Optional[ComplexWavenumber] = None) -> ClassClDecomposition:
    """
    拟合 p1、p2 与 p2_grad

    采样半径至少 8 个且覆盖 3 个二进倍程
    """
    k = k or table.k
    radii = table.radii
    if len(radii) < MIN_RADII:
        raise InsufficientDataError("class-Cl fit needs more sample radii", required=MIN_RADII, got=len(radii))
    octaves = np.log2(radii.max() / radii.min())
    if octaves < MIN_OCTAVES - 1e-9:
        raise InsufficientDataError("class-Cl fit needs 3 dyadic octaves of radii",
                                    required=MIN_OCTAVES, got=int(np.floor(octaves)))

    psi = np.exp(-1j * k.k * radii)[None, :] * table.values
    design = np.stack([1.0 / radii, radii ** -1.5], axis=1).astype(complex)
    coeffs, *_ = np.linalg.lstsq(design, psi.T, rcond=None)
    alpha, beta = coeffs[0], coeffs[1]

    psi1 = psi - alpha[:, None] / radii[None, :]
    psi2 = psi - beta[:, None] * radii[None, :] ** -1.5
    grad2 = np.gradient(psi2, radii, axis=1)

    scale = float(np.max(np.abs(psi))) if psi.size else 0.0
    r_squared: Dict[str, float] = {}
    p1 = _exponent(radii, psi1, scale, "p1", r_squared)
    p2 = _exponent(radii, psi2, scale, "p2", r_squared)
    p2_grad = _exponent(radii, grad2, scale / radii.min(), "p2_grad", r_squared)
    logger.info(f"class-Cl fit: p1={p1:.3f}, p2={p2:.3f}, p2_grad={p2_grad:.3f}")
    return ClassClDecomposition(k=k, radii=radii, p1=p1, p2=p2, p2_grad=p2_grad,
                                r_squared=r_squared, alpha=alpha, beta=beta)
