"""
截断预解式的增长估计

Q = χ_R Q + (1 - χ_R) Q，R = [δ³/(2 C_cal)]^{-2/ε}。
只对远场部分 Q2 做 Born 级数；A(δ) 取最大倍程 [r_max/2, r_max]
上 |x| e^{δ|x|} |u(x)| 的最大值。
"""
from typing import List, Optional, Sequence, Tuple

import logging

import numpy as np

from ..core.exceptions import ParameterError
from ..core.fitting import linear_fit
from ..core.geometry import cube_directions
from ..core.types import ComplexWavenumber
from ..fields.cutoff import split_field
from ..fields.types import FieldSpec
from .born import DEFAULT_C_CAL, solve_resolvent
from .operator import support_radius
from .types import BornSettings, GrowthEstimate, ResolventTable

logger = logging.getLogger("green.growth")

DEFAULT_RADII = np.geomspace(1.5, 24.0, 13)


def cutoff_radius(delta: float, eps: float, C_cal: float) -> float:
    """R = [δ³/(2 C_cal)]^{-2/ε}"""
    if not delta > 0 or not eps > 0 or not C_cal > 0:
        raise ParameterError(f"need delta, eps, C_cal > 0, got ({delta}, {eps}, {C_cal})")
    return float((delta ** 3 / (2.0 * C_cal)) ** (-2.0 / eps))


def octave_sup(table: ResolventTable) -> Tuple[float, List[float]]:
    """最大倍程上的 |x| e^{δ|x|} |u| 最大值"""
    r = table.radii
    r_max = float(r.max())
    mask = r >= 0.5 * r_max - 1e-12
    weight = r[mask] * np.exp(table.k.delta * r[mask])
    value = float(np.max(np.abs(table.values[:, mask]) * weight[None, :]))
    return value, [0.5 * r_max, r_max]


def cutoff_resolvent_growth(Q: FieldSpec, f: FieldSpec, delta: float, eps: float,
                            C_cal: float = DEFAULT_C_CAL, tau: float = 1.0,
                            radii: Optional[Sequence[float]] = None,
                            directions: Optional[np.ndarray] = None,
                            tol: float = 1e-8, n_max: int = 30,
                            settings: Optional[BornSettings] = None) -> GrowthEstimate:
    """单个 δ 的 A(δ)；级数发散时 DivergenceError 向上传递"""
    R = cutoff_radius(delta, eps, C_cal)
    k = ComplexWavenumber(tau, delta)
    radii = DEFAULT_RADII if radii is None else np.asarray(radii, dtype=float)
    directions = cube_directions() if directions is None else directions
    settings = settings or BornSettings()

    Q2 = split_field(Q, R).Q2
    if not Q2.is_zero and R >= support_radius(Q2, k, settings.truncation_tol):
        # 远场部分整个落在阻尼截断半径之外
        logger.info(f"delta={delta}: cutoff R={R:.3g} beyond the damping truncation, V2 treated as zero")
        Q2 = FieldSpec.zero()

    free = solve_resolvent(k, FieldSpec.zero(), f, directions, radii)
    free_A, octave = octave_sup(free)
    if Q2.is_zero:
        table = free
    else:
        table = solve_resolvent(k, Q2, f, directions, radii, tol, n_max, settings, C_cal=C_cal)
    A, octave = octave_sup(table)
    logger.info(f"delta={delta}: R={R:.4g}, A={A:.6g} (free {free_A:.6g}), orders={table.n_orders}")
    return GrowthEstimate(delta=delta, A_delta=A, R_used=R, octave=octave,
                          free_A=free_A, n_orders=table.n_orders)


def fit_growth_exponent(estimates: Sequence[GrowthEstimate]) -> float:
    """
    ln A(δ) ≈ c δ^{-γ}：对 ln ln A 关于 ln δ 做回归，γ = -斜率

    需要至少两个 A > 1 的点，否则为 NaN
    """
    usable = [e for e in estimates if e.A_delta > 1.0]
    if len(usable) < 2:
        logger.warning("growth exponent needs at least two estimates with A > 1")
        return float("nan")
    x = np.log([e.delta for e in usable])
    y = np.log(np.log([e.A_delta for e in usable]))
    return float(-linear_fit(x, y).slope)


def is_nondecreasing(estimates: Sequence[GrowthEstimate], rtol: float = 1e-6) -> bool:
    """δ 递减时 A(δ) 是否不减"""
    ordered = sorted(estimates, key=lambda e: -e.delta)
    return all(b.A_delta >= a.A_delta * (1.0 - rtol) for a, b in zip(ordered, ordered[1:]))


def growth_sweep(Q: FieldSpec, f: FieldSpec, deltas: Sequence[float], eps: float,
                 C_cal: float = DEFAULT_C_CAL, **kwargs) -> Tuple[List[GrowthEstimate], float]:
    """δ 扫描；单调性只报告，不作断言"""
    estimates = [cutoff_resolvent_growth(Q, f, d, eps, C_cal, **kwargs) for d in deltas]
    gamma = fit_growth_exponent(estimates)
    for e in estimates:
        e.gamma_fit = gamma
    if not is_nondecreasing(estimates):
        logger.warning("A(delta) is not nondecreasing as delta decreases on this sweep")
    return estimates, gamma
