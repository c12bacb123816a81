"""
两个辅助积分估计的数值扫描

球面估计（ρ 为球面半径，ζ 为 x 与 y 的夹角）：

    ∫_{|y|=ρ} e^{-δ(|x-y|+|y|)}      dτ  <  C δ^{-1}   ρ     e^{-δ|x|}
    ∫_{|y|=ρ} e^{-δ(|x-y|+|y|)} ζ    dτ  <  C δ^{-1.5} ρ^0.5 e^{-δ|x|}
    ∫_{|y|=ρ} e^{-δ(|x-y|+|y|)} ζ²   dτ  <  C δ^{-2}         e^{-δ|x|}

Υ 上的体积估计：

    ∫_Υ e^{-δ(|x-y|+|y|)} dy  ≤  C δ^{-3} e^{-γδ|x|},  γ > 1
"""
from typing import Optional, Sequence

import logging

import numpy as np

from ..core.exceptions import ParameterError
from ..core.geometry import angles_between
from ..quadrature.ball import exterior_truncation_radius
from ..quadrature.rules import composite_gauss, panel_edges, refine_until, sphere_rule
from ..quadrature.types import QuadratureResult, QuadratureSpec
from .regression import cumulative_growth, fit_lemma2
from .types import BoundSweepReport

logger = logging.getLogger("verify.lemmas")

DEFAULT_DELTAS = (0.2, 0.35, 0.5, 1.0)
DEFAULT_XS = (4.0, 8.0, 16.0)
DEFAULT_RHOS = (1.5, 2.5)

# δ 的允许范围 (0, DELTA_MAX]
DELTA_MAX = 4.0

LEMMA1_BOUNDS = ['sphere', 'zeta', 'zeta2']

# 被积函数绕 x 轴对称，φ 方向取最少节点
LEMMA1_SPEC = QuadratureSpec(n_theta=32, n_phi=4, max_refine=3, tol=1e-9, atol=1e-14)

# 只用 n_radial
LEMMA2_SPEC = QuadratureSpec(n_theta=4, n_phi=4, n_radial=16, max_refine=3, tol=1e-9, atol=0.0)

_AXIS = np.array([0.0, 0.0, 1.0])


def _check_delta(delta: float):
    if not 0.0 < delta <= DELTA_MAX:
        raise ParameterError(f"delta must lie in (0, {DELTA_MAX}], got {delta}")


def lemma1_shapes(delta: float, rho: float) -> np.ndarray:
    """三个界去掉 e^{-δ|x|} 后的形状"""
    return np.array([rho / delta, delta ** -1.5 * np.sqrt(rho), delta ** -2.0])


def lemma1_integrals(delta: float, rho: float, x_norm: float,
                     spec: Optional[QuadratureSpec] = None) -> QuadratureResult:
    """
    e^{δ|x|} 乘以三个球面积分（权 1、ζ、ζ²）

    极轴对准 x，被积函数集中在 ζ 小的区域
    """
    spec = spec or LEMMA1_SPEC
    x = x_norm * _AXIS

    def evaluate(s: QuadratureSpec):
        dirs, w = sphere_rule(s.n_theta, s.n_phi, _AXIS)
        y = rho * dirs
        damp = np.exp(-delta * (np.linalg.norm(x - y, axis=1) + rho - x_norm))
        zeta = angles_between(y, x)
        values = rho * rho * np.array([np.sum(w * damp), np.sum(w * damp * zeta),
                                       np.sum(w * damp * zeta * zeta)])
        return values, len(w)

    return refine_until(evaluate, spec, f"lemma 1 integrals (delta={delta}, rho={rho}, |x|={x_norm})")


def sphere_damping_exact(delta: float, rho: float, x_norm: float) -> float:
    """
    无权球面积分的闭式

        (2πρ/|x|) e^{-δρ} [F(|x|-ρ) - F(|x|+ρ)],  F(s) = e^{-δs}(s/δ + 1/δ²)
    """
    def F(s):
        return np.exp(-delta * s) * (s / delta + 1.0 / delta ** 2)

    return float(2.0 * np.pi * rho / x_norm * np.exp(-delta * rho) * (F(x_norm - rho) - F(x_norm + rho)))


def lemma1_sweep(delta_grid: Sequence[float] = DEFAULT_DELTAS,
                 rho_grid: Sequence[float] = DEFAULT_RHOS,
                 x_grid: Sequence[float] = DEFAULT_XS,
                 spec: Optional[QuadratureSpec] = None,
                 tolerance_factor: float = 2.0) -> BoundSweepReport:
    """
    在 δ × ρ × |x| 网格上计算三个球面积分与界形状之比

    每个组合须满足 1 < ρ < 2|x|/3。通过条件：比值全部有限且为正，
    且累积常数 C(X) = max{比值 : |x| ≤ X} 在相邻 |x| 间增长不超过 tolerance_factor 倍
    """
    triples = [(d, r, x) for d in delta_grid for r in rho_grid for x in x_grid]
    if not triples:
        raise ParameterError("lemma 1 sweep needs a nonempty grid")
    for d, r, x in triples:
        _check_delta(d)
        if not 1.0 < r < 2.0 * x / 3.0:
            raise ParameterError(f"lemma 1 requires 1 < rho < 2|x|/3, got rho={r}, |x|={x}")

    lhs, shapes = [], []
    for d, r, x in triples:
        damping = np.exp(-d * x)
        scaled = np.asarray(lemma1_integrals(d, r, x, spec).value, dtype=float)
        lhs.append(scaled * damping)
        shapes.append(lemma1_shapes(d, r) * damping)
    lhs = np.array(lhs)
    shapes = np.array(shapes)
    deltas, rhos, xs = (np.array(col, dtype=float) for col in zip(*triples))

    ratios = lhs / shapes
    constants = np.max(ratios, axis=0)
    growth = np.array([cumulative_growth(xs, ratios[:, b]) for b in range(len(LEMMA1_BOUNDS))])
    passed = bool(np.all(np.isfinite(ratios)) and np.all(ratios > 0)
                  and np.all(growth <= tolerance_factor))
    logger.info(f"lemma 1 sweep over {len(triples)} triples: constants={np.round(constants, 4).tolist()}, "
                f"growth={np.round(growth, 3).tolist()}, passed={passed}")
    return BoundSweepReport(
        name="lemma1", bounds=list(LEMMA1_BOUNDS), deltas=deltas, xs=xs, rhos=rhos,
        lhs=lhs, shapes=shapes, constants=constants, growth=growth,
        tolerance_factor=tolerance_factor, passed=passed,
    )


def upsilon_integral(delta: float, x_norm: float, spec: Optional[QuadratureSpec] = None,
                     tail_tol: float = 1e-10) -> QuadratureResult:
    """
    ∫_Υ e^{-δ(|x-y|+|y|)} dy

    绕 x 轴对称，半径 r = |y| 的球面上对 s = |x-y| 积分有闭式：

        2π r/|x| · e^{-δr} ∫_{s_lo}^{r+|x|} s e^{-δs} ds,  s_lo = max(|r-|x||, 2|x|/3)

    径向在 [2|x|/3, R*] 上分段 Gauss-Legendre，5|x|/3 处 s_lo 换支。
    截断用 e^{-δ(|x-y|+|y|)} ≤ e^{δ|x|} e^{-2δ|y|}，尾部相对 δ^{-3}e^{-4δ|x|/3} 小于 tail_tol
    """
    spec = spec or LEMMA2_SPEC
    r0 = 2.0 * x_norm / 3.0
    scale = delta ** -3 * np.exp(-4.0 * delta * x_norm / 3.0)
    radius = max(exterior_truncation_radius(2.0 * delta, bound=np.exp(delta * x_norm), tol=tail_tol * scale),
                 2.0 * x_norm)
    panels = max(4, int(np.ceil(delta * (radius - r0))))
    edges = panel_edges(r0, radius, panels, breaks=(5.0 * x_norm / 3.0,))

    def F(s):
        return np.exp(-delta * s) * (s / delta + 1.0 / delta ** 2)

    def evaluate(s: QuadratureSpec):
        r, w = composite_gauss(s.n_radial, edges)
        s_lo = np.maximum(np.abs(r - x_norm), r0)
        inner = F(s_lo) - F(r + x_norm)
        return complex(np.sum(w * 2.0 * np.pi * r / x_norm * np.exp(-delta * r) * inner)), len(r)

    result = refine_until(evaluate, spec, f"upsilon integral (delta={delta}, |x|={x_norm})")
    result.truncation_radius = radius
    return result


def lemma2_sweep(delta_grid: Sequence[float] = DEFAULT_DELTAS,
                 x_grid: Sequence[float] = DEFAULT_XS,
                 spec: Optional[QuadratureSpec] = None,
                 tolerance_factor: float = 2.0) -> BoundSweepReport:
    """
    Υ 上积分的 (C, γ) 联合拟合：ln LHS = ln C - 3 ln δ - γδ|x|

    通过条件：拟合的 γ > 1 且比值有限
    """
    pairs = [(d, x) for d in delta_grid for x in x_grid]
    if not pairs:
        raise ParameterError("lemma 2 sweep needs a nonempty grid")
    for d, x in pairs:
        _check_delta(d)
        if not x > 1.0:
            raise ParameterError(f"lemma 2 requires |x| > 1, got {x}")

    deltas, xs = (np.array(col, dtype=float) for col in zip(*pairs))
    lhs = np.array([upsilon_integral(d, x, spec).real for d, x in pairs])
    C, gamma, fit = fit_lemma2(deltas, xs, lhs)
    shapes = deltas ** -3 * np.exp(-gamma * deltas * xs)
    ratios = lhs / shapes
    passed = bool(gamma > 1.0 and np.all(np.isfinite(ratios)))
    logger.info(f"lemma 2 sweep over {len(pairs)} pairs: gamma={gamma:.4f} "
                f"(stderr {fit.slope_stderr:.2e}, R^2={fit.r_squared:.4f}), C={C:.4g}, passed={passed}")
    return BoundSweepReport(
        name="lemma2", bounds=['upsilon'], deltas=deltas, xs=xs, rhos=None,
        lhs=lhs[:, None], shapes=shapes[:, None], constants=np.array([np.max(ratios)]),
        growth=np.array([cumulative_growth(xs, ratios)]),
        exponent=gamma, exponent_stderr=fit.slope_stderr, r_squared=fit.r_squared,
        tolerance_factor=tolerance_factor, passed=passed,
    )
