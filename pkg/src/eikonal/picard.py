"""
相位修正的 Picard 迭代

    μ₀ = 0,   μ_{n+1} = -GV + G[|∇μ_n|²]

μ 保存在 |x| ∈ [r_min, r_max] 的球壳网格上，∇ 用插值函数的中心差分。
|x| < r_min 时 μ 无网格值，|∇μ|² 在 [taper_inner, r_min] 上乘五次 smoothstep 接到零。
"""
from typing import Callable, Optional

import logging

import numpy as np

from ..core.exceptions import ParameterError
from ..fields.cutoff import smoothstep
from ..fields.types import FieldKind, FieldSpec
from ..quadrature.shells import ShellField
from .exceptions import ContractionError
from .operator import apply_G_many
from .types import EikonalSettings, PhaseCorrection

logger = logging.getLogger("eikonal.picard")

# 收缩区间下限
MIN_K = 5.0

_AXES = np.eye(3)


def central_gradient(fn: Callable[[np.ndarray], np.ndarray], points: np.ndarray, h: float) -> np.ndarray:
    """∇fn 的中心差分，形状 (N, 3)"""
    grad = np.empty((len(points), 3))
    for i, e in enumerate(_AXES):
        grad[:, i] = (fn(points + h * e) - fn(points - h * e)) / (2.0 * h)
    return grad


def gradient_energy(mu: ShellField, settings: EikonalSettings) -> Callable[[np.ndarray], np.ndarray]:
    """y ↦ taper(|y|)·|∇μ(y)|²"""
    width = settings.r_min - settings.taper_inner

    def energy(points: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(points, axis=1)
        taper = smoothstep((r - settings.taper_inner) / width)
        out = np.zeros(len(points))
        live = taper > 0
        if np.any(live):
            g = central_gradient(mu, points[live], settings.fd_step)
            out[live] = taper[live] * np.sum(g * g, axis=1)
        return out

    return energy


def picard_iterate_mu(V: FieldSpec, k: float, n_iter: int = 3,
                      settings: Optional[EikonalSettings] = None,
                      tol: float = 0.0) -> PhaseCorrection:
    """
    迭代 n_iter 步，记录每步的 ‖μ_{n+1} - μ_n‖_∞

    相邻差连续 growth_window 步增大时抛 ContractionError（partial 为当前结果）；
    tol > 0 时差值低于 tol·‖μ₁‖ 提前结束
    """
    if V.kind is not FieldKind.SCALAR:
        raise ParameterError("Picard iteration expects a scalar potential V")
    if not k >= MIN_K:
        raise ParameterError(f"Picard iteration needs k >= {MIN_K}, got {k}")
    if n_iter < 1:
        raise ParameterError(f"n_iter must be >= 1, got {n_iter}")
    settings = settings or EikonalSettings()
    grid = settings.grid()
    nodes = grid.points
    spec = settings.quadrature

    mu = PhaseCorrection(k=k, grid=grid, values=np.zeros(grid.shape), history=[np.zeros(grid.shape)])
    if V.is_zero:
        for n in range(1, n_iter + 1):
            mu.history.append(np.zeros(grid.shape))
            mu.diff_norms.append(0.0)
        mu.iteration = n_iter
        mu.converged = True
        return mu

    # -GV 与迭代无关
    minus_GV = -apply_G_many(k, V, nodes, spec).reshape(grid.shape)
    window = settings.growth_window
    for n in range(1, n_iter + 1):
        if n == 1:
            values = minus_GV
        else:
            values = minus_GV + apply_G_many(k, gradient_energy(mu.shell_field, settings),
                                             nodes, spec).reshape(grid.shape)
        diff = float(np.max(np.abs(values - mu.values)))
        mu.values = values
        mu.iteration = n
        mu.history.append(values.copy())
        mu.diff_norms.append(diff)
        logger.info(f"Picard step {n} (k={k:g}): |mu_n - mu_(n-1)| = {diff:.3e}")

        recent = mu.diff_norms[-(window + 1):]
        if len(recent) == window + 1 and all(b > a for a, b in zip(recent, recent[1:])):
            raise ContractionError(
                f"Picard differences grew over {window} consecutive steps at k={k:g}",
                norms=mu.diff_norms, partial=mu,
            )
        if tol > 0 and diff <= tol * mu.diff_norms[0]:
            mu.converged = True
            break
    return mu
