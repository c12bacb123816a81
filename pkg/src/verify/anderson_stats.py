"""
随机化势远场部分 Q₂ 的 Monte Carlo 统计

    Q₂(x) = Σ_j a_j ξ_j S(x - x_j)

S 为单个鼓包的远场核，Q₂ 对符号 ξ 线性，故先组装 (点, 分量, 中心) 矩阵，
所有实现一次矩阵乘法得到。精确方差 E|Q₂(x)|² = E[ξ²] Σ_j a_j² |S(x - x_j)|² 同时给出。
"""
from typing import Optional, Sequence

import logging

import numpy as np

from ..core.exceptions import ParameterError
from ..core.fitting import fit_power_law
from ..core.geometry import as_points, cube_directions
from ..fields.anderson import draw_signs
from ..fields.helmholtz import BumpFarKernel, bump_far_kernel
from ..fields.types import AndersonPotentialSpec
from .types import AndersonDecayReport, MomentReport

logger = logging.getLogger("verify.anderson")

MIN_REALIZATIONS = 50
# 须落在中心云内部
DEFAULT_ANDERSON_RADII = (4.0, 8.0, 16.0, 32.0)

# 交叉相关检验用的相邻中心对数上限
MAX_SIGN_PAIRS = 64

_AXES = np.eye(3)


def _require(spec: AndersonPotentialSpec, n_realizations: int):
    if n_realizations < MIN_REALIZATIONS:
        raise ParameterError(f"need at least {MIN_REALIZATIONS} realizations, got {n_realizations}")
    if spec.bump is not None:
        raise ParameterError("far-part statistics are tabulated for the default bump only")


def _require_inside(spec: AndersonPotentialSpec, norms: np.ndarray, what: str):
    """|x| ≤ cloud_radius - 1；无中心时 Q₂ ≡ 0，不限制"""
    limit = spec.cloud_radius - 1.0
    if spec.n_centers and np.max(norms) > limit:
        raise ParameterError(
            f"{what} must stay inside the cloud of centers (<= {limit:g}), got {float(np.max(norms)):g}")


def far_part_operator(spec: AndersonPotentialSpec, points: np.ndarray,
                      kernel: Optional[BumpFarKernel] = None) -> np.ndarray:
    """A[p, i, j] = a_j S_i(x_p - x_j)，形状 (P, 3, J)"""
    kernel = kernel or bump_far_kernel()
    pts = as_points(points)
    d = (pts[:, None, :] - spec.centers[None, :, :]).reshape(-1, 3)
    S = kernel(d).reshape(len(pts), spec.n_centers, 3)
    return np.transpose(S * spec.amplitudes[None, :, None], (0, 2, 1))


def far_part_differential(spec: AndersonPotentialSpec, points: np.ndarray,
                          kernel: Optional[BumpFarKernel] = None) -> np.ndarray:
    """DA[p, i, k, j] = a_j ∂_k S_i(x_p - x_j)，形状 (P, 3, 3, J)"""
    kernel = kernel or bump_far_kernel()
    pts = as_points(points)
    d = (pts[:, None, :] - spec.centers[None, :, :]).reshape(-1, 3)
    DS = kernel.differential(d).reshape(len(pts), spec.n_centers, 3, 3)
    return np.transpose(DS * spec.amplitudes[None, :, None, None], (0, 2, 3, 1))


def sign_matrix(spec: AndersonPotentialSpec, n_realizations: int, seed: Optional[int] = None) -> np.ndarray:
    """第 r 列为第 r 次实现的 ξ，形状 (J, n)"""
    return np.stack([draw_signs(spec, seed, r) for r in range(n_realizations)], axis=1)


def _standardized_mean(samples: np.ndarray) -> np.ndarray:
    """沿最后一轴的 mean / (std/√n)；样本恒定时记为 0"""
    n = samples.shape[-1]
    mean = samples.mean(axis=-1)
    std = samples.std(axis=-1, ddof=1)
    safe = np.where(std > 0, std, 1.0)
    return np.where(std > 0, mean / (safe / np.sqrt(n)), 0.0)


def anderson_decay_stats(spec: AndersonPotentialSpec, n_realizations: int = 200,
                         radii: Sequence[float] = DEFAULT_ANDERSON_RADII, seed: Optional[int] = None,
                         directions: Optional[np.ndarray] = None,
                         fd_step: float = 1e-3) -> AndersonDecayReport:
    """
    E|Q₂|² 的衰减、逐实现 sup 包络指数、均值为零检验与微分界

    每个半径上对所有方向求平均后再对实现求均值与标准误；
    DQ₂ 用解析核导数，第 0 次实现另以中心差分核对
    """
    _require(spec, n_realizations)
    radii = np.asarray(radii, dtype=float)
    if len(radii) < 2 or np.any(radii <= 0):
        raise ParameterError("need at least two positive radii")
    _require_inside(spec, radii, "radii")
    seed = spec.seed if seed is None else seed
    dirs = cube_directions() if directions is None else as_points(directions)
    kernel = bump_far_kernel()
    xi = sign_matrix(spec, n_realizations, seed)
    law_second = spec.sign_law.second_moment

    n_r, n_d = len(radii), len(dirs)
    second = np.zeros(n_r)
    second_err = np.zeros(n_r)
    dispersion = np.zeros(n_r)
    sup = np.zeros((n_r, n_realizations))
    diff_ratio = np.zeros(n_r)
    z_scores = []
    fd_err = 0.0
    for i, r in enumerate(radii):
        pts = r * dirs
        A = far_part_operator(spec, pts, kernel)
        Q = (A.reshape(n_d * 3, -1) @ xi).reshape(n_d, 3, n_realizations)
        sq = np.sum(Q * Q, axis=1)
        per_real = sq.mean(axis=0)
        second[i] = per_real.mean()
        second_err[i] = per_real.std(ddof=1) / np.sqrt(n_realizations)
        dispersion[i] = law_second * float(np.mean(np.sum(A * A, axis=(1, 2))))
        sup[i] = np.sqrt(sq.max(axis=0))
        z_scores.append(_standardized_mean(Q).ravel())

        DA = far_part_differential(spec, pts, kernel)
        DQ = (DA.reshape(n_d * 9, -1) @ xi).reshape(n_d, 3, 3, n_realizations)
        shape = np.log1p(r) / (1.0 + r) ** (0.5 + spec.eps)
        diff_ratio[i] = float(np.max(np.abs(DQ))) / shape

        fd = np.empty((n_d, 3, 3))
        for k, e in enumerate(_AXES):
            plus = far_part_operator(spec, pts + fd_step * e, kernel).reshape(n_d * 3, -1) @ xi[:, 0]
            minus = far_part_operator(spec, pts - fd_step * e, kernel).reshape(n_d * 3, -1) @ xi[:, 0]
            fd[:, :, k] = ((plus - minus) / (2.0 * fd_step)).reshape(n_d, 3)
        scale = float(np.max(np.abs(DQ[..., 0])))
        if scale > 0:
            fd_err = max(fd_err, float(np.max(np.abs(fd - DQ[..., 0]))) / scale)
        logger.debug(f"|x|={r:g}: E|Q2|^2={second[i]:.4e} +- {second_err[i]:.1e}, exact={dispersion[i]:.4e}")

    z = np.concatenate(z_scores)
    envelope = np.array([fit_power_law(radii, sup[:, k]).exponent for k in range(n_realizations)])
    report = AndersonDecayReport(
        eps=spec.eps, radii=radii, directions=dirs, n_realizations=n_realizations, seed=seed,
        second_moment=second, second_moment_error=second_err, dispersion=dispersion,
        decay=fit_power_law(radii, second), dispersion_decay=fit_power_law(radii, dispersion),
        envelope_exponents=envelope,
        mean_z_max=float(np.max(np.abs(z))), mean_z_rms=float(np.sqrt(np.mean(z * z))),
        differential_ratio=diff_ratio, differential_fd_error=fd_err,
    )
    if report.defined:
        logger.info(f"anderson decay (eps={spec.eps:g}, {n_realizations} realizations): "
                    f"E|Q2|^2 exponent {report.decay.exponent:.3f} +- {report.decay.exponent_stderr:.3f} "
                    f"(target {report.target_exponent:.2f}), envelope exponent "
                    f"{report.envelope_exponent:.3f} +- {report.envelope_exponent_error:.3f}")
    else:
        logger.info("anderson decay: Q2 vanishes identically, exponents undefined")
    return report


def default_k_points(radii: Sequence[float] = DEFAULT_ANDERSON_RADII) -> np.ndarray:
    """±e_i 方向上的整数格点，每个半径 6 个"""
    faces = np.concatenate([_AXES, -_AXES])
    return np.concatenate([np.round(r) * faces for r in radii])


def moment_bound_check(spec: AndersonPotentialSpec, p: int = 2,
                       k_points: Optional[np.ndarray] = None,
                       n_realizations: int = 200, seed: Optional[int] = None) -> MomentReport:
    """
    格点 k 上 E|Q₂(k)|^{2p} 的经验值与拟合指数（目标 p(1+2ε)）

    同一 |k| 的格点先对每次实现求平均；另检验相邻中心符号乘积 ξ_j ξ_{j+1} 的均值为零
    """
    if p not in (1, 2):
        raise ParameterError(f"p must be 1 or 2, got {p}")
    _require(spec, n_realizations)
    k = default_k_points() if k_points is None else as_points(k_points)
    if not np.allclose(k, np.round(k)):
        raise ParameterError("k_points must be integer lattice points")
    _require_inside(spec, np.linalg.norm(k, axis=1), "k_points")
    seed = spec.seed if seed is None else seed
    xi = sign_matrix(spec, n_realizations, seed)

    A = far_part_operator(spec, k)
    Q = (A.reshape(len(k) * 3, -1) @ xi).reshape(len(k), 3, n_realizations)
    power = np.sum(Q * Q, axis=1) ** p

    norms = np.linalg.norm(k, axis=1)
    levels = np.unique(np.round(norms, 9))
    moments = np.zeros(len(levels))
    errors = np.zeros(len(levels))
    for i, level in enumerate(levels):
        per_real = power[np.isclose(norms, level)].mean(axis=0)
        moments[i] = per_real.mean()
        errors[i] = per_real.std(ddof=1) / np.sqrt(n_realizations)

    n_pairs = min(MAX_SIGN_PAIRS, spec.n_centers - 1)
    if n_pairs > 0:
        idx = np.linspace(0, spec.n_centers - 2, n_pairs).astype(int)
        cross = _standardized_mean(xi[idx] * xi[idx + 1])
        cross_max, cross_rms = float(np.max(np.abs(cross))), float(np.sqrt(np.mean(cross * cross)))
    else:
        cross_max = cross_rms = 0.0

    fit = fit_power_law(levels, moments)
    logger.info(f"moment check p={p}: exponent {fit.exponent:.3f} +- {fit.exponent_stderr:.3f} "
                f"(target {p * (1 + 2 * spec.eps):.2f}), sign cross-correlation rms z={cross_rms:.2f}")
    return MomentReport(
        p=p, eps=spec.eps, norms=levels, moments=moments, moment_errors=errors, fit=fit,
        cross_z_max=cross_max, cross_z_rms=cross_rms, n_realizations=n_realizations, seed=seed,
        k_points=k,
    )
