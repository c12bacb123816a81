"""
三角形上的调和测度

walk-on-spheres：每个粒子反复跳到以当前位置为心、内切于 T 的最大圆周上的均匀点，
直到离边界不足 snap；落点按弧长分箱。粒子按 1024 个一组向量化，
第 b 组使用随机流 stream(seed, b)，结果只依赖 (seed, n_walkers, bins)。
"""
from typing import Optional, Tuple

import logging

import numpy as np

from ..core.exceptions import DomainError, InsufficientDataError, ParameterError
from ..core.random import stream
from .types import HarmonicMeasureEstimate, TriangleDomain

logger = logging.getLogger("scattering.harmonic")

BLOCK_SIZE = 1024
DEFAULT_BINS = 64


def _walk_block(T: TriangleDomain, k0: complex, n: int, rng: np.random.Generator,
                snap: float, max_steps: int) -> Tuple[np.ndarray, np.ndarray]:
    """一组粒子走到边界；返回 (落点, 是否到达)"""
    z = np.full(n, k0, dtype=complex)
    active = np.ones(n, dtype=bool)
    for _ in range(max_steps):
        idx = np.flatnonzero(active)
        if len(idx) == 0:
            break
        d = T.distance_to_boundary(z[idx])
        hit = d <= snap
        active[idx[hit]] = False
        move = idx[~hit]
        angle = rng.uniform(0.0, 2.0 * np.pi, size=len(move))
        z[move] += d[~hit] * np.exp(1j * angle)
    return z, ~active


def harmonic_measure(T: TriangleDomain, k0: complex, n_walkers: int = 100_000, seed: int = 0,
                     bins_per_edge: int = DEFAULT_BINS, snap: Optional[float] = None,
                     max_steps: int = 10_000) -> HarmonicMeasureEstimate:
    """ω(k0, ·) 的分箱估计"""
    k0 = complex(k0)
    if not T.contains(k0):
        raise DomainError(f"k0={k0} is not strictly inside the triangle")
    if n_walkers < 1 or bins_per_edge < 1:
        raise ParameterError(f"need n_walkers >= 1 and bins_per_edge >= 1, got ({n_walkers}, {bins_per_edge})")
    snap = 1e-4 * T.diameter if snap is None else snap
    lengths = T.edge_lengths

    counts = np.zeros(3 * bins_per_edge, dtype=np.int64)
    n_stalled = 0
    for block, start in enumerate(range(0, n_walkers, BLOCK_SIZE)):
        n = min(BLOCK_SIZE, n_walkers - start)
        z, arrived = _walk_block(T, k0, n, stream(seed, block), snap, max_steps)
        n_stalled += int(np.count_nonzero(~arrived))
        _, edge, along = T.project(z[arrived])
        b = np.minimum((along / lengths[edge] * bins_per_edge).astype(int), bins_per_edge - 1)
        counts += np.bincount(edge * bins_per_edge + b, minlength=3 * bins_per_edge)

    if n_stalled:
        logger.warning(f"{n_stalled} of {n_walkers} walkers did not reach the boundary in {max_steps} steps")
    estimate = HarmonicMeasureEstimate(domain=T, k0=k0, bins_per_edge=bins_per_edge, counts=counts,
                                       n_walkers=n_walkers, seed=seed, n_stalled=n_stalled)
    logger.info(f"harmonic measure from k0={k0:.4g}: edges={np.round(estimate.edge_masses(), 4).tolist()}, "
                f"total={estimate.total_mass:.5f}")
    return estimate


def endpoint_exponent(estimate: HarmonicMeasureEstimate, min_count: int = 10,
                      max_fraction: float = 0.25) -> Tuple[float, float]:
    """
    s1 附近 ω 密度的幂次

    取 s1 两侧（底边与 I2）距 s1 不超过 max_fraction·边长、计数 ≥ min_count 的箱，
    加权拟合 ln ρ = a + p ln d + b d，权重为计数。返回 (p, p 的标准误差)
    """
    T = estimate.domain
    n = estimate.bins_per_edge
    centers = (np.arange(n) + 0.5) / n
    counts = estimate.counts.reshape(3, n)
    density = estimate.density.reshape(3, n)

    # 底边从 s1 出发；I2 终止于 s1
    d = np.concatenate([centers * T.edge_lengths[0], (1.0 - centers) * T.edge_lengths[2]])
    c = np.concatenate([counts[0], counts[2]])
    rho = np.concatenate([density[0], density[2]])
    limit = max_fraction * np.concatenate([np.full(n, T.edge_lengths[0]), np.full(n, T.edge_lengths[2])])
    mask = (c >= min_count) & (d <= limit)
    if np.count_nonzero(mask) < 4:
        raise InsufficientDataError("endpoint fit needs at least 4 populated bins near s1",
                                    required=4, got=int(np.count_nonzero(mask)))

    d, c, rho = d[mask], c[mask].astype(float), rho[mask]
    X = np.column_stack([np.ones_like(d), np.log(d), d])
    w = np.sqrt(c)
    coef, _, _, _ = np.linalg.lstsq(X * w[:, None], np.log(rho) * w, rcond=None)
    resid = (np.log(rho) - X @ coef) * w
    dof = max(len(d) - 3, 1)
    cov = np.linalg.pinv((X * c[:, None]).T @ X) * float(resid @ resid) / dof
    p, stderr = float(coef[1]), float(np.sqrt(max(cov[1, 1], 0.0)))
    logger.debug(f"endpoint exponent near s1: p={p:.3f} ± {stderr:.3f} from {len(d)} bins")
    return p, stderr
