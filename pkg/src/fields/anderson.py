"""
随机化 (Anderson 型) 势

V(x) = Σ_j a_j ξ_j φ(x - x_j)，中心取 3Z³ 与球的交，
符号 ξ_j 由计数器型随机流 (seed, realization) 生成，与求值顺序无关
"""
import csv
import os
from pathlib import Path
from typing import Optional, Union

import logging

import numpy as np
from scipy.spatial import cKDTree

from ..core.random import stream
from ..core.serialization import format_float
from .examples import BUMP_MAX, build_bump_potential
from .exceptions import SpecError
from .types import AndersonPotentialSpec, DecayEnvelope, FieldKind, FieldSpec, SignLaw

logger = logging.getLogger("fields.anderson")

LATTICE_SPACING = 3.0


def lattice_centers(ball_radius: float, spacing: float = LATTICE_SPACING) -> np.ndarray:
    """spacing·Z³ ∩ B(0, ball_radius)，按 (i, j, k) 字典序"""
    if spacing <= 2.0:
        raise SpecError(f"lattice spacing must exceed 2 to keep bumps disjoint, got {spacing}")
    n = int(np.floor(ball_radius / spacing))
    axis = spacing * np.arange(-n, n + 1, dtype=float)
    grid = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)
    return grid[np.linalg.norm(grid, axis=1) <= ball_radius]


def default_anderson_spec(eps: float = 0.25, ball_radius: float = 48.0, scale: float = 1.0,
                          sign_law: SignLaw = SignLaw.RADEMACHER, seed: int = 0,
                          spacing: float = LATTICE_SPACING) -> AndersonPotentialSpec:
    """a_j = scale·(1 + |x_j|)^{-0.5-ε}"""
    centers = lattice_centers(ball_radius, spacing)
    amplitudes = scale * (1.0 + np.linalg.norm(centers, axis=1)) ** (-0.5 - eps)
    return AndersonPotentialSpec(centers=centers, amplitudes=amplitudes, eps=eps,
                                 sign_law=SignLaw(sign_law), seed=seed)


def draw_signs(spec: AndersonPotentialSpec, seed: Optional[int] = None, realization: int = 0) -> np.ndarray:
    """第 realization 次实现的符号 ξ_j，流内下标即中心编号 j"""
    seed = spec.seed if seed is None else seed
    rng = stream(seed, realization)
    if spec.sign_law is SignLaw.RADEMACHER:
        return 2.0 * rng.integers(0, 2, size=spec.n_centers).astype(float) - 1.0
    return rng.uniform(-1.0, 1.0, size=spec.n_centers)


def anderson_envelope(spec: AndersonPotentialSpec) -> DecayEnvelope:
    """
    |V(x)| ≤ m/(1 + |x|^{0.5+ε})

    支撑内 |x| ≤ |x_j| + 1，取 m = max_j a_j sup|φ| (1 + (|x_j|+1)^{0.5+ε})
    """
    if spec.n_centers == 0:
        return DecayEnvelope(0.0, spec.eps)
    bump_sup = spec.bump.envelope.m if spec.bump is not None else BUMP_MAX
    norms = np.linalg.norm(spec.centers, axis=1)
    m = float(np.max(spec.amplitudes * bump_sup * (1.0 + (norms + 1.0) ** (0.5 + spec.eps))))
    return DecayEnvelope(m, spec.eps)


def sample_anderson(spec: AndersonPotentialSpec, seed: Optional[int] = None,
                    realization: int = 0) -> FieldSpec:
    """一次实现的势 V，标量场"""
    signs = draw_signs(spec, seed, realization)
    coeff = spec.amplitudes * signs
    bump = spec.bump or build_bump_potential(1.0)
    centers = spec.centers
    tree = cKDTree(centers) if spec.n_centers else None

    def evaluate(p):
        out = np.zeros(len(p))
        if tree is None:
            return out
        dist, idx = tree.query(p, k=1, distance_upper_bound=1.0)
        hit = np.isfinite(dist)
        if np.any(hit):
            j = idx[hit]
            out[hit] = coeff[j] * bump.evaluate(p[hit] - centers[j])
        return out

    reach = float(np.linalg.norm(centers, axis=1).max() + 1.0) if spec.n_centers else 0.0
    return FieldSpec(
        kind=FieldKind.SCALAR, evaluate=evaluate, envelope=anderson_envelope(spec),
        support_radius=reach, is_zero=not np.any(coeff), name="anderson",
        params={
            'seed': spec.seed if seed is None else seed,
            'realization': realization,
            'n_centers': spec.n_centers,
            'signs': signs,
        },
    )


def export_anderson_csv(spec: AndersonPotentialSpec, path: Union[str, Path],
                        seed: Optional[int] = None, realization: int = 0) -> Path:
    """一行一个中心：x1, x2, x3, amplitude, sign"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    signs = draw_signs(spec, seed, realization)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["x1", "x2", "x3", "amplitude", "sign"])
        for c, a, s in zip(spec.centers, spec.amplitudes, signs):
            writer.writerow([format_float(c[0]), format_float(c[1]), format_float(c[2]),
                             format_float(a), format_float(s)])
    os.replace(tmp, path)
    logger.info(f"exported {spec.n_centers} centers to {path}")
    return path
