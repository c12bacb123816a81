"""
常用场的构造

- 光滑鼓包 φ(r) = exp(-1/(1-r²))，r < 1
- 鼓包向量场 Q = a(x-c)φ(|x-c|)，解析散度 a(3φ + rφ')
- 高斯势及其梯度场
- 例 1：Q = (-cos x1 (1+|x|²)^{-γ}, 0, 0) 与短程余项 V2
- 例 2：鼓包向量场的平移叠加
- 正性势 V = γ div Q + |Q|²
- 单位球示性函数源项
"""
from typing import Optional, Sequence, Tuple

import logging

import numpy as np
from scipy.integrate import quad
from scipy.spatial import cKDTree

from ..core.exceptions import ParameterError
from ..core.types import ORIGIN, Point3
from .exceptions import SpecError
from .types import DecayEnvelope, FieldKind, FieldSpec

logger = logging.getLogger("fields.examples")

# sup φ = φ(0)
BUMP_MAX = float(np.exp(-1.0))

# e^{-r²} < 1e-16 的半径
_GAUSSIAN_REACH = float(np.sqrt(16.0 * np.log(10.0)))


def smooth_bump(r: np.ndarray) -> np.ndarray:
    """φ(r) = exp(-1/(1-r²))，r ≥ 1 时为 0"""
    r = np.asarray(r, dtype=float)
    inside = r < 1.0
    out = np.zeros_like(r)
    out[inside] = np.exp(-1.0 / (1.0 - r[inside] ** 2))
    return out


def smooth_bump_derivative(r: np.ndarray) -> np.ndarray:
    """φ'(r) = -2r/(1-r²)²·φ(r)"""
    r = np.asarray(r, dtype=float)
    inside = r < 1.0
    out = np.zeros_like(r)
    ri = r[inside]
    out[inside] = -2.0 * ri / (1.0 - ri * ri) ** 2 * np.exp(-1.0 / (1.0 - ri * ri))
    return out


def bump_mass() -> float:
    """M = ∫ φ(|x|) dx"""
    value, _ = quad(lambda r: 4.0 * np.pi * r * r * smooth_bump(np.array([r]))[0], 0.0, 1.0,
                    epsabs=1e-14, epsrel=1e-12)
    return value


def build_bump_potential(amplitude: float = 1.0, center: Point3 = ORIGIN) -> FieldSpec:
    """标量鼓包 a·φ(|x - c|)"""
    c = center.as_array()

    def evaluate(p):
        return amplitude * smooth_bump(np.linalg.norm(p - c, axis=1))

    def gradient(p):
        d = p - c
        r = np.linalg.norm(d, axis=1)
        safe = np.where(r > 0, r, 1.0)
        return (amplitude * smooth_bump_derivative(r) / safe)[:, None] * d

    reach = center.norm + 1.0
    return FieldSpec(
        kind=FieldKind.SCALAR, evaluate=evaluate, gradient=gradient,
        envelope=DecayEnvelope(abs(amplitude) * BUMP_MAX * (1.0 + reach ** 1.5), 1.0),
        support_radius=reach, is_zero=amplitude == 0, name="bump",
        params={'amplitude': amplitude, 'center': center.to_tuple()},
    )


def build_bump_field(amplitude: float = 0.5, center: Point3 = ORIGIN, eps: float = 1.0) -> FieldSpec:
    """
    紧支撑鼓包向量场 Q(x) = a(x - c)φ(|x - c|)

    div Q = a(3φ + rφ')，支撑在 B(c, 1) 内
    """
    c = center.as_array()

    def evaluate(p):
        d = p - c
        return amplitude * smooth_bump(np.linalg.norm(d, axis=1))[:, None] * d

    def divergence(p):
        r = np.linalg.norm(p - c, axis=1)
        return amplitude * (3.0 * smooth_bump(r) + r * smooth_bump_derivative(r))

    reach = center.norm + 1.0
    return FieldSpec(
        kind=FieldKind.VECTOR, evaluate=evaluate, divergence=divergence,
        envelope=DecayEnvelope(abs(amplitude) * BUMP_MAX * (1.0 + reach ** (0.5 + eps)), eps),
        support_radius=reach, is_zero=amplitude == 0, name="bump-field",
        params={'amplitude': amplitude, 'center': center.to_tuple()},
    )


def build_gaussian_potential(amplitude: float = 1.0, width: float = 1.0, eps: float = 1.0) -> FieldSpec:
    """V(x) = a·exp(-|x|²/w²)，带解析梯度"""
    if not width > 0:
        raise ParameterError(f"width must be positive, got {width}")

    def evaluate(p):
        return amplitude * np.exp(-np.sum(p * p, axis=1) / width ** 2)

    def gradient(p):
        return (-2.0 / width ** 2) * evaluate(p)[:, None] * p

    r = np.linspace(0.0, _GAUSSIAN_REACH * width, 2001)
    m = float(np.max(abs(amplitude) * np.exp(-(r / width) ** 2) * (1.0 + r ** (0.5 + eps))))
    return FieldSpec(
        kind=FieldKind.SCALAR, evaluate=evaluate, gradient=gradient,
        envelope=DecayEnvelope(m * 1.01, eps), effective_radius=_GAUSSIAN_REACH * width,
        is_zero=amplitude == 0, name="gaussian",
        params={'amplitude': amplitude, 'width': width},
    )


def build_gaussian_gradient_field(amplitude: float = 1.0, eps: float = 1.0) -> FieldSpec:
    """
    梯度场 Q = ∇(a e^{-|x|²}) = -2a x e^{-|x|²}

    div Q = a(4|x|² - 6)e^{-|x|²}；势函数 ν 放在 params['potential']
    """
    def evaluate(p):
        return (-2.0 * amplitude * np.exp(-np.sum(p * p, axis=1)))[:, None] * p

    def divergence(p):
        r2 = np.sum(p * p, axis=1)
        return amplitude * (4.0 * r2 - 6.0) * np.exp(-r2)

    def potential(p):
        return amplitude * np.exp(-np.sum(p * p, axis=1))

    r = np.linspace(0.0, _GAUSSIAN_REACH, 2001)
    m = float(np.max(2.0 * abs(amplitude) * r * np.exp(-r * r) * (1.0 + r ** (0.5 + eps))))
    return FieldSpec(
        kind=FieldKind.VECTOR, evaluate=evaluate, divergence=divergence,
        envelope=DecayEnvelope(m * 1.01, eps), effective_radius=_GAUSSIAN_REACH,
        is_zero=amplitude == 0, name="gaussian-gradient",
        params={'amplitude': amplitude, 'potential': potential},
    )


def build_example1(gamma: float) -> Tuple[FieldSpec, FieldSpec]:
    """
    V(x) = sin x1·(1+|x|²)^{-γ} = div Q + V2

    Q = (-cos x1 (1+|x|²)^{-γ}, 0, 0)，V2 = cos x1·∂1(1+|x|²)^{-γ} 衰减阶 2γ+1
    """
    if not gamma > 0.25:
        raise ParameterError(f"example 1 needs gamma > 1/4 for a decaying envelope, got {gamma}")

    def weight(p):
        return (1.0 + np.sum(p * p, axis=1)) ** (-gamma)

    def evaluate(p):
        out = np.zeros((len(p), 3))
        out[:, 0] = -np.cos(p[:, 0]) * weight(p)
        return out

    def d1_weight(p):
        return -2.0 * gamma * p[:, 0] * (1.0 + np.sum(p * p, axis=1)) ** (-gamma - 1.0)

    def divergence(p):
        return np.sin(p[:, 0]) * weight(p) - np.cos(p[:, 0]) * d1_weight(p)

    def v2(p):
        return np.cos(p[:, 0]) * d1_weight(p)

    Q = FieldSpec(
        kind=FieldKind.VECTOR, evaluate=evaluate, divergence=divergence,
        envelope=DecayEnvelope(2.0, 2.0 * gamma - 0.5), name="example1-Q",
        params={'gamma': gamma},
    )
    V2 = FieldSpec(
        kind=FieldKind.SCALAR, evaluate=v2,
        envelope=DecayEnvelope(4.0 * gamma, 2.0 * gamma + 0.5), name="example1-V2",
        params={'gamma': gamma},
    )
    return Q, V2


def example1_potential(gamma: float) -> FieldSpec:
    """原势 V = sin x1·(1+|x|²)^{-γ}"""
    def evaluate(p):
        return np.sin(p[:, 0]) * (1.0 + np.sum(p * p, axis=1)) ** (-gamma)

    return FieldSpec(kind=FieldKind.SCALAR, evaluate=evaluate,
                     envelope=DecayEnvelope(2.0, max(2.0 * gamma - 0.5, 1e-3)),
                     name="example1-V", params={'gamma': gamma})


def build_example2(centers: Sequence[Sequence[float]], amplitudes: Sequence[float],
                   bump: Optional[FieldSpec] = None, eps: float = 0.5) -> FieldSpec:
    """
    Q(x) = Σ_j a_j q(x - x_j)，q 支撑在单位球内，|x_k - x_l| > 2

    每点至多落在一个支撑内，用 KD 树查找最近中心
    """
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    amplitudes = np.asarray(amplitudes, dtype=float).reshape(-1)
    if len(amplitudes) != len(centers):
        raise SpecError(f"{len(amplitudes)} amplitudes for {len(centers)} centers")
    q = bump or build_bump_field(1.0)
    if q.kind is not FieldKind.VECTOR:
        raise ParameterError("example 2 needs a vector bump")
    if q.support_radius is None or q.support_radius > 1.0:
        raise ParameterError("example 2 bump must be supported in the unit ball")

    tree = cKDTree(centers)
    if tree.query_pairs(r=2.0):
        raise SpecError("example 2 centers must be separated by more than 2")

    def locate(p):
        dist, idx = tree.query(p, k=1, distance_upper_bound=1.0)
        hit = np.isfinite(dist)
        return hit, idx

    def evaluate(p):
        out = np.zeros((len(p), 3))
        hit, idx = locate(p)
        if np.any(hit):
            j = idx[hit]
            out[hit] = amplitudes[j, None] * q.evaluate(p[hit] - centers[j])
        return out

    def divergence(p):
        out = np.zeros(len(p))
        hit, idx = locate(p)
        if np.any(hit):
            j = idx[hit]
            out[hit] = amplitudes[j] * q.div(p[hit] - centers[j])
        return out

    norms = np.linalg.norm(centers, axis=1)
    q_max = q.envelope.m
    m = float(np.max(np.abs(amplitudes) * q_max * (1.0 + (norms + 1.0) ** (0.5 + eps)))) if len(centers) else 0.0
    logger.debug(f"example 2: {len(centers)} centers, envelope m={m:.3e}")
    return FieldSpec(
        kind=FieldKind.VECTOR, evaluate=evaluate, divergence=divergence,
        envelope=DecayEnvelope(m, eps), support_radius=float(norms.max() + 1.0) if len(centers) else 0.0,
        is_zero=not np.any(amplitudes), name="example2",
        params={'n_centers': len(centers)},
    )


def build_proposition_potential(Q: FieldSpec, gamma: float) -> FieldSpec:
    """
    V = γ div Q + |Q|²；|γ| ≤ 1 时 -Δ + V ≥ 0

    ∫|∇ψ|² + Vψ² = ∫|∇ψ - γQψ|² + (1 - γ²)|Q|²ψ²
    """
    if Q.kind is not FieldKind.VECTOR:
        raise ParameterError("proposition potential needs a vector field")
    if abs(gamma) > 1.0:
        raise ParameterError(f"proposition potential needs |gamma| <= 1, got {gamma}")

    def evaluate(p):
        q = Q.evaluate(p)
        return gamma * Q.div(p) + np.sum(q * q, axis=1)

    m = Q.envelope.m * (abs(gamma) + Q.envelope.m)
    return FieldSpec(
        kind=FieldKind.SCALAR, evaluate=evaluate, envelope=DecayEnvelope(m, Q.envelope.eps),
        fd_step=Q.fd_step, support_radius=Q.support_radius, effective_radius=Q.effective_radius,
        is_zero=Q.is_zero, name=f"proposition({Q.name}, {gamma:g})",
        params={'gamma': gamma},
    )


def build_ball_indicator(amplitude: float = 1.0, radius: float = 1.0) -> FieldSpec:
    """源项 f = a·1_{|x|<radius}"""
    if not radius > 0:
        raise ParameterError(f"radius must be positive, got {radius}")

    def evaluate(p):
        return np.where(np.linalg.norm(p, axis=1) < radius, amplitude, 0.0)

    l2 = abs(amplitude) * np.sqrt(4.0 * np.pi * radius ** 3 / 3.0)
    return FieldSpec(
        kind=FieldKind.SCALAR, evaluate=evaluate,
        envelope=DecayEnvelope(abs(amplitude) * (1.0 + radius ** 1.5), 1.0),
        support_radius=radius, is_zero=amplitude == 0, name="ball-indicator",
        params={'amplitude': amplitude, 'radius': radius, 'l2_norm': float(l2)},
    )
