"""
V = γ div Q + |Q|² 时 -Δ + V ≥ 0 的求积检验

随机试验函数为若干平移、伸缩鼓包的线性组合，二次型
∫|∇φ|² + Vφ² 在包含全部支撑的球上用乘积 Gauss 规则计算。
"""
from typing import Optional

import logging

import numpy as np

from ..core.random import stream
from ..fields.examples import build_proposition_potential, smooth_bump, smooth_bump_derivative
from ..fields.types import FieldSpec
from ..quadrature.ball import ball_nodes
from ..quadrature.types import QuadratureSpec
from .types import PositivityReport

logger = logging.getLogger("verify.positivity")

FORM_SPEC = QuadratureSpec(n_theta=32, n_phi=48, n_radial=24, radial_panels=4, max_refine=0)

# 鼓包中心 |c| ≤ CENTER_SPREAD，半径 ∈ SCALE_RANGE
CENTER_SPREAD = 1.0
SCALE_RANGE = (0.75, 1.5)


def random_trial_function(seed: int, index: int, n_bumps: int = 3):
    """
    φ(x) = Σ_i c_i φ_b(|x - x_i|/s_i)

    返回 (φ, ∇φ, 支撑半径)，由 (seed, index) 决定
    """
    rng = stream(seed, index)
    centers = rng.uniform(-CENTER_SPREAD, CENTER_SPREAD, size=(n_bumps, 3))
    scales = rng.uniform(*SCALE_RANGE, size=n_bumps)
    coeffs = rng.normal(size=n_bumps)

    def value(p):
        out = np.zeros(len(p))
        for c, s, a in zip(centers, scales, coeffs):
            out += a * smooth_bump(np.linalg.norm(p - c, axis=1) / s)
        return out

    def gradient(p):
        out = np.zeros((len(p), 3))
        for c, s, a in zip(centers, scales, coeffs):
            d = p - c
            r = np.linalg.norm(d, axis=1)
            safe = np.where(r > 0, r, 1.0)
            out += (a * smooth_bump_derivative(r / s) / (s * safe))[:, None] * d
        return out

    support = float(np.max(np.linalg.norm(centers, axis=1) + scales))
    return value, gradient, support


def quadratic_form(V: FieldSpec, value, gradient, support: float,
                   spec: Optional[QuadratureSpec] = None):
    """(∫|∇φ|² + Vφ², ∫|∇φ|²)"""
    points, w = ball_nodes(np.zeros(3), support, spec or FORM_SPEC)
    phi = value(points)
    grad = gradient(points)
    energy = float(np.sum(w * np.sum(grad * grad, axis=1)))
    return energy + float(np.sum(w * V(points) * phi * phi)), energy


def proposition_form_check(Q: FieldSpec, gamma: float = 1.0, n_tests: int = 8, seed: int = 0,
                           n_bumps: int = 3, spec: Optional[QuadratureSpec] = None,
                           threshold: float = -1e-8) -> PositivityReport:
    """在 n_tests 个随机试验函数上计算二次型，最小值不低于 threshold 即通过"""
    V = build_proposition_potential(Q, gamma)
    values, energies = [], []
    for i in range(n_tests):
        value, gradient, support = random_trial_function(seed, i, n_bumps)
        form, energy = quadratic_form(V, value, gradient, support, spec)
        values.append(form)
        energies.append(energy)
    report = PositivityReport(gamma=gamma, values=np.array(values), gradient_energies=np.array(energies),
                              seed=seed, threshold=threshold)
    logger.info(f"quadratic form over {n_tests} test functions (gamma={gamma:g}): "
                f"min={report.min_value:.4e}, passed={report.passed}")
    return report
