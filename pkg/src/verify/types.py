"""
验证模块的数据类型定义
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ..core.exceptions import ParameterError
from ..core.fitting import PowerLawFit
from ..core.serialization import to_serializable


@dataclass
class BoundSweepReport:
    """
    积分估计在参数网格上的扫描结果

    每行一个 (δ, ρ, |x|) 组合，每列一个被检验的界；
    ratios = lhs / shapes，constants 为各列比值的最大值
    """
    name: str
    bounds: List[str]
    deltas: np.ndarray
    xs: np.ndarray
    rhos: Optional[np.ndarray]
    lhs: np.ndarray                 # (n, b)
    shapes: np.ndarray              # (n, b)
    constants: np.ndarray           # (b,)
    growth: np.ndarray              # (b,) 累积常数的最大相邻增长倍数
    exponent: Optional[float] = None
    exponent_stderr: float = float("nan")
    r_squared: float = float("nan")
    tolerance_factor: float = 2.0
    passed: bool = False

    def __post_init__(self):
        self.lhs = np.atleast_2d(np.asarray(self.lhs, dtype=float).T).T
        self.shapes = np.atleast_2d(np.asarray(self.shapes, dtype=float).T).T
        if self.lhs.shape != self.shapes.shape:
            raise ParameterError("lhs and shapes must have the same shape")
        if np.any(self.lhs < 0):
            raise ParameterError("bound sweep produced a negative left-hand side")

    @property
    def ratios(self) -> np.ndarray:
        return self.lhs / self.shapes

    def rows(self) -> List[Dict[str, Any]]:
        """CSV 行"""
        out = []
        for i in range(len(self.deltas)):
            row = {'delta': self.deltas[i], 'x_norm': self.xs[i]}
            if self.rhos is not None:
                row['rho'] = self.rhos[i]
            for b, name in enumerate(self.bounds):
                row[f'lhs_{name}'] = self.lhs[i, b]
                row[f'ratio_{name}'] = self.ratios[i, b]
            out.append(row)
        return out

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable({
            'name': self.name,
            'bounds': self.bounds,
            'n_rows': len(self.deltas),
            'constants': dict(zip(self.bounds, self.constants)),
            'growth': dict(zip(self.bounds, self.growth)),
            'exponent': self.exponent,
            'exponent_stderr': self.exponent_stderr,
            'r_squared': self.r_squared,
            'tolerance_factor': self.tolerance_factor,
            'passed': self.passed,
        })


@dataclass
class DiracReport:
    """一个差分步长下 𝒟² 分解的偏差"""
    grid_step: float
    n_points: int
    deviation: float                 # max |(𝒟²ψ)₁ - Hψ|
    off_diagonal: float              # 第一行/列其余分量的最大模
    gradient_case: bool
    unitary_error: float             # max |YYᴴ - I|
    trial_function: str = ""
    field_name: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable(self)


@dataclass
class DiracConvergence:
    """步长减半序列上的收敛阶"""
    reports: List[DiracReport]
    deviation_ratios: List[float]
    off_diagonal_ratios: List[float]
    band: tuple = (3.4, 4.6)

    @property
    def second_order(self) -> bool:
        lo, hi = self.band
        ratios = list(self.deviation_ratios)
        if self.reports and self.reports[0].gradient_case:
            # nan 表示偏差已在舍入量级
            ratios += [r for r in self.off_diagonal_ratios if np.isfinite(r)]
        return bool(ratios) and all(lo <= r <= hi for r in ratios)

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable({
            'reports': [r.to_dict() for r in self.reports],
            'deviation_ratios': self.deviation_ratios,
            'off_diagonal_ratios': self.off_diagonal_ratios,
            'second_order': self.second_order,
        })


def _fit_dict(fit: PowerLawFit) -> Dict[str, Any]:
    return {
        'exponent': fit.exponent,
        'exponent_stderr': fit.exponent_stderr,
        'prefactor': fit.prefactor,
        'r_squared': fit.r_squared,
        'n_points': fit.n_points,
    }


@dataclass
class AndersonDecayReport:
    """Q₂ 的 Monte Carlo 衰减统计"""
    eps: float
    radii: np.ndarray
    directions: np.ndarray
    n_realizations: int
    seed: int
    second_moment: np.ndarray           # E|Q₂|²，按半径对方向平均
    second_moment_error: np.ndarray
    dispersion: np.ndarray              # E[ξ²] Σ a_j²|S_j|² 的精确值
    decay: PowerLawFit
    dispersion_decay: PowerLawFit
    envelope_exponents: np.ndarray      # 每次实现的 sup 包络指数
    mean_z_max: float
    mean_z_rms: float
    differential_ratio: np.ndarray      # sup|DQ₂| / (ln(1+r)/(1+r)^{0.5+ε})
    differential_fd_error: float

    @property
    def defined(self) -> bool:
        return bool(np.isfinite(self.decay.exponent))

    @property
    def target_exponent(self) -> float:
        return 1.0 + 2.0 * self.eps

    @property
    def envelope_exponent(self) -> float:
        finite = self.envelope_exponents[np.isfinite(self.envelope_exponents)]
        return float(np.mean(finite)) if len(finite) else float("nan")

    @property
    def envelope_exponent_error(self) -> float:
        finite = self.envelope_exponents[np.isfinite(self.envelope_exponents)]
        if len(finite) < 2:
            return float("nan")
        return float(np.std(finite, ddof=1) / np.sqrt(len(finite)))

    @property
    def mean_vanishes(self) -> bool:
        """各分量均值的标准化统计量 rms ≤ 1.5"""
        return bool(self.mean_z_rms <= 1.5)

    def rows(self) -> List[Dict[str, Any]]:
        return [
            {'radius': r, 'second_moment': m, 'second_moment_error': e,
             'dispersion': d, 'differential_ratio': q}
            for r, m, e, d, q in zip(self.radii, self.second_moment, self.second_moment_error,
                                     self.dispersion, self.differential_ratio)
        ]

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable({
            'eps': self.eps,
            'n_realizations': self.n_realizations,
            'seed': self.seed,
            'n_directions': len(self.directions),
            'defined': self.defined,
            'target_exponent': self.target_exponent,
            'decay': _fit_dict(self.decay),
            'dispersion_decay': _fit_dict(self.dispersion_decay),
            'envelope_exponent': self.envelope_exponent,
            'envelope_exponent_error': self.envelope_exponent_error,
            'mean_z_max': self.mean_z_max,
            'mean_z_rms': self.mean_z_rms,
            'mean_vanishes': self.mean_vanishes,
            'differential_fd_error': self.differential_fd_error,
            'table': self.rows(),
        })


@dataclass
class MomentReport:
    """E|Q₂(k)|^{2p} 在格点上的衰减"""
    p: int
    eps: float
    norms: np.ndarray                   # 各组 |k|
    moments: np.ndarray
    moment_errors: np.ndarray
    fit: PowerLawFit
    cross_z_max: float
    cross_z_rms: float
    n_realizations: int
    seed: int
    k_points: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))

    @property
    def target_exponent(self) -> float:
        return self.p * (1.0 + 2.0 * self.eps)

    @property
    def independent_signs(self) -> bool:
        return bool(self.cross_z_rms <= 1.5)

    def rows(self) -> List[Dict[str, Any]]:
        return [{'k_norm': n, 'moment': m, 'moment_error': e}
                for n, m, e in zip(self.norms, self.moments, self.moment_errors)]

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable({
            'p': self.p,
            'eps': self.eps,
            'target_exponent': self.target_exponent,
            'fit': _fit_dict(self.fit),
            'cross_z_max': self.cross_z_max,
            'cross_z_rms': self.cross_z_rms,
            'independent_signs': self.independent_signs,
            'n_realizations': self.n_realizations,
            'seed': self.seed,
            'table': self.rows(),
        })


@dataclass
class PositivityReport:
    """二次型 ∫|∇φ|² + Vφ² 在随机试验函数上的取值"""
    gamma: float
    values: np.ndarray
    gradient_energies: np.ndarray
    seed: int
    threshold: float = -1e-8

    @property
    def min_value(self) -> float:
        return float(np.min(self.values)) if len(self.values) else float("nan")

    @property
    def passed(self) -> bool:
        return bool(len(self.values) and self.min_value >= self.threshold)

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable({
            'gamma': self.gamma,
            'values': self.values,
            'gradient_energies': self.gradient_energies,
            'min_value': self.min_value,
            'threshold': self.threshold,
            'passed': self.passed,
            'seed': self.seed,
        })
