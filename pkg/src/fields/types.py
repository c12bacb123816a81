"""
场的数据类型定义

标量势 V 与向量场 Q 统一用 FieldSpec 描述，求值接口是向量化的：
evaluate(points) 接受 (N, 3) 数组，标量场返回 (N,)，向量场返回 (N, 3)
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Callable, Dict, Optional

import numpy as np
from scipy.spatial import cKDTree

from ..core.exceptions import ParameterError
from ..core.geometry import as_points
from ..core.types import Point3
from .exceptions import SpecError

PointMap = Callable[[np.ndarray], np.ndarray]


class FieldKind(Enum):
    """场的类型"""
    SCALAR = "scalar"
    VECTOR = "vector3"


class SignLaw(Enum):
    """随机符号 ξ_j 的分布（均为偶分布，所有奇阶矩为零）"""
    RADEMACHER = "rademacher"
    UNIFORM = "uniform"

    @property
    def second_moment(self) -> float:
        """E[ξ²]"""
        return 1.0 if self is SignLaw.RADEMACHER else 1.0 / 3.0

    @property
    def fourth_moment(self) -> float:
        """E[ξ⁴]"""
        return 1.0 if self is SignLaw.RADEMACHER else 1.0 / 5.0


@dataclass(frozen=True)
class DecayEnvelope:
    """
    衰减包络 |F(x)| ≤ m / (1 + |x|^{0.5+eps})
    """
    m: float
    eps: float

    def __post_init__(self):
        if self.m < 0:
            raise ParameterError(f"envelope constant must be >= 0, got {self.m}")
        if not self.eps > 0:
            raise ParameterError(f"envelope exponent eps must be > 0, got {self.eps}")

    @property
    def exponent(self) -> float:
        return 0.5 + self.eps

    def bound(self, radii: np.ndarray) -> np.ndarray:
        return self.m / (1.0 + np.asarray(radii, dtype=float) ** self.exponent)

    def holds(self, magnitudes: np.ndarray, radii: np.ndarray, rtol: float = 1e-12) -> bool:
        """在所有采样点上检查包络谓词"""
        return bool(np.all(np.asarray(magnitudes) <= self.bound(radii) * (1.0 + rtol)))


@dataclass
class FieldSpec:
    """
    标量势或向量场

    divergence 为解析散度（仅向量场）；缺省时用步长 fd_step 的中心差分
    support_radius：场在 B(0, support_radius) 外恒为零
    reach：场在 B(0, reach) 外可忽略（|F| < 1e-16·max|F|），用于截断积分
    """
    kind: FieldKind
    evaluate: PointMap
    envelope: DecayEnvelope
    divergence: Optional[PointMap] = None
    gradient: Optional[PointMap] = None
    fd_step: float = 1e-3
    support_radius: Optional[float] = None
    effective_radius: Optional[float] = None
    is_zero: bool = False
    name: str = ""
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.fd_step > 0:
            raise ParameterError(f"fd_step must be > 0, got {self.fd_step}")
        if self.divergence is not None and self.kind is not FieldKind.VECTOR:
            raise ParameterError("divergence is only defined for vector fields")

    def __call__(self, points) -> np.ndarray:
        return self.evaluate(as_points(points))

    def at(self, x: Point3):
        """单点求值"""
        value = self.evaluate(as_points(x))
        return float(value[0]) if self.kind is FieldKind.SCALAR else value[0]

    @property
    def reach(self) -> Optional[float]:
        if self.support_radius is not None:
            return self.support_radius
        return self.effective_radius

    def div(self, points) -> np.ndarray:
        """V = div Q；解析散度优先"""
        if self.kind is not FieldKind.VECTOR:
            raise ParameterError("div() requires a vector field")
        pts = as_points(points)
        if self.is_zero:
            return np.zeros(len(pts))
        if self.divergence is not None:
            return self.divergence(pts)
        return self.fd_divergence(pts)

    def fd_divergence(self, points, h: Optional[float] = None) -> np.ndarray:
        """中心差分散度 Σ_i (Q_i(x + h e_i) - Q_i(x - h e_i)) / 2h"""
        pts = as_points(points)
        h = h or self.fd_step
        total = np.zeros(len(pts))
        for i in range(3):
            e = np.zeros(3)
            e[i] = h
            total += (self.evaluate(pts + e)[:, i] - self.evaluate(pts - e)[:, i]) / (2.0 * h)
        return total

    def fd_gradient(self, points, h: Optional[float] = None) -> np.ndarray:
        """标量场的中心差分梯度 (N, 3)"""
        pts = as_points(points)
        h = h or self.fd_step
        out = np.empty((len(pts), 3))
        for i in range(3):
            e = np.zeros(3)
            e[i] = h
            out[:, i] = (self.evaluate(pts + e) - self.evaluate(pts - e)) / (2.0 * h)
        return out

    def magnitude(self, points) -> np.ndarray:
        values = self(points)
        if self.kind is FieldKind.VECTOR:
            return np.linalg.norm(values, axis=1)
        return np.abs(values)

    def divergence_field(self) -> "FieldSpec":
        """div Q 作为标量场"""
        return FieldSpec(
            kind=FieldKind.SCALAR,
            evaluate=self.div,
            envelope=self.envelope,
            fd_step=self.fd_step,
            support_radius=self.support_radius,
            effective_radius=self.effective_radius,
            is_zero=self.is_zero,
            name=f"div {self.name}".strip(),
        )

    def scaled(self, factor: float) -> "FieldSpec":
        """ηF，散度与包络同比例缩放"""
        div = self.divergence
        grad = self.gradient
        ev = self.evaluate
        return replace(
            self,
            evaluate=lambda p: factor * ev(p),
            divergence=(lambda p: factor * div(p)) if div is not None else None,
            gradient=(lambda p: factor * grad(p)) if grad is not None else None,
            envelope=DecayEnvelope(abs(factor) * self.envelope.m, self.envelope.eps),
            is_zero=self.is_zero or factor == 0,
            params={**self.params, 'scale': self.params.get('scale', 1.0) * factor},
        )

    @classmethod
    def zero(cls, kind: FieldKind = FieldKind.VECTOR, eps: float = 1.0) -> "FieldSpec":
        """恒为零的场"""
        if kind is FieldKind.VECTOR:
            evaluate = lambda p: np.zeros((len(p), 3))
            divergence = lambda p: np.zeros(len(p))
        else:
            evaluate = lambda p: np.zeros(len(p))
            divergence = None
        return cls(kind=kind, evaluate=evaluate, envelope=DecayEnvelope(0.0, eps),
                   divergence=divergence, support_radius=0.0, is_zero=True, name="zero")

    def describe(self) -> Dict[str, Any]:
        """可序列化的描述（不含可调用对象）"""
        return {
            'name': self.name,
            'kind': self.kind.value,
            'envelope': {'m': self.envelope.m, 'eps': self.envelope.eps},
            'analytic_divergence': self.divergence is not None,
            'fd_step': self.fd_step,
            'support_radius': self.support_radius,
            'effective_radius': self.effective_radius,
            'params': dict(self.params),
        }


@dataclass
class CutoffSplit:
    """Q = χ_R Q + (1 - χ_R) Q"""
    R: float
    chi: PointMap
    Q1: FieldSpec
    Q2: FieldSpec


@dataclass
class AndersonPotentialSpec:
    """
    随机化势 V(x) = Σ_j a_j ξ_j φ(x - x_j)

    bump φ 支撑在单位球内；中心两两距离 > 2
    """
    centers: np.ndarray
    amplitudes: np.ndarray
    eps: float = 0.25
    sign_law: SignLaw = SignLaw.RADEMACHER
    seed: int = 0
    bump: Optional[FieldSpec] = None

    def __post_init__(self):
        self.centers = np.atleast_2d(np.asarray(self.centers, dtype=float))
        self.amplitudes = np.asarray(self.amplitudes, dtype=float).reshape(-1)
        if self.centers.shape[1] != 3:
            raise SpecError(f"centers must have shape (J, 3), got {self.centers.shape}")
        if len(self.amplitudes) != len(self.centers):
            raise SpecError(
                f"{len(self.amplitudes)} amplitudes for {len(self.centers)} centers")
        if np.any(self.amplitudes < 0):
            raise SpecError("amplitudes must be non-negative")
        if not self.eps > 0:
            raise SpecError(f"eps must be > 0, got {self.eps}")
        if self.n_centers > 1:
            close = cKDTree(self.centers).query_pairs(r=2.0)
            if close:
                j, l = min(close)
                raise SpecError(f"centers {j} and {l} are not separated by more than 2")
        if isinstance(self.sign_law, str):
            self.sign_law = SignLaw(self.sign_law)

    @property
    def n_centers(self) -> int:
        return len(self.centers)

    @property
    def cloud_radius(self) -> float:
        """max_j |x_j|，无中心时为 0"""
        return float(np.linalg.norm(self.centers, axis=1).max()) if self.n_centers else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n_centers': self.n_centers,
            'eps': self.eps,
            'sign_law': self.sign_law.value,
            'seed': self.seed,
            'max_amplitude': float(self.amplitudes.max()) if self.n_centers else 0.0,
        }
