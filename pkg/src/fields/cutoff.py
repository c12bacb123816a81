"""
径向截断函数 χ_R 与场的分裂

χ_R(x) = 1 - s(|x| - R)，s 为五次 smoothstep：
    |x| < R 时为 1，|x| > R + 1 时为 0，|∇χ_R| ≤ 15/8（与 R 无关）
"""
import numpy as np

from ..core.exceptions import ParameterError
from ..core.geometry import as_points
from ..core.types import Point3
from .types import CutoffSplit, FieldKind, FieldSpec

# max |s'| = 30·(1/2)²·(1/2)²
GRADIENT_BOUND = 15.0 / 8.0


def smoothstep(t: np.ndarray) -> np.ndarray:
    """s(t) = 6t⁵ - 15t⁴ + 10t³，t 夹到 [0, 1]"""
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0)


def smoothstep_derivative(t: np.ndarray) -> np.ndarray:
    inside = (t > 0.0) & (t < 1.0)
    tc = np.clip(t, 0.0, 1.0)
    return np.where(inside, 30.0 * tc * tc * (1.0 - tc) ** 2, 0.0)


def cutoff_profile(r: np.ndarray, R: float) -> np.ndarray:
    """χ_R 的径向剖面"""
    return 1.0 - smoothstep(np.asarray(r, dtype=float) - R)


def cutoff_gradient(points: np.ndarray, R: float) -> np.ndarray:
    """∇χ_R(x) = -s'(|x| - R)·x/|x|"""
    pts = as_points(points)
    r = np.linalg.norm(pts, axis=1)
    ds = smoothstep_derivative(r - R)
    safe = np.where(r > 0, r, 1.0)
    return -(ds / safe)[:, None] * pts


def eval_cutoff(x: Point3, R: float) -> float:
    """χ_R(x) ∈ [0, 1]"""
    if not R > 0:
        raise ParameterError(f"cutoff radius must be positive, got {R}")
    return float(cutoff_profile(x.norm, R))


def split_field(Q: FieldSpec, R: float) -> CutoffSplit:
    """
    Q1 = χ_R Q，Q2 = Q - Q1

    两部分的解析散度 div(χQ) = χ div Q + ∇χ·Q，Q 无解析散度时退回差分
    """
    if not R > 0:
        raise ParameterError(f"cutoff radius must be positive, got {R}")
    if Q.kind is not FieldKind.VECTOR:
        raise ParameterError("split_field expects a vector field")

    def chi(points):
        return cutoff_profile(np.linalg.norm(as_points(points), axis=1), R)

    def q1(points):
        return chi(points)[:, None] * Q.evaluate(points)

    def q2(points):
        full = Q.evaluate(points)
        return full - chi(points)[:, None] * full

    def div1(points):
        return chi(points) * Q.div(points) + np.sum(cutoff_gradient(points, R) * Q.evaluate(points), axis=1)

    def div2(points):
        return Q.div(points) - div1(points)

    inner_support = R + 1.0
    if Q.support_radius is not None:
        inner_support = min(inner_support, Q.support_radius)
    # 截断半径吞掉整个支撑时 Q2 恒为零
    q2_zero = Q.is_zero or (Q.support_radius is not None and Q.support_radius <= R)

    Q1 = FieldSpec(
        kind=FieldKind.VECTOR, evaluate=q1, envelope=Q.envelope, divergence=div1,
        fd_step=Q.fd_step, support_radius=inner_support, is_zero=Q.is_zero,
        name=f"chi_{R:g} {Q.name}".strip(), params={**Q.params, 'cutoff': R, 'part': 'inner'},
    )
    Q2 = FieldSpec(
        kind=FieldKind.VECTOR, evaluate=q2, envelope=Q.envelope, divergence=div2,
        fd_step=Q.fd_step, support_radius=Q.support_radius,
        effective_radius=Q.effective_radius, is_zero=q2_zero,
        name=f"(1-chi_{R:g}) {Q.name}".strip(), params={**Q.params, 'cutoff': R, 'part': 'outer'},
    )
    return CutoffSplit(R=R, chi=chi, Q1=Q1, Q2=Q2)


def truncate_far_part(Q: FieldSpec, rho: float, R: float = 1.0) -> FieldSpec:
    """
    Q^(ρ) = χ_ρ Q₂，Q₂ = (1 - χ_R) Q

    去掉近场后再截到 B(0, ρ + 1) 内；要求 ρ > R + 1
    """
    if not R > 0:
        raise ParameterError(f"split radius must be positive, got {R}")
    if not rho > R + 1.0:
        raise ParameterError(f"truncation radius must exceed split radius + 1 = {R + 1.0:g}, got rho={rho}")
    return split_field(split_field(Q, R).Q2, rho).Q1
