"""
Helmholtz 重构：由标量势 V 求向量场 Q，使 div Q = V

    Q(x) = ∫ (x - y) / (4π|x - y|³) V(y) dy

以 x 为中心的球坐标 y = x - rω 下 r² 雅可比抵消 |x - y|^{-2}：

    Q(x) = (1/4π) ∫_0^{R*} dr ∫_{S²} ω V(x - rω) dω

按 r < split_radius（近场 Q1）与 r > split_radius（远场 Q2）分开积分。
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import logging

import numpy as np
from scipy.interpolate import CubicSpline

from ..core.exceptions import ParameterError
from ..core.geometry import as_points
from ..core.types import Point3
from ..quadrature.rules import composite_gauss, gauss_legendre, panel_edges, refine_until, sphere_rule
from ..quadrature.types import QuadratureSpec
from .examples import bump_mass, smooth_bump
from .types import FieldKind, FieldSpec

logger = logging.getLogger("fields.helmholtz")

DEFAULT_SPEC = QuadratureSpec(n_theta=16, n_phi=32, n_radial=16, tol=1e-9, atol=1e-13)

# 无支撑信息且包络不可积时的缺省截断（相对 |x|）
DEFAULT_TRUNCATION = 64.0


@dataclass
class HelmholtzResult:
    """Q(x) = near + far"""
    near: np.ndarray
    far: np.ndarray
    truncation_radius: float
    error: float
    n_nodes: int

    @property
    def total(self) -> np.ndarray:
        return self.near + self.far


def truncation_radius_for(V: FieldSpec, x: Point3, tol: float,
                          truncation_radius: Optional[float] = None) -> float:
    """
    径向截断 R*

    有支撑/有效半径时 R* = |x| + reach；否则用包络尾界
    m (R - |x|)^{1-p} / (p - 1) < tol，p = 0.5 + ε > 1
    """
    if truncation_radius is not None:
        return truncation_radius
    if V.reach is not None:
        return x.norm + V.reach
    p = V.envelope.exponent
    if p > 1.0 and V.envelope.m > 0:
        radius = x.norm + (V.envelope.m / ((p - 1.0) * tol)) ** (1.0 / (p - 1.0))
        if radius < x.norm + 1e4:
            return radius
    logger.warning(f"no integrable tail bound for {V.name or 'potential'}; "
                   f"truncating at |x| + {DEFAULT_TRUNCATION:g}")
    return x.norm + DEFAULT_TRUNCATION


def helmholtz_parts(V: FieldSpec, x: Point3, split_radius: float = 1.0,
                    spec: Optional[QuadratureSpec] = None,
                    truncation_radius: Optional[float] = None) -> HelmholtzResult:
    """近场 / 远场分别积分"""
    if V.kind is not FieldKind.SCALAR:
        raise ParameterError("helmholtz reconstruction expects a scalar potential")
    if not split_radius > 0:
        raise ParameterError(f"split radius must be positive, got {split_radius}")
    spec = spec or DEFAULT_SPEC
    if V.is_zero:
        zero = np.zeros(3)
        return HelmholtzResult(zero, zero.copy(), 0.0, 0.0, 0)

    radius = truncation_radius_for(V, x, spec.tol, truncation_radius)
    xa = x.as_array()
    axis = xa if x.norm > 0 else None

    def shell_integral(r_lo: float, r_hi: float, s: QuadratureSpec):
        panels = max(s.radial_panels, int(np.ceil((r_hi - r_lo) / 2.0)))
        r, wr = composite_gauss(s.n_radial, panel_edges(r_lo, r_hi, panels))
        dirs, wd = sphere_rule(s.n_theta, s.n_phi, axis)
        pts = xa[None, None, :] - r[:, None, None] * dirs[None, :, :]
        vals = V.evaluate(pts.reshape(-1, 3)).reshape(len(r), len(dirs))
        # Σ_r Σ_ω w_r w_ω ω V
        weighted = (wr[:, None] * vals) * wd[None, :]
        return weighted.sum(axis=0) @ dirs / (4.0 * np.pi), len(r) * len(dirs)

    def evaluate(s: QuadratureSpec):
        near, n1 = shell_integral(0.0, min(split_radius, radius), s)
        if radius > split_radius:
            far, n2 = shell_integral(split_radius, radius, s)
        else:
            far, n2 = np.zeros(3), 0
        return np.concatenate([near, far]), n1 + n2

    result = refine_until(evaluate, spec, f"helmholtz reconstruction at |x|={x.norm:.3g}")
    value = np.asarray(result.value, dtype=float)
    logger.debug(f"helmholtz |x|={x.norm:.3g}: R*={radius:.3g}, nodes={result.n_nodes}")
    return HelmholtzResult(near=value[:3], far=value[3:], truncation_radius=radius,
                           error=result.error, n_nodes=result.n_nodes)


def helmholtz_reconstruct(V: FieldSpec, x: Point3, split_radius: float = 1.0,
                          spec: Optional[QuadratureSpec] = None,
                          truncation_radius: Optional[float] = None) -> np.ndarray:
    """Q(x)，形状 (3,)"""
    return helmholtz_parts(V, x, split_radius, spec, truncation_radius).total


def helmholtz_field(V: FieldSpec, split_radius: float = 1.0,
                    spec: Optional[QuadratureSpec] = None, fd_step: float = 1e-3) -> FieldSpec:
    """重构出的 Q 作为向量场（逐点积分，散度用中心差分）"""
    def evaluate(points):
        pts = as_points(points)
        return np.array([
            helmholtz_reconstruct(V, Point3.from_array(p), split_radius, spec) for p in pts
        ]).reshape(len(pts), 3)

    return FieldSpec(kind=FieldKind.VECTOR, evaluate=evaluate, envelope=V.envelope,
                     fd_step=fd_step, is_zero=V.is_zero, name=f"Q[{V.name}]")


class BumpFarKernel:
    """
    单个鼓包的远场核

        S(d) = ∫_{|z|>1} z / (4π|z|³) φ(|d - z|) dz = ŝ(|d|)·d/|d|

    |d| ≥ 2 时整个鼓包在 |z| > 1 内，由牛顿定理 S(d) = M d / (4π|d|³)；
    |d| < 2 时 ŝ 由二维求积制表，三次样条插值
    """

    def __init__(self, n_table: int = 161, n_nodes: int = 48):
        self.mass = bump_mass()
        rho = np.linspace(0.0, 2.0, n_table)
        table = np.array([self._profile(p, n_nodes) for p in rho])
        self._spline = CubicSpline(rho, table)

    @staticmethod
    def _profile(rho: float, n: int) -> float:
        """
        ŝ(ρ) = 1/(4ρ²) ∫ dr r^{-2} ∫_{|ρ-r|}^{1} (ρ² + r² - u²) φ(u) u du

        r ∈ [max(1, ρ-1), ρ+1]，在 r = ρ 处分段
        """
        if rho <= 0.0:
            return 0.0
        r_lo, r_hi = max(1.0, rho - 1.0), rho + 1.0
        edges = [r_lo, r_hi] + ([rho] if r_lo < rho < r_hi else [])
        r, wr = composite_gauss(n, edges)
        total = 0.0
        for ri, wi in zip(r, wr):
            u_lo = abs(rho - ri)
            if u_lo >= 1.0:
                continue
            u, wu = gauss_legendre(n, u_lo, 1.0)
            inner = np.sum(wu * (rho * rho + ri * ri - u * u) * smooth_bump(u) * u)
            total += wi * inner / (ri * ri)
        return total / (4.0 * rho * rho)

    def radial(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        far = self.mass / (4.0 * np.pi * np.maximum(rho, 2.0) ** 2)
        return np.where(rho < 2.0, self._spline(np.minimum(rho, 2.0)), far)

    def __call__(self, d: np.ndarray) -> np.ndarray:
        """d 形状 (N, 3)，返回 (N, 3)"""
        d = np.atleast_2d(d)
        rho = np.linalg.norm(d, axis=1)
        safe = np.where(rho > 0, rho, 1.0)
        return (self.radial(rho) / safe)[:, None] * d

    def differential(self, d: np.ndarray) -> np.ndarray:
        """
        雅可比矩阵 ∂S_i/∂d_k，形状 (N, 3, 3)

        S = g(ρ) d，g = ŝ/ρ：DS = g I + g'(ρ) d dᵀ/ρ
        """
        d = np.atleast_2d(d)
        rho = np.linalg.norm(d, axis=1)
        safe = np.where(rho > 0, rho, 1.0)
        s = self.radial(rho)
        ds = np.where(rho < 2.0, self._spline(np.minimum(rho, 2.0), 1),
                      -2.0 * self.mass / (4.0 * np.pi * np.maximum(rho, 2.0) ** 3))
        g = s / safe
        dg = (ds - g) / safe
        outer = d[:, :, None] * d[:, None, :]
        return g[:, None, None] * np.eye(3)[None] + (dg / safe)[:, None, None] * outer


@lru_cache(maxsize=1)
def bump_far_kernel() -> BumpFarKernel:
    """默认鼓包的远场核（进程内只制表一次）"""
    return BumpFarKernel()
