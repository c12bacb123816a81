"""
远场振幅与谱密度

    A(k, θ) = lim_{r→∞} r e^{-ikr} u(rθ)

自由情形 A₀(k, θ) = (4π)⁻¹ ∫_{|y|<1} e^{-ik⟨θ,y⟩} f(y) dy 对 k 是整函数，
可直接在复 k 上求积。有势场时 u 由 solve_resolvent 给出，
沿射线对 1/r 做 Richardson 外推。
"""
from typing import Optional, Sequence, Tuple, Union

import logging

import numpy as np

from ..core.exceptions import DomainError, ParameterError
from ..core.geometry import as_points
from ..core.types import ComplexWavenumber
from ..fields.cutoff import truncate_far_part
from ..fields.types import FieldSpec
from ..green.born import solve_resolvent
from ..green.types import BornSettings, ResolventTable
from ..quadrature.ball import ball_nodes
from ..quadrature.rules import sphere_rule
from ..quadrature.types import QuadratureSpec
from .exceptions import ExtractionError
from .types import FarFieldAmplitude, SpectralDensitySample

logger = logging.getLogger("scattering.amplitude")

# 平面波积分的球体节点
AMPLITUDE_SPEC = QuadratureSpec(n_theta=16, n_phi=32, n_radial=16, radial_panels=1)

# 外推用的半径（须在势场有效支撑之外）
DEFAULT_EXTRACTION_RADII = np.geomspace(6.0, 24.0, 6)

# 振幅方向网格
DEFAULT_SPHERE = (8, 16)

# 每次最多同时处理的方向数
_CHUNK = 64

Wavenumber = Union[complex, float, ComplexWavenumber]


def _as_complex(k: Wavenumber) -> complex:
    return k.k if isinstance(k, ComplexWavenumber) else complex(k)


def _source_nodes(f: FieldSpec, spec: Optional[QuadratureSpec]) -> Tuple[np.ndarray, np.ndarray]:
    if f.reach is None:
        raise ParameterError("source f must be compactly supported")
    if f.reach > 1.0 + 1e-12:
        raise ParameterError(f"source f must be supported in the unit ball, got reach={f.reach}")
    points, w = ball_nodes(np.zeros(3), f.reach, spec or AMPLITUDE_SPEC)
    return points, w * f.evaluate(points)


def free_amplitude_grid(f: FieldSpec, ks: Sequence[complex], directions: np.ndarray,
                        spec: Optional[QuadratureSpec] = None) -> np.ndarray:
    """
    A₀(k, θ)，k 与 θ 各取一批

    返回 (len(ks), len(directions)) 复数组；投影 ⟨θ, y⟩ 只算一次
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=complex))
    dirs = as_points(directions)
    out = np.zeros((len(ks), len(dirs)), dtype=complex)
    if f.is_zero:
        return out
    points, fw = _source_nodes(f, spec)
    for start in range(0, len(dirs), _CHUNK):
        proj = points @ dirs[start:start + _CHUNK].T
        for i, k in enumerate(ks):
            out[i, start:start + _CHUNK] = fw @ np.exp(-1j * k * proj)
    return out / (4.0 * np.pi)


def free_amplitude(f: FieldSpec, k: Wavenumber, theta: np.ndarray,
                   spec: Optional[QuadratureSpec] = None) -> complex:
    """单个方向上的 A₀(k, θ)"""
    theta = np.asarray(theta, dtype=float).reshape(3)
    norm = np.linalg.norm(theta)
    if not norm > 0:
        raise ParameterError("direction theta must be nonzero")
    return complex(free_amplitude_grid(f, [_as_complex(k)], theta[None, :] / norm, spec)[0, 0])


def extrapolate_radial(radii: np.ndarray, values: np.ndarray, k: complex) -> Tuple[complex, np.ndarray]:
    """
    g(r) = r e^{-ikr} u(r) 在 1/r → 0 的 Neville 外推

    从最外层半径开始逐个加点；返回 (估计值, 相邻估计之差)
    """
    order = np.argsort(radii)[::-1]
    r = np.asarray(radii, dtype=float)[order]
    g = r * np.exp(-1j * k * r) * np.asarray(values, dtype=complex)[order]
    h = 1.0 / r
    p = g.copy()
    estimates = [p[0]]
    for m in range(1, len(r)):
        for i in range(len(r) - 1, m - 1, -1):
            p[i] = (h[i] * p[i - 1] - h[i - m] * p[i]) / (h[i] - h[i - m])
        estimates.append(p[m])
    estimates = np.asarray(estimates)
    residuals = np.abs(np.diff(estimates))
    best = int(np.argmin(residuals)) + 1
    return complex(estimates[best]), residuals


def extract_amplitude(table: ResolventTable, direction_index: int = 0,
                      rtol: float = 1e-10) -> Tuple[complex, float]:
    """
    沿 table 的第 direction_index 条射线外推 A(k, θ)

    返回 (A, 外推残差)。残差随加点不减且大于 rtol·|A| 时抛 ExtractionError
    """
    if len(table.radii) < 4:
        raise ParameterError(f"amplitude extraction needs >= 4 radii, got {len(table.radii)}")
    u = table.along(direction_index)
    if not np.any(u):
        return 0j, 0.0
    A, residuals = extrapolate_radial(table.radii, u, table.k.k)
    floor = rtol * max(abs(A), 1e-300)
    if np.all(np.diff(residuals) >= 0) and residuals[-1] > floor:
        raise ExtractionError(
            f"amplitude extrapolation along direction {direction_index} does not settle: "
            f"residuals {residuals.tolist()}",
            residuals=residuals,
        )
    return A, float(residuals.min())


def far_field_amplitude(f: FieldSpec, k: Wavenumber, Q: Optional[FieldSpec] = None,
                        n_theta: int = DEFAULT_SPHERE[0], n_phi: int = DEFAULT_SPHERE[1],
                        delta_proxy: float = 1e-2, radii: Optional[Sequence[float]] = None,
                        rho: Optional[float] = None, split_radius: float = 1.0,
                        settings: Optional[BornSettings] = None,
                        tol: float = 1e-8) -> FarFieldAmplitude:
    """
    A(k, ·) 在球面网格上的值

    给定 rho 时势场换成 div(χ_ρ Q₂)，Q₂ = (1 - χ_R)Q，R = split_radius，须 rho > R + 1。
    Q（截断后）为零时用 A₀ 的直接求积，k 可取闭上半平面任意点；
    否则 Im k < delta_proxy 的点抬到 Im k = delta_proxy
    """
    kk = _as_complex(k)
    if kk.imag < 0:
        raise DomainError(f"amplitudes are taken in the closed upper half plane, got k={kk}")
    directions, weights = sphere_rule(n_theta, n_phi)

    if rho is not None:
        Q = truncate_far_part(Q or FieldSpec.zero(), rho, split_radius)
    if Q is None or Q.is_zero:
        values = free_amplitude_grid(f, [kk], directions)[0]
        return FarFieldAmplitude(k=ComplexWavenumber.from_complex(kk), directions=directions,
                                 weights=weights, values=values, rho=rho)

    if Q.reach is None:
        raise ParameterError("a potential without compact support needs a truncation radius rho")
    radii = np.asarray(DEFAULT_EXTRACTION_RADII if radii is None else radii, dtype=float)
    if radii.min() <= Q.reach:
        raise ParameterError(
            f"extraction radii must lie beyond the potential support {Q.reach:.3g}, got min {radii.min():.3g}"
        )

    kw = ComplexWavenumber(kk.real, max(kk.imag, delta_proxy))
    table = solve_resolvent(kw, Q, f, directions, radii, tol=tol, settings=settings)
    values = np.empty(len(directions), dtype=complex)
    residual = 0.0
    for i in range(len(directions)):
        values[i], res = extract_amplitude(table, i)
        residual = max(residual, res)
    logger.info(f"far field at k={kw.k:.4g}: |A|_2={np.sqrt(np.sum(weights * np.abs(values) ** 2)):.6e}, "
                f"residual={residual:.2e}, rho={rho}")
    return FarFieldAmplitude(k=kw, directions=directions, weights=weights, values=values,
                             radii=radii, residual=residual,
                             delta_proxy=kw.delta if kk.imag < delta_proxy else 0.0, rho=rho)


def spectral_density(A: FarFieldAmplitude, k: Optional[float] = None) -> SpectralDensitySample:
    """σ'_f(k²) = k π⁻¹ ‖A(k, ·)‖²_{L²(Σ)}"""
    k = A.k.tau if k is None else float(k)
    if not k > 0:
        raise ParameterError(f"spectral density needs k > 0, got {k}")
    return SpectralDensitySample(E=k * k, density=k / np.pi * A.l2_norm_sq, k=k,
                                 delta_proxy=A.delta_proxy)
