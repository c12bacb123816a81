"""
次调和平均值检验与熵下界

ν(s) = ln‖A(s, ·)‖_{L²(Σ)} 在 T 的闭包上次调和，于是

    Σ_bins ν(s) ω(k0, s) ≥ ν(k0)

底边上 ω·ln σ' 的积分给出熵下界。
"""
from typing import Any, Dict, Optional, Sequence, Tuple

import logging

import numpy as np

from ..core.exceptions import DomainError, ParameterError
from ..fields.cutoff import truncate_far_part
from ..fields.types import FieldSpec
from ..quadrature.rules import sphere_rule
from .amplitude import DEFAULT_SPHERE, far_field_amplitude, free_amplitude_grid, spectral_density
from .exceptions import DegenerateSourceError
from .harmonic import DEFAULT_BINS, harmonic_measure
from .types import EntropyCertificate, HarmonicMeasureEstimate, TriangleDomain

logger = logging.getLogger("scattering.entropy")


def _check_aligned(values: np.ndarray, omega: HarmonicMeasureEstimate, what: str) -> None:
    if len(values) != len(omega.counts):
        raise ParameterError(f"{what} has {len(values)} bins, harmonic measure has {len(omega.counts)}")


def subharmonic_test(nu_boundary: Sequence[float], nu_k0: float, omega: HarmonicMeasureEstimate) -> float:
    """gap = Σ ν·质量 - ν(k0)"""
    nu = np.asarray(nu_boundary, dtype=float)
    _check_aligned(nu, omega, "nu_boundary")
    m = omega.masses
    hit = m > 0
    return float(np.sum(nu[hit] * m[hit]) - nu_k0)


def gap_error(nu_boundary: Sequence[float], omega: HarmonicMeasureEstimate) -> float:
    """gap 的蒙特卡罗标准差：落点处 ν 的样本方差 / N"""
    nu = np.asarray(nu_boundary, dtype=float)
    _check_aligned(nu, omega, "nu_boundary")
    m = omega.masses
    hit = m > 0
    if not np.all(np.isfinite(nu[hit])):
        return float("inf")
    mean = np.sum(nu[hit] * m[hit])
    var = max(np.sum(nu[hit] ** 2 * m[hit]) - mean * mean, 0.0)
    return float(np.sqrt(var / omega.n_walkers))


def entropy_lower_bound(densities: Sequence[float], omega: HarmonicMeasureEstimate) -> float:
    """
    Σ_{底边箱} 质量·ln σ'

    densities 与底边的箱一一对应；有质量的箱密度为 0 时返回 -inf
    """
    dens = np.asarray(densities, dtype=float)
    base = omega.masses[omega.base_mask()]
    if len(dens) != len(base):
        raise ParameterError(f"densities has {len(dens)} bins, base edge has {len(base)}")
    if np.any(dens < 0):
        raise ParameterError("spectral densities must be nonnegative")
    hit = base > 0
    if np.any(dens[hit] == 0):
        return float("-inf")
    return float(np.sum(base[hit] * np.log(dens[hit])))


def _amplitude_norms(f: FieldSpec, ks: Sequence[complex], n_theta: int, n_phi: int) -> np.ndarray:
    directions, weights = sphere_rule(n_theta, n_phi)
    A = free_amplitude_grid(f, ks, directions)
    return np.sqrt(np.abs(A) ** 2 @ weights)


def pick_k0(f: FieldSpec, T: TriangleDomain, threshold_rel: float = 1e-6, n_grid: int = 12,
            n_theta: int = DEFAULT_SPHERE[0], n_phi: int = DEFAULT_SPHERE[1]) -> complex:
    """
    扫描 T 的内部网格（自顶点逐行），返回第一个 ‖A₀(k0, ·)‖ > threshold_rel·sup 的点
    """
    grid = T.interior_grid(n_grid)
    norms = _amplitude_norms(f, grid, n_theta, n_phi)
    sup = float(norms.max()) if len(norms) else 0.0
    if not sup > 0:
        raise DegenerateSourceError("free amplitude vanishes on the whole interior grid", sup_norm=sup)
    for k, norm in zip(grid, norms):
        if norm > threshold_rel * sup:
            logger.debug(f"picked k0={k:.4g} with |A0|={norm:.3e} (sup {sup:.3e})")
            return k
    raise DegenerateSourceError("no interior grid point exceeds the amplitude threshold", sup_norm=sup)


def _log_norm(norm: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(norm)


def boundary_nu(f: FieldSpec, omega: HarmonicMeasureEstimate, Q: Optional[FieldSpec] = None,
                nu_stride: Optional[int] = None, n_theta: int = DEFAULT_SPHERE[0],
                n_phi: int = DEFAULT_SPHERE[1], **amplitude_kw) -> np.ndarray:
    """
    各边界箱中心处的 ν = ln‖A(s, ·)‖

    有势场时每个点要解一次预解式，只在每 nu_stride 个箱上求值，其余沿周长线性插值
    """
    points = omega.bin_points
    if Q is None or Q.is_zero:
        return _log_norm(_amplitude_norms(f, points, n_theta, n_phi))

    stride = nu_stride or 8
    centers = omega.bin_centers
    picked = np.arange(0, len(points), stride)
    if picked[-1] != len(points) - 1:
        picked = np.append(picked, len(points) - 1)
    norms = np.array([
        far_field_amplitude(f, complex(points[i]), Q, n_theta, n_phi, **amplitude_kw).l2_norm
        for i in picked
    ])
    return _log_norm(np.interp(centers, centers[picked], norms))


def build_entropy_certificate(f: FieldSpec, T: TriangleDomain, Q: Optional[FieldSpec] = None,
                              k0: Optional[complex] = None, n_walkers: int = 100_000, seed: int = 0,
                              bins_per_edge: int = DEFAULT_BINS, delta_proxy: float = 1e-2,
                              rho: Optional[float] = None, split_radius: float = 1.0,
                              nu_stride: Optional[int] = None, n_theta: int = DEFAULT_SPHERE[0],
                              n_phi: int = DEFAULT_SPHERE[1]) -> EntropyCertificate:
    """
    k0 选取 → 调和测度 → 边界 ν → 平均值检验 → 底边熵积分

    给定 rho 时证书针对 div(χ_ρ Q₂)，Q₂ = (1 - χ_R)Q，R = split_radius
    """
    if rho is not None:
        Q = truncate_far_part(Q or FieldSpec.zero(), rho, split_radius)
    if k0 is None:
        k0 = pick_k0(f, T, n_theta=n_theta, n_phi=n_phi)
    elif not T.contains(complex(k0)):
        raise DomainError(f"k0={k0} is not strictly inside the triangle")
    k0 = complex(k0)

    omega = harmonic_measure(T, k0, n_walkers, seed, bins_per_edge)
    amplitude_kw: Dict[str, Any] = {'delta_proxy': delta_proxy}
    has_potential = Q is not None and not Q.is_zero

    nu = boundary_nu(f, omega, Q, nu_stride, n_theta, n_phi, **amplitude_kw)
    if has_potential:
        nu_k0 = float(np.log(far_field_amplitude(f, k0, Q, n_theta, n_phi, **amplitude_kw).l2_norm))
    else:
        nu_k0 = float(_log_norm(_amplitude_norms(f, [k0], n_theta, n_phi))[0])

    gap = subharmonic_test(nu, nu_k0, omega)
    err = gap_error(nu, omega)

    # 底边箱中心 σ'(k²) = k π⁻¹ e^{2ν}
    base_k = omega.bin_points[omega.base_mask()].real
    base_norm_sq = np.exp(2.0 * nu[omega.base_mask()])
    densities = np.where(base_k > 0, base_k / np.pi * base_norm_sq, 0.0)
    entropy = entropy_lower_bound(densities, omega)
    zero_density = bool(np.isneginf(entropy))
    if zero_density:
        logger.warning("spectral density vanishes on a charged base bin; entropy integral is -inf")

    certificate = EntropyCertificate(
        k0=k0, nu_boundary=nu, nu_k0=nu_k0, mean_value_gap=gap, gap_error=err,
        entropy_integral=entropy, omega=omega, densities=densities, zero_density=zero_density,
        delta_proxy=delta_proxy if has_potential else 0.0, rho=rho,
        provenance={
            'seed': seed,
            'n_walkers': n_walkers,
            'bins_per_edge': bins_per_edge,
            'sphere_rule': [n_theta, n_phi],
            'potential': Q.name if has_potential else None,
            'split_radius': split_radius if rho is not None else None,
            'source': f.name,
            'nu_stride': (nu_stride or 8) if has_potential else 1,
        },
    )
    logger.info(f"entropy certificate: gap={gap:.3e} ± {err:.1e}, entropy={entropy:.6g}, "
                f"holds={certificate.holds}")
    return certificate


def spectral_density_on_base(f: FieldSpec, T: TriangleDomain, n_points: int = 16,
                             Q: Optional[FieldSpec] = None, **amplitude_kw) -> Tuple[np.ndarray, np.ndarray]:
    """底边上等距点处的 (k, σ'(k²))"""
    ks = np.linspace(T.a1, T.a2, n_points + 2)[1:-1]
    ks = ks[ks > 0]
    dens = np.array([spectral_density(far_field_amplitude(f, k, Q, **amplitude_kw), k).density for k in ks])
    return ks, dens
