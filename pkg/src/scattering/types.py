"""
散射模块的数据类型定义
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..core.exceptions import ParameterError
from ..core.serialization import to_serializable
from ..core.types import ComplexWavenumber


@dataclass
class FarFieldAmplitude:
    """A(k, θ) 在球面求积网格上的值"""
    k: ComplexWavenumber
    directions: np.ndarray          # (M, 3)
    weights: np.ndarray             # (M,)，和为 4π
    values: np.ndarray              # (M,) complex
    radii: Optional[np.ndarray] = None
    residual: float = 0.0
    delta_proxy: float = 0.0
    rho: Optional[float] = None

    def __post_init__(self):
        self.directions = np.atleast_2d(np.asarray(self.directions, dtype=float))
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        self.values = np.asarray(self.values, dtype=complex).reshape(-1)
        if not len(self.directions) == len(self.weights) == len(self.values):
            raise ParameterError("directions, weights and values must have equal length")

    @property
    def l2_norm_sq(self) -> float:
        """‖A(k, ·)‖²_{L²(Σ)}"""
        return float(np.sum(self.weights * np.abs(self.values) ** 2))

    @property
    def l2_norm(self) -> float:
        return float(np.sqrt(self.l2_norm_sq))

    def scaled(self, factor: complex) -> "FarFieldAmplitude":
        return FarFieldAmplitude(k=self.k, directions=self.directions, weights=self.weights,
                                 values=factor * self.values, radii=self.radii,
                                 residual=self.residual, delta_proxy=self.delta_proxy, rho=self.rho)

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable({
            'k': self.k.k,
            'n_directions': len(self.values),
            'l2_norm_sq': self.l2_norm_sq,
            'residual': self.residual,
            'delta_proxy': self.delta_proxy,
            'rho': self.rho,
            'radii': self.radii,
        })


@dataclass(frozen=True)
class SpectralDensitySample:
    """σ'_f(E)，E = k²"""
    E: float
    density: float
    k: float
    delta_proxy: float = 0.0

    def __post_init__(self):
        if self.density < 0:
            raise ParameterError(f"spectral density must be >= 0, got {self.density}")


@dataclass(frozen=True)
class TriangleDomain:
    """
    上半平面内的等腰三角形

    底边 I = [a1, a2] 在实轴上，两个底角均为 π/γ1（γ1 > 2）。
    边按逆时针排列：I（s1→s2）、I1（s2→顶点）、I2（顶点→s1）
    """
    a1: float
    a2: float
    gamma1: float

    def __post_init__(self):
        if not self.a2 > self.a1:
            raise ParameterError(f"need a1 < a2, got [{self.a1}, {self.a2}]")
        if not self.gamma1 > 2:
            raise ParameterError(f"base angles pi/gamma1 need gamma1 > 2, got {self.gamma1}")

    @property
    def s1(self) -> complex:
        return complex(self.a1, 0.0)

    @property
    def s2(self) -> complex:
        return complex(self.a2, 0.0)

    @property
    def apex(self) -> complex:
        half = 0.5 * (self.a2 - self.a1)
        return complex(0.5 * (self.a1 + self.a2), half * np.tan(np.pi / self.gamma1))

    @property
    def vertices(self) -> Tuple[complex, complex, complex]:
        return (self.s1, self.s2, self.apex)

    @property
    def edges(self) -> List[Tuple[complex, complex]]:
        s1, s2, top = self.vertices
        return [(s1, s2), (s2, top), (top, s1)]

    @property
    def edge_lengths(self) -> np.ndarray:
        return np.array([abs(b - a) for a, b in self.edges])

    @property
    def perimeter(self) -> float:
        return float(self.edge_lengths.sum())

    @property
    def diameter(self) -> float:
        return float(self.edge_lengths.max())

    @property
    def centroid(self) -> complex:
        return sum(self.vertices) / 3.0

    def contains(self, z: complex) -> bool:
        """严格内部"""
        return bool(self.distance_to_boundary(np.array([z]))[0] > 0 and self._inside(np.array([z]))[0])

    def _inside(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        inside = np.ones(z.shape, dtype=bool)
        for a, b in self.edges:
            # 逆时针：内部在每条边的左侧
            cross = ((b - a).conjugate() * (z - a)).imag
            inside &= cross > 0
        return inside

    def project(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        到边界的距离、最近点所在边的编号、沿该边的弧长参数
        """
        z = np.asarray(z, dtype=complex)
        best = np.full(z.shape, np.inf)
        edge = np.zeros(z.shape, dtype=int)
        along = np.zeros(z.shape)
        for j, (a, b) in enumerate(self.edges):
            d = b - a
            length = abs(d)
            t = np.clip(((z - a) * d.conjugate()).real / (length * length), 0.0, 1.0)
            dist = np.abs(z - (a + t * d))
            closer = dist < best
            best = np.where(closer, dist, best)
            edge = np.where(closer, j, edge)
            along = np.where(closer, t * length, along)
        return best, edge, along

    def distance_to_boundary(self, z: np.ndarray) -> np.ndarray:
        return self.project(z)[0]

    def boundary_point(self, s: np.ndarray) -> np.ndarray:
        """周长参数 s ∈ [0, perimeter) 对应的边界点"""
        s = np.asarray(s, dtype=float)
        offsets = np.concatenate([[0.0], np.cumsum(self.edge_lengths)])
        out = np.empty(s.shape, dtype=complex)
        for j, (a, b) in enumerate(self.edges):
            mask = (s >= offsets[j]) & (s <= offsets[j + 1])
            out[mask] = a + (s[mask] - offsets[j]) / self.edge_lengths[j] * (b - a)
        return out

    def interior_grid(self, n: int) -> List[complex]:
        """
        内部扫描网格：自顶点向下逐行，每行从左到右

        第 i 行高度 h(1 - i/n)，i = 1..n-1，行内取 i 个等距内点
        """
        if n < 2:
            raise ParameterError(f"grid size must be >= 2, got {n}")
        top = self.apex
        points = []
        for i in range(1, n):
            y = top.imag * (1.0 - i / n)
            x_lo = self.a1 + y / np.tan(np.pi / self.gamma1)
            x_hi = self.a2 - y / np.tan(np.pi / self.gamma1)
            for j in range(1, i + 1):
                points.append(complex(x_lo + (x_hi - x_lo) * j / (i + 1), y))
        return points

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable({
            'a1': self.a1,
            'a2': self.a2,
            'gamma1': self.gamma1,
            'apex': self.apex,
        })


@dataclass
class HarmonicMeasureEstimate:
    """ω(k0, ·) 在边界弧长分箱上的蒙特卡罗估计"""
    domain: TriangleDomain
    k0: complex
    bins_per_edge: int
    counts: np.ndarray              # (3·bins_per_edge,)
    n_walkers: int
    seed: int
    n_stalled: int = 0

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64).reshape(-1)
        if len(self.counts) != 3 * self.bins_per_edge:
            raise ParameterError("counts must hold bins_per_edge bins for each of the three edges")

    @property
    def masses(self) -> np.ndarray:
        return self.counts / float(self.n_walkers)

    @property
    def errors(self) -> np.ndarray:
        """每箱的二项标准差"""
        p = self.masses
        return np.sqrt(p * (1.0 - p) / self.n_walkers)

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    @property
    def total_error(self) -> float:
        p = self.total_mass
        return float(np.sqrt(max(p * (1.0 - p), 1.0 / self.n_walkers) / self.n_walkers))

    @property
    def bin_edge(self) -> np.ndarray:
        """每箱所在的边"""
        return np.repeat(np.arange(3), self.bins_per_edge)

    @property
    def bin_widths(self) -> np.ndarray:
        return np.repeat(self.domain.edge_lengths / self.bins_per_edge, self.bins_per_edge)

    @property
    def bin_centers(self) -> np.ndarray:
        """箱中心的周长参数"""
        offsets = np.concatenate([[0.0], np.cumsum(self.domain.edge_lengths)])[:3]
        local = (np.arange(self.bins_per_edge) + 0.5) / self.bins_per_edge
        return (offsets[:, None] + local[None, :] * self.domain.edge_lengths[:, None]).reshape(-1)

    @property
    def bin_points(self) -> np.ndarray:
        return self.domain.boundary_point(self.bin_centers)

    @property
    def density(self) -> np.ndarray:
        """质量 / 箱宽"""
        return self.masses / self.bin_widths

    def edge_masses(self) -> np.ndarray:
        return self.masses.reshape(3, self.bins_per_edge).sum(axis=1)

    def base_mask(self) -> np.ndarray:
        return self.bin_edge == 0

    def rows(self):
        """CSV 行：边、周长参数、质量、误差"""
        for e, s, m, err in zip(self.bin_edge, self.bin_centers, self.masses, self.errors):
            yield int(e), float(s), float(m), float(err)

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable({
            'domain': self.domain.to_dict(),
            'k0': self.k0,
            'bins_per_edge': self.bins_per_edge,
            'n_walkers': self.n_walkers,
            'seed': self.seed,
            'n_stalled': self.n_stalled,
            'total_mass': self.total_mass,
            'edge_masses': self.edge_masses(),
        })


@dataclass
class EntropyCertificate:
    """次调和平均值检验与熵下界"""
    k0: complex
    nu_boundary: np.ndarray
    nu_k0: float
    mean_value_gap: float
    gap_error: float
    entropy_integral: float
    omega: HarmonicMeasureEstimate
    densities: np.ndarray
    zero_density: bool = False
    delta_proxy: float = 0.0
    rho: Optional[float] = None
    provenance: Dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        """gap ≥ -3σ"""
        return bool(self.mean_value_gap >= -3.0 * self.gap_error)

    def to_dict(self) -> Dict[str, Any]:
        return to_serializable({
            'k0': self.k0,
            'nu_k0': self.nu_k0,
            'mean_value_gap': self.mean_value_gap,
            'gap_error': self.gap_error,
            'holds': self.holds,
            'entropy_integral': self.entropy_integral,
            'zero_density': self.zero_density,
            'delta_proxy': self.delta_proxy,
            'rho': self.rho,
            'omega': self.omega.to_dict(),
            'provenance': self.provenance,
        })
