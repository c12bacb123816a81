"""
自由 Laplace 算子的 Green 核

    G⁰_z(x, y) = e^{ik|x-y|} / (4π|x-y|),  z = k²
"""
import numpy as np

from ..core.exceptions import DomainError
from ..core.geometry import as_points
from ..core.types import ComplexWavenumber, Point3


def free_green(x: Point3, y: Point3, k: ComplexWavenumber) -> complex:
    """单点闭式值；x = y 时抛出 DomainError"""
    r = x.distance(y)
    if r == 0.0:
        raise DomainError(f"free Green kernel is singular at x = y = {x.to_tuple()}")
    return complex(np.exp(1j * k.k * r) / (4.0 * np.pi * r))


def green_of_distance(r: np.ndarray, k: complex) -> np.ndarray:
    """按距离向量化求值，调用方保证 r > 0"""
    r = np.asarray(r, dtype=float)
    return np.exp(1j * k * r) / (4.0 * np.pi * r)


def free_green_points(points: np.ndarray, y: np.ndarray, k: complex) -> np.ndarray:
    """G⁰(points, y)，points 形状 (N, 3)"""
    pts = as_points(points)
    r = np.linalg.norm(pts - np.asarray(y, dtype=float).reshape(3), axis=1)
    if np.any(r == 0.0):
        raise DomainError("free Green kernel evaluated at its source point")
    return green_of_distance(r, k)


def free_indicator_amplitude(k: complex) -> complex:
    """
    单位球示性函数的外场振幅：|x| > 1 时

        ∫_{|y|<1} G⁰(x, y) dy = e^{ik|x|} (sin k - k cos k) / (k³ |x|)

    k → 0 时取极限 1/3
    """
    k = complex(k)
    if abs(k) < 1e-4:
        return complex(1.0 / 3.0 - k * k / 30.0)
    return (np.sin(k) - k * np.cos(k)) / k ** 3


def free_indicator_potential(points: np.ndarray, k: complex) -> np.ndarray:
    """
    u0(x) = ∫_{|y|<1} G⁰(x, y) dy 的闭式

    |x| > 1 见 free_indicator_amplitude；|x| ≤ 1 时
    u0 = [(1 - ik) e^{ik} sin(kr)/(kr) - 1] / k²
    """
    pts = as_points(points)
    k = complex(k)
    r = np.linalg.norm(pts, axis=1)
    out = np.empty(len(r), dtype=complex)
    outside = r > 1.0
    out[outside] = free_indicator_amplitude(k) * np.exp(1j * k * r[outside]) / r[outside]
    ri = r[~outside]
    kr = k * ri
    sinc = np.where(np.abs(kr) > 1e-8, np.sin(kr) / np.where(kr == 0, 1.0, kr), 1.0)
    out[~outside] = ((1.0 - 1j * k) * np.exp(1j * k) * sinc - 1.0) / (k * k)
    return out
