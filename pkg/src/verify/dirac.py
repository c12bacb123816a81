"""
Dirac 型分解的差分检验

    𝒟 = [[0, L + M_v], [L - M_v, 0]]

作用在 8 分量函数上，L 为一阶微分块、M_v 为乘以 v 分量的块。
𝒟² 的 (1,1) 分量应为 H = -Δ + |v|² + div v；v = ∇ν 时第一行/列其余元素为零。
L 的 ∂_j 用步长 h 的中心差分，复合两次后偏差为 O(h²)。
"""
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import logging

import numpy as np

from ..core.exceptions import InsufficientDataError, ParameterError
from ..core.geometry import as_points
from ..fields.examples import smooth_bump
from ..fields.types import FieldKind, FieldSpec
from .types import DiracConvergence, DiracReport

logger = logging.getLogger("verify.dirac")

PointMap = Callable[[np.ndarray], np.ndarray]

# 试验函数宽度内至少的差分步数
MIN_STEPS_PER_WIDTH = 4

# 低于此值的偏差视为舍入误差
ROUNDOFF_FLOOR = 1e-9

_AXES = np.eye(3)


def _block(entries) -> np.ndarray:
    """(行, 列) -> [(符号, 下标 j)] 转为 (4, 4, 3) 系数张量"""
    tensor = np.zeros((4, 4, 3))
    for (row, col), (sign, j) in entries.items():
        tensor[row, col, j] = sign
    return tensor


# L 中 (r, c) 元素为 ±∂_j
L_BLOCK = _block({
    (0, 1): (-1, 0), (0, 2): (-1, 1), (0, 3): (-1, 2),
    (1, 0): (1, 0), (1, 2): (-1, 2), (1, 3): (1, 1),
    (2, 0): (1, 1), (2, 1): (1, 2), (2, 3): (-1, 0),
    (3, 0): (1, 2), (3, 1): (-1, 1), (3, 2): (1, 0),
})

# M_v 中 (r, c) 元素为 ±v_j
M_BLOCK = _block({
    (0, 1): (-1, 0), (0, 2): (-1, 1), (0, 3): (-1, 2),
    (1, 0): (1, 0), (1, 2): (1, 2), (1, 3): (-1, 1),
    (2, 0): (1, 1), (2, 1): (-1, 2), (2, 3): (1, 0),
    (3, 0): (1, 2), (3, 1): (1, 1), (3, 2): (-1, 0),
})

U_MATRIX = np.array([
    [1, 0, 0, -1j],
    [0, -1j, 1, 0],
    [0, -1j, -1, 0],
    [1, 0, 0, 1j],
], dtype=complex) / np.sqrt(2.0)


def y_matrix() -> np.ndarray:
    """Y = [[0, U], [U, 0]]"""
    Y = np.zeros((8, 8), dtype=complex)
    Y[:4, 4:] = U_MATRIX
    Y[4:, :4] = U_MATRIX
    return Y


def unitary_error() -> float:
    """max(|UUᴴ - I₄|, |YYᴴ - I₈|)"""
    Y = y_matrix()
    eu = np.max(np.abs(U_MATRIX @ U_MATRIX.conj().T - np.eye(4)))
    ey = np.max(np.abs(Y @ Y.conj().T - np.eye(8)))
    return float(max(eu, ey))


@dataclass(frozen=True)
class TrialFunction:
    """带解析 Laplace 的光滑试验函数"""
    value: PointMap
    laplacian: PointMap
    width: float
    name: str = ""


def gaussian_trial_function(width: float = 1.0, center: Sequence[float] = (0.0, 0.0, 0.0)) -> TrialFunction:
    """ψ = exp(-|x-c|²/w²)，Δψ = (4|x-c|²/w⁴ - 6/w²)ψ"""
    if not width > 0:
        raise ParameterError(f"width must be positive, got {width}")
    c = np.asarray(center, dtype=float)

    def value(p):
        return np.exp(-np.sum((p - c) ** 2, axis=1) / width ** 2)

    def laplacian(p):
        r2 = np.sum((p - c) ** 2, axis=1)
        return (4.0 * r2 / width ** 4 - 6.0 / width ** 2) * value(p)

    return TrialFunction(value=value, laplacian=laplacian, width=width, name=f"gaussian(w={width:g})")


def bump_trial_function(radius: float = 2.0, center: Sequence[float] = (0.0, 0.0, 0.0)) -> TrialFunction:
    """ψ = φ(|x-c|/R)，紧支撑；Δψ = (φ'' + 2φ'/ρ)/R²"""
    if not radius > 0:
        raise ParameterError(f"radius must be positive, got {radius}")
    c = np.asarray(center, dtype=float)

    def value(p):
        return smooth_bump(np.linalg.norm(p - c, axis=1) / radius)

    def laplacian(p):
        rho = np.linalg.norm(p - c, axis=1) / radius
        out = np.zeros(len(p))
        inside = rho < 1.0
        q = 1.0 - rho[inside] ** 2
        r2 = rho[inside] ** 2
        phi = smooth_bump(rho[inside])
        # φ'' = [4ρ²/q⁴ - 2/q² - 8ρ²/q³]φ，2φ'/ρ = -4φ/q²
        out[inside] = (4.0 * r2 / q ** 4 - 6.0 / q ** 2 - 8.0 * r2 / q ** 3) * phi / radius ** 2
        return out

    return TrialFunction(value=value, laplacian=laplacian, width=radius, name=f"bump(R={radius:g})")


def apply_dirac(state: PointMap, v: FieldSpec, h: float) -> PointMap:
    """
    𝒟 作用于 8 分量函数 state: (N, 3) -> (N, 8)

    上半输出 (L + M_v)·下半分量，下半输出 (L - M_v)·上半分量
    """
    def out(points: np.ndarray) -> np.ndarray:
        center = state(points)
        grads = np.empty(center.shape + (3,))
        for j, e in enumerate(_AXES):
            grads[:, :, j] = (state(points + h * e) - state(points - h * e)) / (2.0 * h)
        vj = v(points)
        upper, lower = center[:, :4], center[:, 4:]
        L_lower = np.einsum('rcj,ncj->nr', L_BLOCK, grads[:, 4:, :])
        L_upper = np.einsum('rcj,ncj->nr', L_BLOCK, grads[:, :4, :])
        M_lower = np.einsum('rcj,nj,nc->nr', M_BLOCK, vj, lower)
        M_upper = np.einsum('rcj,nj,nc->nr', M_BLOCK, vj, upper)
        return np.concatenate([L_lower + M_lower, L_upper - M_upper], axis=1)

    return out


def _unit_state(psi: PointMap, component: int) -> PointMap:
    def state(points):
        s = np.zeros((len(points), 8))
        s[:, component] = psi(points)
        return s
    return state


def sample_grid(extent: float, n_grid: int) -> np.ndarray:
    """[-extent, extent]³ 上每轴 n_grid 点的立方网格"""
    axis = np.linspace(-extent, extent, n_grid)
    return np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)


def _is_gradient(v: FieldSpec) -> bool:
    return v.is_zero or 'potential' in v.params


def dirac_factorization_check(v: FieldSpec, grid_step: float,
                              test_fn: Optional[TrialFunction] = None,
                              extent: float = 1.5, n_grid: int = 9,
                              gradient: Optional[bool] = None) -> DiracReport:
    """
    在立方采样网格上比较 (𝒟²ψe₁)₁ 与 Hψ

    deviation 为 max|(𝒟²ψe₁)₁ - (-Δψ + (|v|² + div v)ψ)|，Δψ 与 div v 取解析值；
    off_diagonal 为第一行 (𝒟²ψe₁)_{2..4} 与第一列 (𝒟²ψe_i)₁ (i = 2..4) 的最大模。
    试验函数宽度内差分步数少于 MIN_STEPS_PER_WIDTH 时抛 InsufficientDataError
    """
    if v.kind is not FieldKind.VECTOR:
        raise ParameterError("dirac check needs a vector field v")
    if not grid_step > 0:
        raise ParameterError(f"grid_step must be positive, got {grid_step}")
    test_fn = test_fn or gaussian_trial_function()
    steps = int(test_fn.width / grid_step)
    if steps < MIN_STEPS_PER_WIDTH:
        raise InsufficientDataError("grid too coarse for the test function",
                                    required=MIN_STEPS_PER_WIDTH, got=steps)
    gradient = _is_gradient(v) if gradient is None else gradient

    points = as_points(sample_grid(extent, n_grid))
    psi = test_fn.value(points)
    vv = v(points)
    H_psi = -test_fn.laplacian(points) + (np.sum(vv * vv, axis=1) + v.div(points)) * psi

    first = apply_dirac(apply_dirac(_unit_state(test_fn.value, 0), v, grid_step), v, grid_step)(points)
    deviation = float(np.max(np.abs(first[:, 0] - H_psi)))
    off = float(np.max(np.abs(first[:, 1:4])))
    for i in (1, 2, 3):
        column = apply_dirac(apply_dirac(_unit_state(test_fn.value, i), v, grid_step), v, grid_step)(points)
        off = max(off, float(np.max(np.abs(column[:, 0]))))

    report = DiracReport(
        grid_step=grid_step, n_points=len(points), deviation=deviation, off_diagonal=off,
        gradient_case=gradient, unitary_error=unitary_error(),
        trial_function=test_fn.name, field_name=v.name,
    )
    logger.debug(f"dirac check h={grid_step:g}: deviation={deviation:.3e}, off-diagonal={off:.3e}")
    return report


def dirac_convergence(v: FieldSpec, steps: Sequence[float] = (0.1, 0.05),
                      test_fn: Optional[TrialFunction] = None, **kwargs) -> DiracConvergence:
    """依次减半的步长上做检验，报告相邻偏差之比（二阶时约为 4）"""
    if len(steps) < 2:
        raise InsufficientDataError("convergence needs at least two steps", required=2, got=len(steps))
    reports = [dirac_factorization_check(v, h, test_fn, **kwargs) for h in steps]

    def ratios(attr):
        out = []
        for a, b in zip(reports, reports[1:]):
            lo = getattr(b, attr)
            out.append(getattr(a, attr) / lo if lo > ROUNDOFF_FLOOR else float("nan"))
        return out

    result = DiracConvergence(reports=reports, deviation_ratios=ratios('deviation'),
                              off_diagonal_ratios=ratios('off_diagonal'))
    logger.info(f"dirac convergence for {v.name or 'v'}: deviation ratios "
                f"{np.round(result.deviation_ratios, 3).tolist()}, "
                f"off-diagonal ratios {np.round(result.off_diagonal_ratios, 3).tolist()}")
    return result
