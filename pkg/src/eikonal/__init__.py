"""
程函模块

算子 G、相位修正 μ 的 Picard 迭代与 (HJ) 残差
"""

from .exceptions import ContractionError
from .types import EikonalSettings, PhaseCorrection
from .operator import apply_G, apply_G_many, apply_G_result, damping_prefactor, integration_radius
from .picard import picard_iterate_mu, central_gradient, gradient_energy
from .residual import eikonal_residual, hj_residual, central_laplacian

__all__ = [
    # 异常
    'ContractionError',

    # 类型
    'EikonalSettings',
    'PhaseCorrection',

    # 算子
    'apply_G',
    'apply_G_many',
    'apply_G_result',
    'damping_prefactor',
    'integration_radius',

    # 迭代与残差
    'picard_iterate_mu',
    'central_gradient',
    'gradient_energy',
    'eikonal_residual',
    'hj_residual',
    'central_laplacian',
]
