"""
求积模块

球面乘积规则、奇性球积分、阻尼外部积分、双中心积分与球壳插值网格
"""

from .types import QuadratureSpec, QuadratureResult, RegionTag
from .rules import (
    gauss_legendre, gauss_laguerre, composite_gauss, sphere_rule, refine_until
)
from .sphere import integrate_sphere
from .ball import (
    integrate_ball, integrate_ball_singular, integrate_exterior,
    exterior_truncation_radius, exponential_tail, ball_nodes
)
from .two_center import TwoCenterNodes, two_center_nodes, integrate_two_center
from .shells import ShellGrid, ShellField, harmonic_basis, log_radii

__all__ = [
    # 类型
    'QuadratureSpec',
    'QuadratureResult',
    'RegionTag',

    # 规则
    'gauss_legendre',
    'gauss_laguerre',
    'composite_gauss',
    'sphere_rule',
    'refine_until',

    # 积分
    'integrate_sphere',
    'integrate_ball',
    'integrate_ball_singular',
    'integrate_exterior',
    'exterior_truncation_radius',
    'exponential_tail',
    'ball_nodes',
    'TwoCenterNodes',
    'two_center_nodes',
    'integrate_two_center',

    # 球壳网格
    'ShellGrid',
    'ShellField',
    'harmonic_basis',
    'log_radii',
]
