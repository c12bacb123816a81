"""
核心模块

几何类型、波数、统一异常、序列化与随机流
"""

from .types import Point3, ComplexWavenumber, ORIGIN
from .geometry import (
    angle_zeta, angles_between, cube_directions, dyadic_radii,
    orthonormal_frame, as_points, random_directions
)
from .exceptions import (
    LabError, ParameterError, DomainError, InsufficientDataError,
    AccuracyError, DivergenceError
)
from .serialization import to_serializable, canonical_json, format_float
from .random import stream
from .fitting import LinearFit, PowerLawFit, linear_fit, fit_power_law

__all__ = [
    # 类型
    'Point3',
    'ComplexWavenumber',
    'ORIGIN',

    # 几何
    'angle_zeta',
    'angles_between',
    'cube_directions',
    'dyadic_radii',
    'orthonormal_frame',
    'as_points',
    'random_directions',

    # 异常
    'LabError',
    'ParameterError',
    'DomainError',
    'InsufficientDataError',
    'AccuracyError',
    'DivergenceError',

    # 序列化
    'to_serializable',
    'canonical_json',
    'format_float',

    # 随机流
    'stream',

    # 拟合
    'LinearFit',
    'PowerLawFit',
    'linear_fit',
    'fit_power_law',
]

__version__ = '1.0.0'
