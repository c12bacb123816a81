"""
Green 函数模块

自由核、算子 B(k)、Born 级数、Cl(k) 衰减拟合与截断预解式增长
"""

from .types import (
    BornSettings, GreenEvaluation, ResolventTable, ClassClDecomposition,
    GrowthEstimate, SmallnessCalibration
)
from .kernel import (
    free_green, free_green_points, green_of_distance,
    free_indicator_amplitude, free_indicator_potential
)
from .operator import apply_B, apply_B_many, newton_source, support_radius
from .born import (
    BornSeries, green_series, evaluate_green, born_series_green,
    weighted_deviation, solve_resolvent, calibrate_smallness_constant, DEFAULT_C_CAL
)
from .class_cl import fit_class_cl
from .growth import (
    cutoff_radius, cutoff_resolvent_growth, growth_sweep, fit_growth_exponent,
    is_nondecreasing, octave_sup
)

__all__ = [
    # 类型
    'BornSettings',
    'GreenEvaluation',
    'ResolventTable',
    'ClassClDecomposition',
    'GrowthEstimate',
    'SmallnessCalibration',

    # 自由核
    'free_green',
    'free_green_points',
    'green_of_distance',
    'free_indicator_amplitude',
    'free_indicator_potential',

    # 算子
    'apply_B',
    'apply_B_many',
    'newton_source',
    'support_radius',

    # Born 级数
    'BornSeries',
    'green_series',
    'evaluate_green',
    'born_series_green',
    'weighted_deviation',
    'solve_resolvent',
    'calibrate_smallness_constant',
    'DEFAULT_C_CAL',

    # 衰减分析
    'fit_class_cl',
    'cutoff_radius',
    'cutoff_resolvent_growth',
    'growth_sweep',
    'fit_growth_exponent',
    'is_nondecreasing',
    'octave_sup',
]
