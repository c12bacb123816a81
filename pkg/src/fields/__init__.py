"""
场模块

势与向量场的抽象、截断分裂、典型例子、随机化势与 Helmholtz 重构
"""

from .types import (
    FieldKind, FieldSpec, DecayEnvelope, CutoffSplit,
    AndersonPotentialSpec, SignLaw
)
from .exceptions import SpecError
from .cutoff import (
    eval_cutoff, split_field, truncate_far_part, cutoff_profile, cutoff_gradient, GRADIENT_BOUND
)
from .examples import (
    smooth_bump, smooth_bump_derivative, bump_mass,
    build_bump_potential, build_bump_field, build_gaussian_potential,
    build_gaussian_gradient_field, build_example1, example1_potential,
    build_example2, build_proposition_potential, build_ball_indicator
)
from .envelope import (
    estimate_decay_envelope, fit_decay_exponent, is_short_range, refine_radii
)
from .anderson import (
    lattice_centers, default_anderson_spec, draw_signs, sample_anderson,
    anderson_envelope, export_anderson_csv
)
from .helmholtz import (
    HelmholtzResult, helmholtz_parts, helmholtz_reconstruct, helmholtz_field,
    BumpFarKernel, bump_far_kernel
)

__all__ = [
    # 类型
    'FieldKind',
    'FieldSpec',
    'DecayEnvelope',
    'CutoffSplit',
    'AndersonPotentialSpec',
    'SignLaw',
    'SpecError',

    # 截断
    'eval_cutoff',
    'split_field',
    'truncate_far_part',
    'cutoff_profile',
    'cutoff_gradient',
    'GRADIENT_BOUND',

    # 例子
    'smooth_bump',
    'smooth_bump_derivative',
    'bump_mass',
    'build_bump_potential',
    'build_bump_field',
    'build_gaussian_potential',
    'build_gaussian_gradient_field',
    'build_example1',
    'example1_potential',
    'build_example2',
    'build_proposition_potential',
    'build_ball_indicator',

    # 包络
    'estimate_decay_envelope',
    'fit_decay_exponent',
    'is_short_range',
    'refine_radii',

    # 随机化势
    'lattice_centers',
    'default_anderson_spec',
    'draw_signs',
    'sample_anderson',
    'anderson_envelope',
    'export_anderson_csv',

    # Helmholtz 重构
    'HelmholtzResult',
    'helmholtz_parts',
    'helmholtz_reconstruct',
    'helmholtz_field',
    'BumpFarKernel',
    'bump_far_kernel',
]
