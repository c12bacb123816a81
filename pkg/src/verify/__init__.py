"""
验证模块

辅助积分估计的扫描、Dirac 型分解、随机化势的矩与衰减统计、V = γ div Q + |Q|² 时 H 的正性
"""

from .types import (
    BoundSweepReport, DiracReport, DiracConvergence,
    AndersonDecayReport, MomentReport, PositivityReport
)
from .regression import fit_lemma2, cumulative_growth
from ..core.fitting import fit_power_law
from .lemmas import (
    lemma1_sweep, lemma1_integrals, lemma1_shapes, sphere_damping_exact,
    lemma2_sweep, upsilon_integral, DEFAULT_DELTAS, DEFAULT_RHOS, DEFAULT_XS
)
from .dirac import (
    TrialFunction, gaussian_trial_function, bump_trial_function, apply_dirac,
    dirac_factorization_check, dirac_convergence, unitary_error, y_matrix,
    L_BLOCK, M_BLOCK, U_MATRIX
)
from .anderson_stats import (
    anderson_decay_stats, moment_bound_check, far_part_operator,
    far_part_differential, sign_matrix, default_k_points, DEFAULT_ANDERSON_RADII
)
from .positivity import proposition_form_check, quadratic_form, random_trial_function

__all__ = [
    # 类型
    'BoundSweepReport',
    'DiracReport',
    'DiracConvergence',
    'AndersonDecayReport',
    'MomentReport',
    'PositivityReport',

    # 回归
    'fit_lemma2',
    'fit_power_law',
    'cumulative_growth',

    # 积分估计
    'lemma1_sweep',
    'lemma1_integrals',
    'lemma1_shapes',
    'sphere_damping_exact',
    'lemma2_sweep',
    'upsilon_integral',
    'DEFAULT_DELTAS',
    'DEFAULT_RHOS',
    'DEFAULT_XS',

    # Dirac 型分解
    'TrialFunction',
    'gaussian_trial_function',
    'bump_trial_function',
    'apply_dirac',
    'dirac_factorization_check',
    'dirac_convergence',
    'unitary_error',
    'y_matrix',
    'L_BLOCK',
    'M_BLOCK',
    'U_MATRIX',

    # 随机化势
    'anderson_decay_stats',
    'moment_bound_check',
    'far_part_operator',
    'far_part_differential',
    'sign_matrix',
    'default_k_points',
    'DEFAULT_ANDERSON_RADII',

    # 正性
    'proposition_form_check',
    'quadratic_form',
    'random_trial_function',
]
