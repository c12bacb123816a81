"""
常数与指数的对数回归
"""
from typing import Tuple

import numpy as np

from ..core.exceptions import InsufficientDataError, ParameterError
from ..core.fitting import LinearFit, linear_fit


def fit_lemma2(deltas: np.ndarray, xs: np.ndarray, lhs: np.ndarray) -> Tuple[float, float, LinearFit]:
    """
    ln LHS + 3 ln δ = ln C - γ·δ|x| 的最小二乘拟合

    返回 (C, γ, 直线拟合)
    """
    deltas = np.asarray(deltas, dtype=float)
    xs = np.asarray(xs, dtype=float)
    lhs = np.asarray(lhs, dtype=float)
    keep = lhs > 0
    if np.count_nonzero(keep) < 3:
        raise InsufficientDataError("lemma 2 fit needs positive values", required=3,
                                    got=int(np.count_nonzero(keep)))
    t = deltas[keep] * xs[keep]
    if np.ptp(t) == 0:
        raise ParameterError("lemma 2 fit needs at least two distinct values of delta*|x|")
    fit = linear_fit(t, np.log(lhs[keep]) + 3.0 * np.log(deltas[keep]))
    return float(np.exp(fit.intercept)), -fit.slope, fit


def cumulative_growth(xs: np.ndarray, ratios: np.ndarray) -> float:
    """
    C(X) = max{ratio : |x| ≤ X}，返回相邻 |x| 之间 C 的最大增长倍数

    界的常数与 |x| 无关时该倍数保持有界
    """
    xs = np.asarray(xs, dtype=float)
    ratios = np.asarray(ratios, dtype=float)
    levels = np.unique(xs)
    running = np.array([np.max(ratios[xs <= X]) for X in levels])
    if len(running) < 2:
        return 1.0
    return float(np.max(running[1:] / running[:-1]))
