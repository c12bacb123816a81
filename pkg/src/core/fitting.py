"""
对数数据上的最小二乘拟合
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import InsufficientDataError


@dataclass
class LinearFit:
    """y ≈ intercept + slope·x"""
    slope: float
    intercept: float
    r_squared: float
    n_points: int
    slope_stderr: float = float("nan")


@dataclass
class PowerLawFit:
    """y ≈ prefactor·x^{-exponent}"""
    exponent: float
    prefactor: float
    r_squared: float
    n_points: int
    exponent_stderr: float = float("nan")

    @property
    def reliable(self) -> bool:
        return bool(np.isfinite(self.exponent) and self.r_squared >= 0.9)


def linear_fit(x: np.ndarray, y: np.ndarray, weights: Optional[np.ndarray] = None) -> LinearFit:
    """(加权) 普通最小二乘直线拟合"""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2:
        raise InsufficientDataError("linear fit needs at least 2 points", required=2, got=len(x))
    w = np.ones_like(x) if weights is None else np.asarray(weights, dtype=float)
    A = np.stack([np.ones_like(x), x], axis=1)
    sw = np.sqrt(w)
    coef, *_ = np.linalg.lstsq(A * sw[:, None], y * sw, rcond=None)
    pred = A @ coef
    ybar = np.sum(w * y) / np.sum(w)
    ss_res = float(np.sum(w * (y - pred) ** 2))
    ss_tot = float(np.sum(w * (y - ybar) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0

    stderr = float("nan")
    if len(x) > 2:
        xbar = np.sum(w * x) / np.sum(w)
        sxx = float(np.sum(w * (x - xbar) ** 2))
        if sxx > 0:
            stderr = float(np.sqrt(ss_res / (len(x) - 2) / sxx))
    return LinearFit(slope=float(coef[1]), intercept=float(coef[0]), r_squared=r2,
                     n_points=len(x), slope_stderr=stderr)


def fit_power_law(x: np.ndarray, y: np.ndarray, weights: Optional[np.ndarray] = None) -> PowerLawFit:
    """
    log y 对 log x 的直线拟合，返回衰减指数（斜率取负）

    y 中的非正值不参与拟合
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = (x > 0) & (y > 0) & np.isfinite(y)
    if weights is not None:
        weights = np.asarray(weights, dtype=float)[keep]
    if np.count_nonzero(keep) < 2:
        return PowerLawFit(exponent=float("nan"), prefactor=0.0, r_squared=float("nan"),
                           n_points=int(np.count_nonzero(keep)))
    fit = linear_fit(np.log(x[keep]), np.log(y[keep]), weights)
    return PowerLawFit(exponent=-fit.slope, prefactor=float(np.exp(fit.intercept)),
                       r_squared=fit.r_squared, n_points=fit.n_points,
                       exponent_stderr=fit.slope_stderr)
