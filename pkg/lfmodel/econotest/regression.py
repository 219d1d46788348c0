# -*- coding: utf-8 -*-
"""
检验用的最小二乘工具

单位根与协整检验共享的回归、确定性项与滞后差分矩阵构造。
"""

import logging
from enum import Enum
from typing import NamedTuple

import numpy as np

from lfmodel.core.errors import InsufficientLength, SingularRegression

logger = logging.getLogger(__name__)

# 残差平方和相对 y'y 低于该值视为完全拟合
PERFECT_FIT_TOL = 1e-20


class Deterministic(str, Enum):
    """检验回归中的确定性项"""

    NONE = "NONE"
    CONSTANT = "CONSTANT"
    CONSTANT_TREND = "CONSTANT_TREND"


class OLSResult(NamedTuple):
    beta: np.ndarray
    se: np.ndarray
    resid: np.ndarray
    sigma2: float
    nobs: int


def deterministic_terms(nobs: int, deterministic: Deterministic) -> np.ndarray:
    """确定性项矩阵 (nobs × k)，k ∈ {0, 1, 2}"""
    if deterministic == Deterministic.NONE:
        return np.empty((nobs, 0))
    const = np.ones((nobs, 1))
    if deterministic == Deterministic.CONSTANT:
        return const
    trend = np.arange(1, nobs + 1, dtype=float).reshape(-1, 1)
    return np.hstack([const, trend])


def lagged_differences(dy: np.ndarray, lags: int, rows: int) -> np.ndarray:
    """
    滞后差分矩阵

    结果第 i 行对应 dy[lags + i]，列为 dy[lags + i − 1], ..., dy[i]。
    """
    if lags == 0:
        return np.empty((rows, 0))
    return np.column_stack([dy[lags - j : lags - j + rows] for j in range(1, lags + 1)])


def ols(y: np.ndarray, X: np.ndarray) -> OLSResult:
    """
    最小二乘并给出系数标准误

    Raises:
        SingularRegression: 设计矩阵秩亏，或残差恒为零
        InsufficientLength: 自由度不足
    """
    nobs, k = X.shape
    if nobs <= k:
        raise InsufficientLength(f"regression has {nobs} rows for {k} regressors")
    if k == 0 or np.linalg.matrix_rank(X) < k:
        raise SingularRegression(f"design matrix ({nobs}×{k}) is rank deficient")

    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ beta
    rss = float(resid @ resid)
    scale = max(float(y @ y), 1.0)
    if rss <= PERFECT_FIT_TOL * scale:
        raise SingularRegression("regression fits exactly; residual variance is zero")

    sigma2 = rss / (nobs - k)
    cov = sigma2 * np.linalg.inv(X.T @ X)
    se = np.sqrt(np.diag(cov))
    return OLSResult(beta=beta, se=se, resid=resid, sigma2=sigma2, nobs=nobs)
