# -*- coding: utf-8 -*-
"""
拟合优度与对照估计

- fit_ols: 普通最小二乘（用于与累积曲线法比较斜率偏差）
- goodness: 动态 R² 与累积 R²
- rmsfe: 固定步长预测误差
- cumulative_errors: 累积曲线的绝对/相对误差随时间的变化
"""

import logging
from typing import NamedTuple, Tuple

import numpy as np

from lfmodel.core import Series, Unit, align, cumulative
from lfmodel.core.errors import (
    DegenerateInput,
    EmptyOverlap,
    InsufficientOverlap,
    InvalidArgument,
    ZeroVariance,
)

logger = logging.getLogger(__name__)


class OLSFit(NamedTuple):
    slope: float
    intercept: float
    r2: float


class Goodness(NamedTuple):
    r2_dynamic: float
    r2_cumulative: float


def _r2(observed: np.ndarray, predicted: np.ndarray, what: str) -> float:
    # 常数序列的 ss_tot 受舍入影响不一定为 0，按极差判定
    if float(np.ptp(observed)) == 0.0:
        raise ZeroVariance(f"{what}: observed series has zero variance")
    ss_tot = float(np.sum((observed - observed.mean()) ** 2))
    ss_res = float(np.sum((observed - predicted) ** 2))
    return 1.0 - ss_res / ss_tot


def fit_ols(observed: Series, input: Series, lag: int = 0) -> OLSFit:
    """
    观测值对滞后输入的最小二乘回归

    Raises:
        InsufficientOverlap: 对齐后少于 3 个点
        DegenerateInput: 输入没有方差
    """
    y, x = align(observed, input, lag)
    if len(y) < 3:
        raise InsufficientOverlap(f"OLS needs >= 3 aligned points, got {len(y)}")
    y.require_complete("OLS observed")
    x.require_complete("OLS input")

    xv, yv = x.values, y.values
    if float(np.ptp(xv)) == 0.0:
        raise DegenerateInput(f"input '{input.role}' has zero variance")

    A = np.column_stack([xv, np.ones(len(xv))])
    (slope, intercept), *_ = np.linalg.lstsq(A, yv, rcond=None)
    fitted = A @ np.array([slope, intercept])
    ss_tot = float(np.sum((yv - yv.mean()) ** 2))
    ss_res = float(np.sum((yv - fitted) ** 2))
    r2 = 1.0 if float(np.ptp(yv)) == 0.0 else 1.0 - ss_res / ss_tot
    return OLSFit(float(slope), float(intercept), float(r2))


def goodness(observed: Series, predicted: Series) -> Goodness:
    """
    动态与累积 R²

    r2_dynamic = 1 − SS_res/SS_tot（残差取原始差值，不去均值）；
    r2_cumulative 对公共区间上的累积曲线用同一公式。
    """
    try:
        obs, pred = align(observed, predicted, 0)
    except EmptyOverlap as e:
        raise InsufficientOverlap(str(e)) from e
    if len(obs) < 3:
        raise InsufficientOverlap(f"goodness needs >= 3 common points, got {len(obs)}")

    r2_dyn = _r2(obs.values, pred.values, "dynamic R²")
    r2_cum = _r2(cumulative(obs).values, cumulative(pred).values, "cumulative R²")
    return Goodness(r2_dyn, r2_cum)


def rmsfe(observed: Series, predicted: Series, horizon: int) -> float:
    """
    预测均方根误差

    predicted 为提前 horizon 期做出的预测；只在公共区间上计算。
    """
    if horizon < 0:
        raise InvalidArgument(f"horizon must be >= 0, got {horizon}")
    obs, pred = align(observed, predicted, 0)
    obs.require_complete("RMSFE observed")
    pred.require_complete("RMSFE predicted")
    value = float(np.sqrt(np.mean((obs.values - pred.values) ** 2)))
    logger.info(f"[Score] RMSFE at horizon {horizon}: {value:.6f} over {len(obs)} point(s)")
    return value


def cumulative_errors(observed: Series, predicted: Series) -> Tuple[Series, Series]:
    """
    累积曲线误差

    Returns:
        (absolute, relative)：|ΣO − ΣP| 以及其相对 |ΣO| 的比值（ΣO 为 0 处记为缺失）
    """
    obs, pred = align(observed, predicted, 0)
    cum_obs = cumulative(obs).values
    cum_pred = cumulative(pred).values
    absolute = np.abs(cum_obs - cum_pred)
    with np.errstate(divide="ignore", invalid="ignore"):
        relative = np.where(cum_obs != 0, absolute / np.abs(cum_obs), np.nan)
    return (
        obs.replace(values=absolute, unit=Unit.INDEX, role=f"{obs.role}_CUM_ABS_ERR"),
        obs.replace(values=relative, unit=Unit.INDEX, role=f"{obs.role}_CUM_REL_ERR"),
    )
