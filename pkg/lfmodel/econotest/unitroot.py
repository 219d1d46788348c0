# -*- coding: utf-8 -*-
"""
单位根检验

- adf_test: 增广 Dickey-Fuller
- pp_test: Phillips-Perron（Bartlett 核长期方差修正）
- dfgls_test / dfgls_sweep: GLS 去均值后的 DF 检验

所有检验均为左尾：统计量小于临界值即拒绝单位根原假设。
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from lfmodel.core import Series
from lfmodel.core.errors import InsufficientLength, InvalidArgument
from lfmodel.econotest.critical import LEVELS, CriticalTest, critical_values
from lfmodel.econotest.regression import (
    Deterministic,
    deterministic_terms,
    lagged_differences,
    ols,
)

logger = logging.getLogger(__name__)

# ========== 样本量下限 ==========
ADF_MIN_EXTRA = 10  # ADF: n ≥ lags + 10
DFGLS_MIN_EXTRA = 15  # DF-GLS: n ≥ lags + 15
PP_MIN_LENGTH = 20

# DF-GLS 常数项情形的局部单位根参数：ᾱ = 1 − DFGLS_C / n
DFGLS_C = 7.0

DEFAULT_DFGLS_MAX_LAGS = 12


class UnitRootTest(str, Enum):
    ADF = "ADF"
    DFGLS = "DFGLS"
    PP = "PP"


@dataclass
class UnitRootReport:
    """
    单位根检验报告

    reject_at[ℓ] = stat_t < critical[ℓ]；ρ 形式的统计量有单独的临界值与判定。
    """

    test: UnitRootTest
    stat_t: float
    lags: int
    deterministic: Deterministic
    nobs: int
    critical: Dict[str, float]
    stat_rho: Optional[float] = None
    critical_rho: Optional[Dict[str, float]] = None
    table: str = ""
    reject_at: Dict[str, bool] = field(default_factory=dict)
    reject_rho_at: Optional[Dict[str, bool]] = None

    def __post_init__(self):
        self.reject_at = {lv: bool(self.stat_t < self.critical[lv]) for lv in LEVELS}
        if self.stat_rho is not None and self.critical_rho is not None:
            self.reject_rho_at = {
                lv: bool(self.stat_rho < self.critical_rho[lv]) for lv in LEVELS
            }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "test": self.test.value,
            "table": self.table,
            "stat_t": self.stat_t,
            "stat_rho": self.stat_rho,
            "lags": self.lags,
            "deterministic": self.deterministic.value,
            "nobs": self.nobs,
            "critical": dict(self.critical),
            "critical_rho": None if self.critical_rho is None else dict(self.critical_rho),
            "reject_at": dict(self.reject_at),
            "reject_rho_at": None if self.reject_rho_at is None else dict(self.reject_rho_at),
        }


# ============================================================================
# DF 回归
# ============================================================================


@dataclass
class _DFRegression:
    gamma: float  # y(t−1) 的系数 ρ̂ − 1
    se: float
    phi_sum: float  # 滞后差分系数之和
    resid: np.ndarray
    sigma2: float
    nobs: int

    @property
    def t(self) -> float:
        return self.gamma / self.se


def _df_regression(y: np.ndarray, lags: int, deterministic: Deterministic) -> _DFRegression:
    """Δy(t) 对 y(t−1)、Δy(t−1..t−lags) 与确定性项回归"""
    dy = np.diff(y)
    rows = len(dy) - lags
    X = np.column_stack(
        [
            y[lags:-1],
            lagged_differences(dy, lags, rows),
            deterministic_terms(rows, deterministic),
        ]
    )
    fit = ols(dy[lags:], X)
    return _DFRegression(
        gamma=float(fit.beta[0]),
        se=float(fit.se[0]),
        phi_sum=float(np.sum(fit.beta[1 : 1 + lags])),
        resid=fit.resid,
        sigma2=fit.sigma2,
        nobs=fit.nobs,
    )


def _values(s: Series) -> np.ndarray:
    s.require_complete("unit-root input")
    return np.asarray(s.values, dtype=float)


def _check_lags(lags: int):
    if lags < 0:
        raise InvalidArgument(f"lags must be >= 0, got {lags}")


# ============================================================================
# ADF
# ============================================================================


def adf_test(
    s: Series,
    lags: int = 0,
    deterministic: Deterministic = Deterministic.CONSTANT,
    table: CriticalTest = CriticalTest.ADF,
) -> UnitRootReport:
    """
    增广 Dickey-Fuller 检验

    stat_t 为 y(t−1) 系数的 t 值；ρ 形式为 nobs·γ̂ / (1 − Σφ̂)。

    Raises:
        InsufficientLength: 长度 < lags + 10
        SingularRegression: 回归秩亏（如常数序列）
    """
    _check_lags(lags)
    y = _values(s)
    if len(y) < lags + ADF_MIN_EXTRA:
        raise InsufficientLength(
            f"ADF with {lags} lag(s) needs >= {lags + ADF_MIN_EXTRA} points, got {len(y)}"
        )
    det = Deterministic(deterministic)
    reg = _df_regression(y, lags, det)

    stat_rho = None
    critical_rho = None
    if table == CriticalTest.ADF and 1.0 - reg.phi_sum != 0.0:
        stat_rho = reg.nobs * reg.gamma / (1.0 - reg.phi_sum)
        critical_rho = critical_values(CriticalTest.PP_RHO, reg.nobs, det.value)

    table_det = Deterministic.CONSTANT.value if table == CriticalTest.EG else det.value
    report = UnitRootReport(
        test=UnitRootTest.ADF,
        stat_t=reg.t,
        stat_rho=stat_rho,
        lags=lags,
        deterministic=det,
        nobs=reg.nobs,
        critical=critical_values(table, reg.nobs, table_det),
        critical_rho=critical_rho,
        table=CriticalTest(table).value,
    )
    logger.debug(
        f"[UnitRoot] ADF lags={lags} det={det.value} n={reg.nobs}: t={reg.t:.4f}"
    )
    return report


# ============================================================================
# Phillips-Perron
# ============================================================================


def default_pp_bandwidth(n: int) -> int:
    """Newey-West 规则：floor(4·(n/100)^(2/9))"""
    return int(math.floor(4.0 * (n / 100.0) ** (2.0 / 9.0)))


def _bartlett_long_run(u: np.ndarray, bandwidth: int) -> float:
    T = len(u)
    lrv = float(u @ u) / T
    for j in range(1, bandwidth + 1):
        weight = 1.0 - j / (bandwidth + 1.0)
        lrv += 2.0 * weight * float(u[j:] @ u[:-j]) / T
    return lrv


def pp_test(
    s: Series,
    bandwidth: Optional[int] = None,
    deterministic: Deterministic = Deterministic.CONSTANT,
) -> UnitRootReport:
    """
    Phillips-Perron 检验

    无增广的 DF 回归，t 与 ρ 两种统计量都用 Bartlett 核长期方差做非参数修正；
    bandwidth = 0 且残差为白噪声时修正项为零，stat_t 与 DF t 值一致。

    Raises:
        InsufficientLength: 长度 < 20
    """
    y = _values(s)
    if len(y) < PP_MIN_LENGTH:
        raise InsufficientLength(f"PP test needs >= {PP_MIN_LENGTH} points, got {len(y)}")
    if bandwidth is None:
        bandwidth = default_pp_bandwidth(len(y))
    if bandwidth < 0:
        raise InvalidArgument(f"bandwidth must be >= 0, got {bandwidth}")

    det = Deterministic(deterministic)
    reg = _df_regression(y, 0, det)
    T = reg.nobs
    u = reg.resid
    gamma0 = float(u @ u) / T
    lam2 = _bartlett_long_run(u, min(bandwidth, T - 1))
    lam = math.sqrt(lam2)
    s_reg = math.sqrt(reg.sigma2)

    z_t = math.sqrt(gamma0 / lam2) * reg.t - 0.5 * (lam2 - gamma0) / lam * (T * reg.se / s_reg)
    z_rho = T * reg.gamma - 0.5 * (T * T * reg.se * reg.se / reg.sigma2) * (lam2 - gamma0)

    logger.debug(
        f"[UnitRoot] PP bandwidth={bandwidth} det={det.value} n={T}: "
        f"z_t={z_t:.4f} z_rho={z_rho:.4f}"
    )
    return UnitRootReport(
        test=UnitRootTest.PP,
        stat_t=z_t,
        stat_rho=z_rho,
        lags=bandwidth,
        deterministic=det,
        nobs=T,
        critical=critical_values(CriticalTest.ADF, T, det.value),
        critical_rho=critical_values(CriticalTest.PP_RHO, T, det.value),
        table=CriticalTest.ADF.value,
    )


# ============================================================================
# DF-GLS
# ============================================================================


def gls_demean(y: np.ndarray, c: float = DFGLS_C) -> np.ndarray:
    """局部单位根拟差分后估计均值并扣除"""
    n = len(y)
    alpha = 1.0 - c / n
    y_q = np.concatenate([y[:1], y[1:] - alpha * y[:-1]])
    z_q = np.concatenate([[1.0], np.full(n - 1, 1.0 - alpha)])
    mu = float(z_q @ y_q) / float(z_q @ z_q)
    return y - mu


def dfgls_test(s: Series, lags: int = 1) -> UnitRootReport:
    """
    DF-GLS 检验（常数项情形）

    Raises:
        InsufficientLength: 长度 < lags + 15
        SingularRegression: 回归秩亏
    """
    _check_lags(lags)
    y = _values(s)
    if len(y) < lags + DFGLS_MIN_EXTRA:
        raise InsufficientLength(
            f"DF-GLS with {lags} lag(s) needs >= {lags + DFGLS_MIN_EXTRA} points, got {len(y)}"
        )
    reg = _df_regression(gls_demean(y), lags, Deterministic.NONE)
    logger.debug(f"[UnitRoot] DF-GLS lags={lags} n={reg.nobs}: t={reg.t:.4f}")
    return UnitRootReport(
        test=UnitRootTest.DFGLS,
        stat_t=reg.t,
        lags=lags,
        deterministic=Deterministic.CONSTANT,
        nobs=reg.nobs,
        critical=critical_values(CriticalTest.DFGLS, reg.nobs, Deterministic.CONSTANT.value),
        table=CriticalTest.DFGLS.value,
    )


def dfgls_sweep(s: Series, max_lags: int = DEFAULT_DFGLS_MAX_LAGS) -> List[UnitRootReport]:
    """滞后 1..max_lags 逐一做 DF-GLS；样本不够长的滞后跳过"""
    if max_lags < 1:
        raise InvalidArgument(f"max_lags must be >= 1, got {max_lags}")
    reports = []
    for lags in range(1, max_lags + 1):
        if len(s) < lags + DFGLS_MIN_EXTRA:
            logger.info(f"[UnitRoot] DF-GLS sweep stops at lag {lags}: series too short")
            break
        reports.append(dfgls_test(s, lags))
    return reports
