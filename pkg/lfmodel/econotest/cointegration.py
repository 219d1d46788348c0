# -*- coding: utf-8 -*-
"""
协整检验

- engle_granger: 两步法，协整回归残差做无确定性项的 ADF，使用残差专用临界值
- johansen_test: 二元 VAR 的迹检验，特征值由 2×2 二次特征多项式闭式求解
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from lfmodel.core import Series, align, common_range
from lfmodel.core.errors import (
    DegenerateInput,
    DegenerateResidual,
    EmptyOverlap,
    InsufficientLength,
    InsufficientOverlap,
    InvalidArgument,
    SingularCovariance,
)
from lfmodel.econotest.critical import LEVELS, CriticalTest, critical_values
from lfmodel.econotest.regression import Deterministic
from lfmodel.econotest.unitroot import UnitRootReport, adf_test

logger = logging.getLogger(__name__)

# ========== 参数 ==========
EG_MIN_LENGTH = 30
JOHANSEN_MIN_LENGTH = 40
DEFAULT_JOHANSEN_LAGS = 2  # VAR 阶数（水平形式），差分滞后为 lags − 1

# 协方差矩阵相对行列式下限
SINGULAR_TOL = 1e-10
# 残差最大绝对值相对 y 的幅度低于该值视为恒为零
ZERO_RESIDUAL_TOL = 1e-12

# 秩判定所用的显著性水平
RANK_LEVEL = "5%"


class TrendSpec(str, Enum):
    """Johansen 检验的确定性项设定"""

    NONE = "NONE"
    CONSTANT = "CONSTANT"


@dataclass
class CointegrationReport:
    """协整检验报告（两种检验的字段按需填充）"""

    engle_granger: Optional[UnitRootReport] = None
    cointegrated_at: Optional[Dict[str, bool]] = None
    slope: Optional[float] = None
    intercept: Optional[float] = None

    johansen_rank: Optional[int] = None
    eigenvalues: List[float] = field(default_factory=list)
    trace_stats: List[float] = field(default_factory=list)
    trace_critical: List[Dict[str, float]] = field(default_factory=list)
    rank_at: Dict[str, int] = field(default_factory=dict)
    trend_spec: Optional[TrendSpec] = None
    lags: Optional[int] = None
    nobs: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "engle_granger": None if self.engle_granger is None else self.engle_granger.to_dict(),
            "cointegrated_at": self.cointegrated_at,
            "slope": self.slope,
            "intercept": self.intercept,
            "johansen_rank": self.johansen_rank,
            "eigenvalues": list(self.eigenvalues),
            "trace_stats": list(self.trace_stats),
            "trace_critical": [dict(c) for c in self.trace_critical],
            "rank_at": dict(self.rank_at),
            "trend_spec": None if self.trend_spec is None else self.trend_spec.value,
            "lags": self.lags,
            "nobs": self.nobs,
        }


# ============================================================================
# Engle-Granger
# ============================================================================


def engle_granger(y: Series, x: Series, lags: int = 0) -> CointegrationReport:
    """
    Engle-Granger 两步协整检验

    第一步 y 对常数与 x 回归；第二步残差做 ADF（无确定性项），
    拒绝单位根即认为协整。

    Raises:
        InsufficientOverlap: 公共区间 < 30
        DegenerateInput: x 无方差
        DegenerateResidual: 回归残差恒为零
    """
    try:
        ya, xa = align(y, x, 0)
    except EmptyOverlap as e:
        raise InsufficientOverlap(str(e)) from e
    if len(ya) < EG_MIN_LENGTH:
        raise InsufficientOverlap(
            f"Engle-Granger needs >= {EG_MIN_LENGTH} common points, got {len(ya)}"
        )
    ya.require_complete("Engle-Granger y")
    xa.require_complete("Engle-Granger x")

    yv, xv = ya.values, xa.values
    if float(np.ptp(xv)) == 0.0:
        raise DegenerateInput(f"'{x.role}' has zero variance")

    X = np.column_stack([np.ones(len(xv)), xv])
    beta, *_ = np.linalg.lstsq(X, yv, rcond=None)
    resid = yv - X @ beta
    if float(np.max(np.abs(resid))) <= ZERO_RESIDUAL_TOL * max(1.0, float(np.max(np.abs(yv)))):
        raise DegenerateResidual(
            f"cointegrating regression of '{y.role}' on '{x.role}' fits exactly"
        )

    report = adf_test(
        ya.replace(values=resid, role=f"{y.role}_EG_RESIDUAL"),
        lags=lags,
        deterministic=Deterministic.NONE,
        table=CriticalTest.EG,
    )
    logger.info(
        f"[Coint] Engle-Granger {y.role}~{x.role}: slope={beta[1]:.4f}, "
        f"t={report.stat_t:.4f}, 5% cv={report.critical['5%']:.4f}"
    )
    return CointegrationReport(
        engle_granger=report,
        cointegrated_at=dict(report.reject_at),
        slope=float(beta[1]),
        intercept=float(beta[0]),
    )


# ============================================================================
# Johansen
# ============================================================================


def _partial_out(A: np.ndarray, Z: np.ndarray) -> np.ndarray:
    if Z.shape[1] == 0:
        return A
    coef, *_ = np.linalg.lstsq(Z, A, rcond=None)
    return A - Z @ coef


def _check_covariance(S: np.ndarray, what: str):
    diag = float(S[0, 0] * S[1, 1])
    if diag <= 0.0 or np.linalg.det(S) / diag < SINGULAR_TOL:
        raise SingularCovariance(f"{what} covariance is singular")


def johansen_eigen(
    Y: np.ndarray, lags: int, trend_spec: TrendSpec
) -> Tuple[np.ndarray, int]:
    """
    约化秩回归的特征值（降序）与有效样本量

    Y 为 n × 2 水平数据。
    """
    dY = np.diff(Y, axis=0)
    k = lags
    T = len(dY) - (k - 1)
    Z0 = dY[k - 1 :]
    Z1 = Y[k - 1 : -1]
    blocks = [dY[k - 1 - i : k - 1 - i + T] for i in range(1, k)]
    if trend_spec == TrendSpec.CONSTANT:
        blocks.append(np.ones((T, 1)))
    Z2 = np.hstack(blocks) if blocks else np.empty((T, 0))

    R0 = _partial_out(Z0, Z2)
    R1 = _partial_out(Z1, Z2)
    S00 = R0.T @ R0 / T
    S11 = R1.T @ R1 / T
    S01 = R0.T @ R1 / T
    _check_covariance(S11, "lagged-level residual")
    _check_covariance(S00, "differenced residual")

    M = np.linalg.solve(S11, S01.T @ np.linalg.solve(S00, S01))
    tr = float(np.trace(M))
    det = float(np.linalg.det(M))
    disc = math.sqrt(max(tr * tr - 4.0 * det, 0.0))
    eig = np.array([(tr + disc) / 2.0, (tr - disc) / 2.0])
    eig = np.clip(eig, 0.0, 1.0 - 1e-12)
    return eig, T


def trace_statistics(eigenvalues: np.ndarray, nobs: int) -> np.ndarray:
    """trace(r) = −T·Σ_{i>r} ln(1 − λ_i)，r = 0, 1"""
    logs = np.log1p(-eigenvalues)
    return np.array([-nobs * float(np.sum(logs[r:])) for r in range(len(eigenvalues))])


def _rank(trace: Sequence[float], critical: Sequence[Dict[str, float]], level: str) -> int:
    rank = 0
    for stat, cv in zip(trace, critical):
        if stat > cv[level]:
            rank += 1
        else:
            break
    return rank


def johansen_test(
    series: Sequence[Series],
    lags: int = DEFAULT_JOHANSEN_LAGS,
    trend_spec: TrendSpec = TrendSpec.NONE,
) -> CointegrationReport:
    """
    二元 Johansen 迹检验

    依次检验 rank = 0、rank ≤ 1；johansen_rank 取 5% 水平下的判定，
    rank_at 同时给出 1%/5%/10% 的判定。

    Raises:
        InsufficientLength: 公共区间 < 40
        SingularCovariance: 残差协方差奇异（如两个相同序列）
    """
    if len(series) != 2:
        raise InvalidArgument(f"johansen_test takes exactly two series, got {len(series)}")
    if lags < 1:
        raise InvalidArgument(f"VAR order must be >= 1, got {lags}")
    trend = TrendSpec(trend_spec)

    try:
        lo, hi = common_range(*series)
    except EmptyOverlap as e:
        raise InsufficientLength(str(e)) from e
    parts = [s.slice(lo, hi) for s in series]
    n = len(parts[0])
    if n < JOHANSEN_MIN_LENGTH:
        raise InsufficientLength(
            f"Johansen test needs >= {JOHANSEN_MIN_LENGTH} common points, got {n}"
        )
    for p in parts:
        p.require_complete("Johansen input")

    Y = np.column_stack([p.values for p in parts])
    eig, T = johansen_eigen(Y, lags, trend)
    trace = trace_statistics(eig, T)
    critical = [
        critical_values(CriticalTest.JOHANSEN_R0, T, trend.value),
        critical_values(CriticalTest.JOHANSEN_R1, T, trend.value),
    ]
    rank_at = {lv: _rank(trace, critical, lv) for lv in LEVELS}

    logger.info(
        f"[Coint] Johansen {[p.role for p in parts]} lags={lags} trend={trend.value}: "
        f"eig={eig.round(6).tolist()}, trace={trace.round(4).tolist()}, rank={rank_at[RANK_LEVEL]}"
    )
    return CointegrationReport(
        johansen_rank=rank_at[RANK_LEVEL],
        eigenvalues=[float(v) for v in eig],
        trace_stats=[float(v) for v in trace],
        trace_critical=critical,
        rank_at=rank_at,
        trend_spec=trend,
        lags=lags,
        nobs=T,
    )
