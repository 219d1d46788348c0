# -*- coding: utf-8 -*-
"""
临界值模拟

在单位根原假设下按批次生成随机游走，计算检验统计量的经验分位数。
每个 (检验, 样本量, 确定性项) 组合的种子由 SeedSequence 派生，
批次之间用 spawn 切分种子空间，结果与批次执行顺序无关。
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from lfmodel.core.errors import InvalidArgument
from lfmodel.econotest.cointegration import TrendSpec
from lfmodel.econotest.critical import LEVEL_PROB, LEVELS, TABLE_COLUMNS, CriticalTest
from lfmodel.econotest.regression import Deterministic, deterministic_terms
from lfmodel.econotest.unitroot import DFGLS_C
from lfmodel.tools import parallel_map

logger = logging.getLogger(__name__)

MIN_REPLICATIONS = 10_000
BATCH_SIZE = 2_000

DEFAULT_TABLE_SIZES = (25, 50, 100, 250, 500)

# build_table 生成的 (检验, 确定性项) 组合
TABLE_SPECS: Tuple[Tuple[CriticalTest, str], ...] = (
    (CriticalTest.ADF, Deterministic.NONE.value),
    (CriticalTest.ADF, Deterministic.CONSTANT.value),
    (CriticalTest.ADF, Deterministic.CONSTANT_TREND.value),
    (CriticalTest.PP_RHO, Deterministic.NONE.value),
    (CriticalTest.PP_RHO, Deterministic.CONSTANT.value),
    (CriticalTest.PP_RHO, Deterministic.CONSTANT_TREND.value),
    (CriticalTest.DFGLS, Deterministic.CONSTANT.value),
    (CriticalTest.EG, Deterministic.CONSTANT.value),
    (CriticalTest.JOHANSEN_R0, TrendSpec.NONE.value),
    (CriticalTest.JOHANSEN_R1, TrendSpec.NONE.value),
    (CriticalTest.JOHANSEN_R0, TrendSpec.CONSTANT.value),
    (CriticalTest.JOHANSEN_R1, TrendSpec.CONSTANT.value),
)


# ============================================================================
# 批量 DF 统计量
# ============================================================================


def _partial(A: np.ndarray, D: np.ndarray) -> np.ndarray:
    """各行（每次复制）扣除在确定性项 D (T × k) 上的投影"""
    if D.shape[1] == 0:
        return A
    Q, _ = np.linalg.qr(D)
    return A - (A @ Q) @ Q.T


def _df_batch(y: np.ndarray, deterministic: Deterministic) -> Tuple[np.ndarray, np.ndarray]:
    """
    无增广 DF 回归的 (γ̂, t) ，y 为 reps × n

    由 FWL 定理，确定性项先从 y(t−1) 与 Δy 中扣除再做单变量回归。
    """
    dy = np.diff(y, axis=1)
    lag = y[:, :-1]
    T = dy.shape[1]
    D = deterministic_terms(T, deterministic)
    lag = _partial(lag, D)
    dy = _partial(dy, D)

    sxx = np.einsum("ij,ij->i", lag, lag)
    gamma = np.einsum("ij,ij->i", lag, dy) / sxx
    resid = dy - gamma[:, None] * lag
    dof = T - 1 - D.shape[1]
    sigma2 = np.einsum("ij,ij->i", resid, resid) / dof
    t = gamma / np.sqrt(sigma2 / sxx)
    return gamma, t


def _random_walks(rng: np.random.Generator, reps: int, n: int, k: int = 1) -> np.ndarray:
    e = rng.standard_normal((reps, n, k))
    walks = np.cumsum(e, axis=1)
    return walks[..., 0] if k == 1 else walks


def _johansen_batch(walks: np.ndarray, trend: TrendSpec) -> np.ndarray:
    """
    VAR(1) 约化秩回归的迹统计量，walks 为 reps × n × 2，返回 reps × 2

    逐次复制与 johansen_eigen(·, 1, trend) + trace_statistics 相同，
    2×2 矩阵的特征值按批次闭式求解。
    """
    R0 = np.diff(walks, axis=1)
    R1 = walks[:, :-1]
    if trend == TrendSpec.CONSTANT:
        R0 = R0 - R0.mean(axis=1, keepdims=True)
        R1 = R1 - R1.mean(axis=1, keepdims=True)
    T = R0.shape[1]
    S00 = np.einsum("rti,rtj->rij", R0, R0) / T
    S11 = np.einsum("rti,rtj->rij", R1, R1) / T
    S01 = np.einsum("rti,rtj->rij", R0, R1) / T

    M = np.linalg.solve(S11, np.swapaxes(S01, 1, 2) @ np.linalg.solve(S00, S01))
    tr = np.trace(M, axis1=1, axis2=2)
    det = np.linalg.det(M)
    disc = np.sqrt(np.maximum(tr * tr - 4.0 * det, 0.0))
    eig = np.clip(np.stack([(tr + disc) / 2.0, (tr - disc) / 2.0], axis=1), 0.0, 1.0 - 1e-12)
    logs = np.log1p(-eig)
    return -T * np.stack([logs.sum(axis=1), logs[:, 1]], axis=1)


def _batch_statistics(
    test: CriticalTest, n: int, deterministic: str, reps: int, rng: np.random.Generator
) -> np.ndarray:
    if test in (CriticalTest.ADF, CriticalTest.PP_RHO):
        gamma, t = _df_batch(_random_walks(rng, reps, n), Deterministic(deterministic))
        return t if test == CriticalTest.ADF else (n - 1) * gamma

    if test == CriticalTest.DFGLS:
        y = _random_walks(rng, reps, n)
        alpha = 1.0 - DFGLS_C / n
        y_q = np.concatenate([y[:, :1], y[:, 1:] - alpha * y[:, :-1]], axis=1)
        z_q = np.concatenate([[1.0], np.full(n - 1, 1.0 - alpha)])
        mu = (y_q @ z_q) / float(z_q @ z_q)
        _, t = _df_batch(y - mu[:, None], Deterministic.NONE)
        return t

    if test == CriticalTest.EG:
        walks = _random_walks(rng, reps, n, k=2)
        y = walks[..., 0] - walks[..., 0].mean(axis=1, keepdims=True)
        x = walks[..., 1] - walks[..., 1].mean(axis=1, keepdims=True)
        slope = np.einsum("ij,ij->i", x, y) / np.einsum("ij,ij->i", x, x)
        _, t = _df_batch(y - slope[:, None] * x, Deterministic.NONE)
        return t

    index = 0 if test == CriticalTest.JOHANSEN_R0 else 1
    return _johansen_batch(_random_walks(rng, reps, n, k=2), TrendSpec(deterministic))[:, index]


# ============================================================================
# 对外接口
# ============================================================================


def simulate_critical_values(
    test: CriticalTest,
    n: int,
    deterministic: str,
    replications: int = MIN_REPLICATIONS,
    seed: int = 0,
    workers: int = 1,
) -> Dict[str, float]:
    """
    原假设下检验统计量的经验临界值

    左尾检验取 1%/5%/10% 分位数，Johansen 迹检验取右尾。

    Raises:
        InvalidArgument: replications < 10000 或 n 过小
    """
    test = CriticalTest(test)
    det = getattr(deterministic, "value", deterministic)
    if replications < MIN_REPLICATIONS:
        raise InvalidArgument(
            f"replications must be >= {MIN_REPLICATIONS}, got {replications}"
        )
    if n < 10:
        raise InvalidArgument(f"sample size must be >= 10, got {n}")

    test_index = list(CriticalTest).index(test)
    det_index = ["NONE", "CONSTANT", "CONSTANT_TREND"].index(det)
    root = np.random.SeedSequence([int(seed), test_index, int(n), det_index])

    sizes = [BATCH_SIZE] * (replications // BATCH_SIZE)
    if replications % BATCH_SIZE:
        sizes.append(replications % BATCH_SIZE)
    children = root.spawn(len(sizes))

    batches = parallel_map(
        lambda job: _batch_statistics(test, n, det, job[0], np.random.default_rng(job[1])),
        list(zip(sizes, children)),
        max_workers=workers,
    )
    stats = np.concatenate(batches)

    result = {}
    for level in LEVELS:
        q = LEVEL_PROB[level]
        result[level] = float(np.quantile(stats, 1.0 - q if test.right_tailed else q))
    logger.info(
        f"[Simulate] {test.value}/{det} n={n} reps={replications}: "
        + ", ".join(f"{lv}={v:.4f}" for lv, v in result.items())
    )
    return result


def table_rows(
    specs: Sequence[Tuple[CriticalTest, str]] = TABLE_SPECS,
    sizes: Iterable[int] = DEFAULT_TABLE_SIZES,
    replications: int = MIN_REPLICATIONS,
    seed: int = 0,
    workers: int = 1,
) -> pd.DataFrame:
    """模拟 (检验, 确定性项, 样本量) 组合，值保留 5 位小数"""
    sizes = list(sizes)
    rows: List[dict] = []
    for test, det in specs:
        for n in sizes:
            values = simulate_critical_values(test, n, det, replications, seed, workers)
            for level in LEVELS:
                rows.append(
                    {
                        "test": CriticalTest(test).value,
                        "n": int(n),
                        "deterministic": det,
                        "level": level,
                        "value": round(values[level], 5),
                    }
                )
    return pd.DataFrame(rows, columns=list(TABLE_COLUMNS))


def build_table(
    path: Union[str, Path],
    sizes: Iterable[int] = DEFAULT_TABLE_SIZES,
    replications: int = MIN_REPLICATIONS,
    seed: int = 0,
    specs: Sequence[Tuple[CriticalTest, str]] = TABLE_SPECS,
    workers: int = 1,
) -> pd.DataFrame:
    """模拟全部 (检验, 确定性项, 样本量) 组合并写出临界值 CSV"""
    frame = table_rows(specs, sizes, replications, seed, workers)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    logger.info(f"[Simulate] wrote {len(frame)} critical value(s) to {path}")
    return frame
