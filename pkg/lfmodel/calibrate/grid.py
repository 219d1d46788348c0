# -*- coding: utf-8 -*-
"""
分段网格搜索

在单个分段上穷举 斜率 × 截距 × 滞后，最小化观测与预测累积曲线之间的目标函数。

并行与确定性：
- 各滞后组合独立求解（parallel_map 保持输入顺序）
- 归约按 (目标值, Σ|斜率|, |截距|, Σ滞后, 滞后) 取最小，结果与顺序扫描一致
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from lfmodel.calibrate.config import FitConfig, GridRange, Objective
from lfmodel.core import Period, Series
from lfmodel.core.errors import CoverageGap, EmptyGrid
from lfmodel.models import RegressorKind
from lfmodel.tools import parallel_map

logger = logging.getLogger(__name__)

# 单块最多计算的矩阵元素数
BLOCK_CELLS = 1 << 22

# 两阶段：窗口重定位的最多次数；精确阶段半径的数值余量（相对 O'O/n）
MAX_RECENTRE = 50
BOUND_SLACK = 1e-10


@dataclass(frozen=True)
class Candidate:
    """网格点及其目标值"""

    objective: float
    slopes: Tuple[float, ...]
    intercept: float
    lags: Tuple[int, ...]

    @property
    def key(self) -> tuple:
        return (
            self.objective,
            float(np.sum(np.abs(self.slopes))),
            abs(self.intercept),
            sum(self.lags),
            self.lags,
        )


@dataclass
class _LagProblem:
    """固定滞后组合下的累积曲线问题"""

    lags: Tuple[int, ...]
    Z: np.ndarray  # n × (k+1)：解释变量与常数项的累积曲线
    O: np.ndarray  # n：观测累积曲线
    scale: float  # CUM_ENDPOINT_REL 的归一化幅度


def _build_problem(
    observed: Series,
    inputs: Mapping[RegressorKind, Series],
    kinds: Sequence[RegressorKind],
    lags: Tuple[int, ...],
) -> Optional[_LagProblem]:
    """构造问题；滞后后输入不能覆盖分段时返回 None"""
    start, end = observed.start, observed.end
    p = observed.frequency.periods_per_year
    columns = []
    for kind, lag in zip(kinds, lags):
        series = inputs[kind]
        lo, hi = start.shift(-lag), end.shift(-lag)
        if not series.covers(lo, hi):
            return None
        x = series.slice(lo, hi).values
        if np.isnan(x).any():
            return None
        columns.append(x)

    n = len(observed)
    X = np.column_stack(columns + [np.ones(n)])
    Z = np.cumsum(X, axis=0) / p
    O = np.cumsum(observed.values) / p
    scale = float(np.max(np.abs(O)))
    return _LagProblem(lags=lags, Z=Z, O=O, scale=scale if scale > 0 else 1.0)


def _objective_block(problem: _LagProblem, B: np.ndarray, objective: Objective) -> np.ndarray:
    """计算一块系数 B (m × (k+1)) 的目标值"""
    n = len(problem.O)
    if objective == Objective.CUM_RMS:
        # mean((O − Zβ)²) = O'O/n − 2β'Z'O/n + β'Z'Zβ/n
        G = problem.Z.T @ problem.Z / n
        q = problem.Z.T @ problem.O / n
        o2 = float(problem.O @ problem.O) / n
        ms = o2 - 2.0 * (B @ q) + np.einsum("ij,jk,ik->i", B, G, B)
        return np.sqrt(np.maximum(ms, 0.0))

    D = problem.O[:, None] - problem.Z @ B.T
    return np.max(np.abs(D), axis=0) / problem.scale


def _best_on_axes(
    problem: _LagProblem, axes: List[np.ndarray], objective: Objective
) -> Candidate:
    """在 axes 的笛卡尔积上求最优点"""
    n = len(problem.O)
    rest = int(np.prod([len(a) for a in axes[1:]])) if len(axes) > 1 else 1
    cells = BLOCK_CELLS if objective == Objective.CUM_RMS else max(1, BLOCK_CELLS // n)
    block = max(1, cells // max(rest, 1))

    best: Optional[Candidate] = None
    first = axes[0]
    for i in range(0, len(first), block):
        mesh = np.meshgrid(first[i : i + block], *axes[1:], indexing="ij")
        B = np.stack([m.reshape(-1) for m in mesh], axis=1)
        values = _objective_block(problem, B, objective)

        lowest = values.min()
        tied = np.flatnonzero(values == lowest)
        if len(tied) > 1:
            slope_abs = np.abs(B[tied, :-1]).sum(axis=1)
            icpt_abs = np.abs(B[tied, -1])
            tied = tied[np.lexsort((icpt_abs, slope_abs))]
        j = int(tied[0])
        cand = Candidate(
            objective=float(lowest),
            slopes=tuple(float(v) for v in B[j, :-1]),
            intercept=float(B[j, -1]),
            lags=problem.lags,
        )
        if best is None or cand.key < best.key:
            best = cand
    return best


def _least_squares(problem: _LagProblem) -> Optional[Tuple[np.ndarray, np.ndarray, float]]:
    """连续最小二乘解 β̂、G⁻¹ 与最小均方；累积曲线列亏秩时返回 None"""
    Z = problem.Z
    if np.linalg.matrix_rank(Z) < Z.shape[1]:
        return None
    n = len(problem.O)
    beta, *_ = np.linalg.lstsq(Z, problem.O, rcond=None)
    resid = problem.O - Z @ beta
    G_inv = np.linalg.inv(Z.T @ Z / n)
    return beta, G_inv, float(resid @ resid) / n


def _recentre(
    problem: _LagProblem,
    ranges: List[GridRange],
    seed: Candidate,
    cfg: FitConfig,
) -> Candidate:
    """窗口内最优点落在窗口边界（且不是网格边界）时移动窗口重搜"""
    ends = [(r.around(r.min, 0)[0], r.around(r.max, 0)[0]) for r in ranges]
    best = seed
    for _ in range(MAX_RECENTRE):
        centers = list(best.slopes) + [best.intercept]
        axes = [r.around(c, cfg.refine_factor) for r, c in zip(ranges, centers)]
        found = _best_on_axes(problem, axes, cfg.objective)
        if not found.key < best.key:
            break
        best = found
        point = list(found.slopes) + [found.intercept]
        on_edge = any(
            (v == a[0] and v != lo) or (v == a[-1] and v != hi)
            for v, a, (lo, hi) in zip(point, axes, ends)
        )
        if not on_edge:
            break
    return best


def _search_lags(
    problem: _LagProblem,
    slope_ranges: List[GridRange],
    intercept_range: GridRange,
    cfg: FitConfig,
    two_stage: bool,
) -> Candidate:
    """
    单个滞后组合的网格最优点

    两阶段时结果仍与穷举一致：先由粗网格与最小二乘解附近的细网格得到上界 v*，
    再穷举所有可能不劣于 v* 的网格点。CUM_RMS 下这些点满足
    (β − β̂)ᵀG(β − β̂) ≤ v*² − ms(β̂)；CUM_ENDPOINT_REL 因 rms ≤ max|·|，
    用 (v*·scale)² 代替 v*²。椭球的外接盒在各轴上的半宽为 sqrt(r²·(G⁻¹)ᵢᵢ)。
    """
    ranges = slope_ranges + [intercept_range]
    if not two_stage:
        return _best_on_axes(problem, [r.values() for r in ranges], cfg.objective)

    coarse = _best_on_axes(
        problem, [r.coarsen(cfg.refine_factor).values() for r in ranges], cfg.objective
    )
    best = _recentre(problem, ranges, coarse, cfg)

    ls = _least_squares(problem)
    if ls is None:
        logger.warning(
            f"[Grid] lags {problem.lags}: cumulative regressors are collinear, "
            f"two-stage result is a local grid optimum"
        )
        return best

    beta, G_inv, ms_min = ls
    snapped = [float(r.around(b, 0)[0]) for r, b in zip(ranges, beta)]
    seeded = _best_on_axes(
        problem, [r.around(c, cfg.refine_factor) for r, c in zip(ranges, snapped)], cfg.objective
    )
    best = min(best, seeded, key=lambda c: c.key)

    bound = best.objective if cfg.objective == Objective.CUM_RMS else best.objective * problem.scale
    o2 = float(problem.O @ problem.O) / len(problem.O)
    radius2 = max(bound**2 - ms_min, 0.0) + BOUND_SLACK * max(o2, 1.0)
    half = np.sqrt(radius2 * np.diag(G_inv))
    axes = [r.within(b - h, b + h) for r, b, h in zip(ranges, beta, half)]
    if any(len(a) == 0 for a in axes):
        return best

    cells = int(np.prod([len(a) for a in axes]))
    logger.debug(f"[Grid] lags {problem.lags}: exact pass over {cells} point(s)")
    exact = _best_on_axes(problem, axes, cfg.objective)
    return min(best, exact, key=lambda c: c.key)


def search_segment(
    observed: Series,
    inputs: Mapping[RegressorKind, Series],
    kinds: Sequence[RegressorKind],
    cfg: FitConfig,
) -> Candidate:
    """
    单分段网格搜索

    Args:
        observed: 分段内的观测值（无缺失）
        inputs: 解释变量种类 -> 完整输入序列
        kinds: 解释变量顺序
        cfg: 标定配置

    Raises:
        EmptyGrid: 网格为空
        CoverageGap: 所有滞后组合都缺少输入
    """
    slope_ranges = [cfg.slope_range(k) for k in kinds]
    intercept_range = cfg.intercept_grid
    sizes = [r.size for r in slope_ranges] + [intercept_range.size]
    if min(sizes) < 1:
        raise EmptyGrid("grid has no points")

    combos = list(itertools.product(*(cfg.lags_for(k) for k in kinds)))
    if not combos:
        raise EmptyGrid("lag grid has no combinations")

    problems = [_build_problem(observed, inputs, kinds, lags) for lags in combos]
    problems = [p for p in problems if p is not None]
    if not problems:
        raise CoverageGap(
            f"no lag combination has input coverage for {observed.start}..{observed.end}"
        )

    total = int(np.prod(sizes)) * len(problems)
    two_stage = total > cfg.max_grid_points
    logger.debug(
        f"[Grid] {observed.start}..{observed.end}: {total} points, "
        f"{len(problems)} lag combo(s), two_stage={two_stage}"
    )

    results = parallel_map(
        lambda prob: _search_lags(prob, slope_ranges, intercept_range, cfg, two_stage),
        problems,
        max_workers=cfg.workers,
    )
    return min(results, key=lambda c: c.key)


def grid_objectives(
    observed: Series,
    inputs: Mapping[RegressorKind, Series],
    kinds: Sequence[RegressorKind],
    lags: Tuple[int, ...],
    coefficients: np.ndarray,
    objective: Objective,
) -> np.ndarray:
    """给定系数矩阵逐点重算目标值（用于校验网格最优性）"""
    problem = _build_problem(observed, inputs, kinds, lags)
    if problem is None:
        raise CoverageGap(f"lags {lags} lack input coverage")
    return _objective_block(problem, np.atleast_2d(coefficients), objective)
