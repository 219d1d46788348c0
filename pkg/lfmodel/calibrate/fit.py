# -*- coding: utf-8 -*-
"""
累积曲线标定

fit_cumulative 把拟合区间按断点切成若干分段，逐段做网格搜索，
再组装成 SegmentedModel 并在全区间上计算残差与拟合优度。
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Sequence, Tuple

import numpy as np

from lfmodel.calibrate.config import FitConfig, Objective
from lfmodel.calibrate.grid import search_segment
from lfmodel.calibrate.scoring import goodness
from lfmodel.core import Period, Series, Unit, common_range
from lfmodel.core.errors import (
    CoverageGap,
    EmptyOverlap,
    FrequencyMismatch,
    InvalidArgument,
    MissingRegressor,
    SegmentTooShort,
)
from lfmodel.models import Regressor, RegressorKind, Segment, SegmentedModel, evaluate

logger = logging.getLogger(__name__)

# 每个分段最少的观测数
MIN_SEGMENT_POINTS = 4


# ============================================================================
# 标定结果
# ============================================================================


@dataclass
class FitResult:
    """标定结果"""

    model: SegmentedModel
    r2_dynamic: float
    r2_cumulative: float
    residual: Series
    objective_value: float
    objective: Objective = Objective.CUM_RMS
    segment_objectives: List[float] = field(default_factory=list)
    predicted: Series = None

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "model": self.model.to_dict(),
            "r2_dynamic": self.r2_dynamic,
            "r2_cumulative": self.r2_cumulative,
            "objective": self.objective.value,
            "objective_value": self.objective_value,
            "segment_objectives": list(self.segment_objectives),
            "residual": self.residual.to_dict(),
        }
        if self.predicted is not None:
            data["predicted"] = self.predicted.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FitResult":
        predicted = data.get("predicted")
        return cls(
            model=SegmentedModel.from_dict(data["model"]),
            r2_dynamic=float(data["r2_dynamic"]),
            r2_cumulative=float(data["r2_cumulative"]),
            residual=Series.from_dict(data["residual"]),
            objective_value=float(data["objective_value"]),
            objective=Objective(data.get("objective", Objective.CUM_RMS.value)),
            segment_objectives=[float(v) for v in data.get("segment_objectives", [])],
            predicted=None if predicted is None else Series.from_dict(predicted),
        )


# ============================================================================
# 辅助函数
# ============================================================================


def _resolve(
    observed: Series, inputs: Mapping[str, Series], kinds: Sequence[RegressorKind]
) -> Dict[RegressorKind, Series]:
    resolved = {}
    for kind in kinds:
        series = inputs.get(kind.role)
        if series is None:
            series = inputs.get(kind.value)
        if series is None:
            raise MissingRegressor(
                f"fit needs input '{kind.role}'", available=sorted(inputs)
            )
        if series.frequency != observed.frequency:
            raise FrequencyMismatch(
                f"input '{kind.role}' is {series.frequency.value}, "
                f"observed is {observed.frequency.value}"
            )
        resolved[kind] = series
    return resolved


def _segment_bounds(
    start: Period, end: Period, breaks: Sequence[Period]
) -> List[Tuple[Period, Period]]:
    """断点为新分段首期：[start, b1−1], [b1, b2−1], ..., [bk, end]"""
    bounds = []
    lo = start
    for b in breaks:
        if not start < b <= end:
            raise SegmentTooShort(
                f"break {b} lies outside the fit range {start}..{end}", break_period=str(b)
            )
        bounds.append((lo, b.shift(-1)))
        lo = b
    bounds.append((lo, end))
    for lo, hi in bounds:
        n = hi.distance(lo) + 1
        if n < MIN_SEGMENT_POINTS:
            raise SegmentTooShort(
                f"segment {lo}..{hi} has {n} point(s), needs >= {MIN_SEGMENT_POINTS}",
                start=str(lo),
                end=str(hi),
            )
    return bounds


def _combine(values: List[float], sizes: List[int], objective: Objective) -> float:
    if objective == Objective.CUM_RMS:
        # 按点数加权合并各段的均方
        total = sum(n * v * v for v, n in zip(values, sizes))
        return float(np.sqrt(total / sum(sizes)))
    return float(max(values))


# ============================================================================
# 标定
# ============================================================================


def fit_cumulative(
    observed: Series, inputs: Mapping[str, Series], cfg: FitConfig
) -> FitResult:
    """
    累积曲线法标定分段模型

    拟合区间为观测值与全部输入的公共区间；每个分段独立搜索斜率、截距、滞后，
    使观测与预测的累积曲线最接近（目标函数见 Objective）。

    Raises:
        SegmentTooShort: 某分段少于 4 个观测
        EmptyGrid: 网格为空
        CoverageGap: 滞后后输入不足
        MissingValue: 拟合区间内观测值缺失
    """
    kinds = list(dict.fromkeys(cfg.regressors))
    resolved = _resolve(observed, inputs, kinds)
    # 输入按最小滞后平移，保证至少最小滞后组合可用
    shifted = [
        s.replace(start=s.start.shift(min(cfg.lags_for(kind))))
        for kind, s in resolved.items()
    ]
    try:
        start, end = common_range(observed, *shifted)
    except EmptyOverlap as e:
        raise CoverageGap(f"observed and inputs share no range: {e}") from e

    target = observed.slice(start, end)
    target.require_complete(f"observed '{observed.role}'")

    breaks = cfg.break_periods(observed.frequency)
    bounds = _segment_bounds(start, end, breaks)
    logger.info(
        f"[Calibrate] fit {observed.role} on {start}..{end}: "
        f"{len(bounds)} segment(s), regressors={[k.value for k in kinds]}, "
        f"objective={cfg.objective.value}"
    )

    segments: List[Segment] = []
    seg_objectives: List[float] = []
    sizes: List[int] = []
    for lo, hi in bounds:
        best = search_segment(observed.slice(lo, hi), resolved, kinds, cfg)
        slopes = {
            Regressor(kind, lag): slope
            for kind, lag, slope in zip(kinds, best.lags, best.slopes)
        }
        segments.append(Segment(lo, hi, slopes, best.intercept))
        seg_objectives.append(best.objective)
        sizes.append(hi.distance(lo) + 1)
        logger.info(
            f"[Calibrate] segment {lo}..{hi}: slopes={list(best.slopes)} "
            f"intercept={best.intercept} lags={list(best.lags)} objective={best.objective:.6g}"
        )

    model = SegmentedModel(target=observed.role, frequency=observed.frequency, segments=tuple(segments))
    predicted = evaluate(model, inputs)
    pred = predicted.slice(start, end)
    residual = target.replace(
        values=target.values - pred.values, unit=Unit.RATE_PER_YEAR, role=f"{observed.role}_RESIDUAL"
    )
    r2_dyn, r2_cum = goodness(target, pred)

    return FitResult(
        model=model,
        r2_dynamic=r2_dyn,
        r2_cumulative=r2_cum,
        residual=residual,
        objective_value=_combine(seg_objectives, sizes, cfg.objective),
        objective=cfg.objective,
        segment_objectives=seg_objectives,
        predicted=pred,
    )


def break_scan(
    observed: Series,
    inputs: Mapping[str, Series],
    candidates: Sequence[Period],
    cfg: FitConfig,
) -> List[Tuple[Period, float]]:
    """
    断点扫描

    对每个候选断点单独做一次单断点标定，按目标值升序返回
    （目标值相同时较早的候选在前）。
    """
    if not candidates:
        raise InvalidArgument("break_scan needs at least one candidate")

    ranked = []
    for candidate in candidates:
        trial = cfg.model_copy(update={"breaks": [str(candidate)]})
        result = fit_cumulative(observed, inputs, trial)
        ranked.append((candidate, result.objective_value))
        logger.debug(f"[Calibrate] break {candidate}: objective={result.objective_value:.6g}")

    ranked.sort(key=lambda item: (item[1], item[0].ordinal))
    logger.info(f"[Calibrate] break scan best: {ranked[0][0]} ({ranked[0][1]:.6g})")
    return ranked
