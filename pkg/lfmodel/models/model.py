# -*- coding: utf-8 -*-
"""
分段线性滞后模型

模型族：目标变量（失业率、GDP 平减指数、CPI 通胀）是劳动力增长率、
失业率、CPI 通胀的滞后线性函数，系数在结构断点处分段变化。

设计说明：
- Regressor: 解释变量种类 + 滞后期数
- Segment: 一段时间区间内的斜率与截距（外侧边界可以开放）
- SegmentedModel: 按时间排序、互不重叠的分段序列
- evaluate / forecast: 纯函数，模型为不可变值对象
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np

from lfmodel.core import Frequency, Period, Series, Unit
from lfmodel.core.errors import (
    CoverageGap,
    FrequencyMismatch,
    InvalidArgument,
    MissingRegressor,
)

logger = logging.getLogger(__name__)


# ============================================================================
# 解释变量
# ============================================================================


class RegressorKind(str, Enum):
    """解释变量种类"""

    LF_GROWTH = "LF_GROWTH"
    UNEMPLOYMENT = "UNEMPLOYMENT"
    CPI_INFLATION = "CPI_INFLATION"

    @property
    def role(self) -> str:
        """输入序列的角色标签"""
        return {
            "LF_GROWTH": "LF_GROWTH",
            "UNEMPLOYMENT": "UE",
            "CPI_INFLATION": "CPI",
        }[self.value]


@dataclass(frozen=True)
class Regressor:
    """解释变量（滞后以模型频率计）"""

    kind: RegressorKind
    lag: int = 0

    def __post_init__(self):
        if self.lag < 0:
            raise InvalidArgument(f"lag must be >= 0, got {self.lag}")


# ============================================================================
# 分段与模型
# ============================================================================


@dataclass(frozen=True)
class Segment:
    """
    模型分段

    Attributes:
        start: 起点（含），None 表示向过去开放
        end: 终点（含），None 表示向未来开放
        slopes: 解释变量 -> 斜率
        intercept: 截距
    """

    start: Optional[Period]
    end: Optional[Period]
    slopes: Mapping[Regressor, float]
    intercept: float

    def __post_init__(self):
        if not self.slopes:
            raise InvalidArgument("segment needs at least one slope")
        if self.start is not None and self.end is not None and self.end < self.start:
            raise InvalidArgument(f"segment end {self.end} before start {self.start}")
        object.__setattr__(
            self, "slopes", {r: float(v) for r, v in self.slopes.items()}
        )
        object.__setattr__(self, "intercept", float(self.intercept))

    @property
    def kinds(self) -> frozenset:
        return frozenset(r.kind for r in self.slopes)

    def contains(self, period: Period) -> bool:
        if self.start is not None and period < self.start:
            return False
        if self.end is not None and period > self.end:
            return False
        return True

    def slope(self, kind: RegressorKind) -> float:
        """按种类取斜率（同种类多个滞后时求和）"""
        return sum(v for r, v in self.slopes.items() if r.kind == kind)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "start": None if self.start is None else str(self.start),
            "end": None if self.end is None else str(self.end),
            "intercept": self.intercept,
            "slopes": [
                {"kind": r.kind.value, "lag": r.lag, "value": v}
                for r, v in self.slopes.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], frequency: Frequency) -> "Segment":
        def _period(text):
            return None if text is None else Period.parse(text, frequency)

        return cls(
            start=_period(data.get("start")),
            end=_period(data.get("end")),
            slopes={
                Regressor(RegressorKind(s["kind"]), int(s.get("lag", 0))): float(s["value"])
                for s in data["slopes"]
            },
            intercept=float(data["intercept"]),
        )


@dataclass(frozen=True)
class SegmentedModel:
    """分段线性滞后模型"""

    target: str
    frequency: Frequency
    segments: Tuple[Segment, ...] = field(default_factory=tuple)

    def __post_init__(self):
        segments = tuple(self.segments)
        object.__setattr__(self, "segments", segments)
        if not segments:
            raise InvalidArgument("model needs at least one segment")

        kinds = segments[0].kinds
        for i, seg in enumerate(segments):
            for bound in (seg.start, seg.end):
                if bound is not None and bound.frequency != self.frequency:
                    raise FrequencyMismatch(
                        f"segment bound {bound} is not {self.frequency.value}"
                    )
            if seg.kinds != kinds:
                raise InvalidArgument(
                    f"segment {i} uses {sorted(k.value for k in seg.kinds)}, "
                    f"expected {sorted(k.value for k in kinds)}"
                )
            if seg.start is None and i > 0:
                raise InvalidArgument("only the first segment may be open towards the past")
            if seg.end is None and i < len(segments) - 1:
                raise InvalidArgument("only the last segment may be open towards the future")
            if i > 0 and not segments[i - 1].end < seg.start:
                raise InvalidArgument(
                    f"segment {i} starting {seg.start} overlaps the previous one"
                )

    # ========== 查询 ==========

    def regressors(self) -> List[Regressor]:
        """所有分段用到的解释变量（按首次出现顺序）"""
        seen: Dict[Regressor, None] = {}
        for seg in self.segments:
            for r in seg.slopes:
                seen.setdefault(r, None)
        return list(seen)

    def segment_for(self, period: Period) -> Optional[Segment]:
        for seg in self.segments:
            if seg.contains(period):
                return seg
        return None

    def extended(self) -> "SegmentedModel":
        """最后一段向未来无限延伸的副本（用于预测）"""
        last = self.segments[-1]
        if last.end is None:
            return self
        tail = Segment(last.start, None, last.slopes, last.intercept)
        return SegmentedModel(self.target, self.frequency, self.segments[:-1] + (tail,))

    # ========== 序列化 ==========

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target": self.target,
            "frequency": self.frequency.value,
            "segments": [seg.to_dict() for seg in self.segments],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SegmentedModel":
        frequency = Frequency(data["frequency"])
        return cls(
            target=data["target"],
            frequency=frequency,
            segments=tuple(Segment.from_dict(s, frequency) for s in data["segments"]),
        )

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SegmentedModel":
        return cls.from_dict(json.loads(text))


# ============================================================================
# 求值
# ============================================================================


def _resolve_inputs(
    model: SegmentedModel, inputs: Mapping[str, Series]
) -> Dict[Regressor, Series]:
    resolved = {}
    for reg in model.regressors():
        series = inputs.get(reg.kind.role)
        if series is None:
            series = inputs.get(reg.kind.value)
        if series is None:
            raise MissingRegressor(
                f"model '{model.target}' needs input '{reg.kind.role}'",
                available=sorted(inputs),
            )
        if series.frequency != model.frequency:
            raise FrequencyMismatch(
                f"input '{reg.kind.role}' is {series.frequency.value}, "
                f"model is {model.frequency.value}"
            )
        resolved[reg] = series
    return resolved


def _feasible_window(resolved: Dict[Regressor, Series]) -> Tuple[Period, Period]:
    """所有解释变量滞后平移后都有数据的区间"""
    lo = max(s.start.shift(r.lag) for r, s in resolved.items())
    hi = min(s.end.shift(r.lag) for r, s in resolved.items())
    return lo, hi


def evaluate_pieces(model: SegmentedModel, inputs: Mapping[str, Series]) -> List[Series]:
    """
    逐分段计算模型预测值，每个与输入窗口相交的分段一条序列（按时间顺序）

    out(t) = intercept + Σ slope(reg)·input_reg(t − lag_reg)

    只输出落在某个分段内且有滞后输入的时间点；
    与输入窗口不相交的分段跳过；两端封闭且与窗口相交的分段必须被输入完整覆盖。

    Raises:
        MissingRegressor: 缺少输入
        FrequencyMismatch: 频率不一致
        CoverageGap: 输入不能覆盖分段，或覆盖区间内有缺失值
    """
    resolved = _resolve_inputs(model, inputs)
    lo, hi = _feasible_window(resolved)
    if hi < lo:
        raise CoverageGap(f"inputs for '{model.target}' share no lagged range")

    pieces: List[Series] = []
    for seg in model.segments:
        seg_lo = lo if seg.start is None else seg.start
        seg_hi = hi if seg.end is None else seg.end
        bounded = seg.start is not None and seg.end is not None
        if seg_hi < lo or seg_lo > hi:
            continue
        if bounded and (seg_lo < lo or seg_hi > hi):
            raise CoverageGap(
                f"segment {seg.start}..{seg.end} of '{model.target}' not covered "
                f"by lagged inputs ({lo}..{hi})"
            )
        seg_lo = max(seg_lo, lo)
        seg_hi = min(seg_hi, hi)
        if seg_hi < seg_lo:
            continue

        values = np.full(seg_hi.distance(seg_lo) + 1, seg.intercept)
        for reg, slope in seg.slopes.items():
            series = resolved[reg]
            x = series.slice(seg_lo.shift(-reg.lag), seg_hi.shift(-reg.lag)).values
            if np.isnan(x).any():
                raise CoverageGap(
                    f"input '{series.role}' has missing values inside "
                    f"{seg_lo}..{seg_hi} (lag {reg.lag})"
                )
            values = values + slope * x
        pieces.append(
            Series(
                frequency=model.frequency,
                start=seg_lo,
                values=values,
                unit=Unit.RATE_PER_YEAR,
                role=model.target,
            )
        )

    if not pieces:
        raise CoverageGap(
            f"no segment of '{model.target}' overlaps the input range {lo}..{hi}"
        )
    return pieces


def evaluate(model: SegmentedModel, inputs: Mapping[str, Series]) -> Series:
    """
    计算模型预测值（连续序列）

    首尾只覆盖 evaluate_pieces 给出的区间；分段之间不属于任何分段的时间点
    是缺失值（NaN），表示该处没有输出，缺失值在 CSV 中写为空。

    Raises:
        同 evaluate_pieces
    """
    pieces = evaluate_pieces(model, inputs)
    start, end = pieces[0].start, pieces[-1].end
    out = np.full(end.distance(start) + 1, np.nan)
    for piece in pieces:
        offset = piece.start.distance(start)
        out[offset : offset + len(piece)] = piece.values

    logger.debug(f"[Model] evaluate {model.target}: {start}..{end}, {len(pieces)} segment(s)")
    return pieces[0].replace(start=start, values=out)


def forecast(
    model: SegmentedModel,
    projections: Mapping[str, Series],
    horizon: int,
    start: Optional[Period] = None,
) -> Series:
    """
    用解释变量预测值外推目标变量

    最后一段视为向未来无限延伸；预测从 start（默认为投影数据可用的首期）
    开始，共 horizon 期。

    Raises:
        CoverageGap: 投影不足以覆盖预测步长
    """
    if horizon < 0:
        raise InvalidArgument(f"horizon must be >= 0, got {horizon}")
    resolved = _resolve_inputs(model, projections)
    lo, hi = _feasible_window(resolved)
    first = start if start is not None else lo

    if horizon == 0:
        return Series.empty(model.frequency, first, Unit.RATE_PER_YEAR, model.target)

    last = first.shift(horizon - 1)
    if first < lo or last > hi:
        raise CoverageGap(
            f"projections cover {lo}..{hi}, forecast needs {first}..{last}"
        )

    window = _restrict(model.extended(), first, last)
    if window is None:
        logger.warning(f"[Model] forecast window {first}..{last} precedes model '{model.target}'")
        return Series.empty(model.frequency, first, Unit.RATE_PER_YEAR, model.target)

    result = evaluate(window, projections)
    logger.info(f"[Model] forecast {model.target}: {result.start}..{result.end}")
    return result


def _restrict(
    model: SegmentedModel, lo: Period, hi: Period
) -> Optional[SegmentedModel]:
    """把各分段裁剪到 [lo, hi]，没有交集的分段丢弃"""
    segments = []
    for seg in model.segments:
        seg_lo = lo if seg.start is None else max(seg.start, lo)
        seg_hi = hi if seg.end is None else min(seg.end, hi)
        if seg_hi < seg_lo:
            continue
        segments.append(Segment(seg_lo, seg_hi, seg.slopes, seg.intercept))
    if not segments:
        return None
    return SegmentedModel(model.target, model.frequency, tuple(segments))


# ============================================================================
# 广义求和形式
# ============================================================================


def generalized_sum(
    inflation: SegmentedModel, unemployment: SegmentedModel
) -> SegmentedModel:
    """
    通胀模型与失业模型相加得到 π + UE 的广义关系

    两个模型的断点取并集；同一 (种类, 滞后) 的斜率相加，截距相加。
    某个区间只被一个模型覆盖时不输出该区间。
    """
    if inflation.frequency != unemployment.frequency:
        raise FrequencyMismatch(
            f"cannot sum {inflation.frequency.value} and {unemployment.frequency.value} models"
        )

    starts = sorted(
        {seg.start for m in (inflation, unemployment) for seg in m.segments if seg.start is not None}
        | {
            seg.end.shift(1)
            for m in (inflation, unemployment)
            for seg in m.segments
            if seg.end is not None
        }
    )
    first_open = inflation.segments[0].start is None or unemployment.segments[0].start is None
    last_open = inflation.segments[-1].end is None or unemployment.segments[-1].end is None

    # 基本区间：(None, s0-1), (s0, s1-1), ..., (sk, None)
    bounds: List[Tuple[Optional[Period], Optional[Period]]] = []
    edges: List[Optional[Period]] = [None] + list(starts) + [None]
    for lo, nxt in zip(edges[:-1], edges[1:]):
        hi = None if nxt is None else nxt.shift(-1)
        if lo is None and not first_open:
            continue
        if hi is None and not last_open:
            continue
        bounds.append((lo, hi))

    segments: List[Segment] = []
    for lo, hi in bounds:
        at = lo if lo is not None else hi
        if at is None:
            # 两个模型都只有一个完全开放的分段
            a, b = inflation.segments[0], unemployment.segments[0]
        else:
            a = inflation.segment_for(at)
            b = unemployment.segment_for(at)
        if a is None or b is None:
            continue
        slopes: Dict[Regressor, float] = dict(a.slopes)
        for reg, v in b.slopes.items():
            slopes[reg] = slopes.get(reg, 0.0) + v
        segments.append(Segment(lo, hi, slopes, a.intercept + b.intercept))

    # 合并系数相同的相邻区间
    merged: List[Segment] = []
    for seg in segments:
        prev = merged[-1] if merged else None
        if (
            prev is not None
            and prev.end is not None
            and seg.start is not None
            and prev.end.shift(1) == seg.start
            and prev.slopes == seg.slopes
            and prev.intercept == seg.intercept
        ):
            merged[-1] = Segment(prev.start, seg.end, prev.slopes, prev.intercept)
        else:
            merged.append(seg)

    if not merged:
        raise InvalidArgument("models share no common segment range")
    return SegmentedModel(
        target=f"{inflation.target}+{unemployment.target}",
        frequency=inflation.frequency,
        segments=tuple(merged),
    )
