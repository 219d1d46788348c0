# -*- coding: utf-8 -*-
"""
时间序列容器与派生序列运算

提供：
- Frequency / Period: 年度、季度、月度的时间索引
- Series: 等间隔序列（缺失值以 NaN 显式标记，索引不留空洞）
- GrowthSpec: 增长率计算方式
- growth_rate / moving_average / cumulative / align: 其余模块依赖的派生运算

所有对象构造后不可变，运算均为纯函数。
"""

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import total_ordering
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from lfmodel.core.errors import (
    DivisionByZeroLevel,
    EmptyOverlap,
    FrequencyMismatch,
    InsufficientLength,
    InvalidArgument,
    InvalidSeries,
    MissingInWindow,
    MissingValue,
    UnitMismatch,
    WindowTooLarge,
)

logger = logging.getLogger(__name__)


# ============================================================================
# 频率与时间点
# ============================================================================


class Frequency(str, Enum):
    """采样频率"""

    ANNUAL = "ANNUAL"
    QUARTERLY = "QUARTERLY"
    MONTHLY = "MONTHLY"

    @property
    def periods_per_year(self) -> int:
        return {"ANNUAL": 1, "QUARTERLY": 4, "MONTHLY": 12}[self.value]


class Unit(str, Enum):
    """序列单位"""

    PERSONS = "PERSONS"
    RATE_PER_YEAR = "RATE_PER_YEAR"
    INDEX = "INDEX"


_ANNUAL_RE = re.compile(r"^(\d{4})$")
_QUARTER_RE = re.compile(r"^(\d{4})-?[Qq]([1-4])$")
_MONTH_RE = re.compile(r"^(\d{4})-(\d{1,2})$")


@total_ordering
@dataclass(frozen=True)
class Period:
    """
    时间点

    Attributes:
        frequency: 频率
        year: 年份
        sub: 季度或月份序号（从 1 开始，年度固定为 1）

    同频率内全序；跨频率比较抛出 FrequencyMismatch。
    """

    frequency: Frequency
    year: int
    sub: int = 1

    def __post_init__(self):
        upper = self.frequency.periods_per_year
        if not 1 <= self.sub <= upper:
            raise InvalidSeries(
                f"sub index {self.sub} out of range [1, {upper}] for {self.frequency.value}",
                year=self.year,
            )

    @property
    def ordinal(self) -> int:
        """自公元 0 年起的期数"""
        return self.year * self.frequency.periods_per_year + (self.sub - 1)

    @classmethod
    def from_ordinal(cls, frequency: Frequency, ordinal: int) -> "Period":
        year, sub = divmod(ordinal, frequency.periods_per_year)
        return cls(frequency, year, sub + 1)

    def shift(self, n: int) -> "Period":
        """向后平移 n 期（n 可为负）"""
        return Period.from_ordinal(self.frequency, self.ordinal + n)

    def distance(self, other: "Period") -> int:
        """other 到 self 的期数差（self - other）"""
        self._check_frequency(other)
        return self.ordinal - other.ordinal

    @classmethod
    def parse(cls, text: str, frequency: Optional[Frequency] = None) -> "Period":
        """
        解析 "1994"、"1994-Q2"、"1994-07" 格式

        Args:
            text: 时间点文本
            frequency: 期望的频率；为空时根据格式推断
        """
        text = str(text).strip()
        if m := _QUARTER_RE.match(text):
            period = cls(Frequency.QUARTERLY, int(m.group(1)), int(m.group(2)))
        elif m := _MONTH_RE.match(text):
            period = cls(Frequency.MONTHLY, int(m.group(1)), int(m.group(2)))
        elif m := _ANNUAL_RE.match(text):
            period = cls(Frequency.ANNUAL, int(m.group(1)), 1)
        else:
            raise InvalidArgument(f"unrecognised period '{text}'")
        if frequency is not None and period.frequency != frequency:
            raise FrequencyMismatch(
                f"period '{text}' is {period.frequency.value}, expected {frequency.value}"
            )
        return period

    def _check_frequency(self, other: "Period"):
        if not isinstance(other, Period):
            raise TypeError(f"cannot compare Period with {type(other).__name__}")
        if other.frequency != self.frequency:
            raise FrequencyMismatch(
                f"cannot compare {self.frequency.value} with {other.frequency.value}"
            )

    def __lt__(self, other: "Period") -> bool:
        self._check_frequency(other)
        return self.ordinal < other.ordinal

    def __str__(self) -> str:
        if self.frequency == Frequency.ANNUAL:
            return f"{self.year:04d}"
        if self.frequency == Frequency.QUARTERLY:
            return f"{self.year:04d}-Q{self.sub}"
        return f"{self.year:04d}-{self.sub:02d}"


# ============================================================================
# 序列
# ============================================================================


@dataclass(frozen=True, eq=False)
class Series:
    """
    等间隔时间序列

    Attributes:
        frequency: 频率
        start: 首个时间点
        values: 数值（NaN 表示缺失）
        unit: 单位
        role: 自由标签，如 "LF"、"UE"、"DGDP"、"CPI"
    """

    frequency: Frequency
    start: Period
    values: np.ndarray
    unit: Unit
    role: str = ""
    _allow_empty: bool = field(default=False, repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

        if self.start.frequency != self.frequency:
            raise InvalidSeries(
                f"start {self.start} does not match frequency {self.frequency.value}",
                role=self.role,
            )
        if len(values) == 0 and not self._allow_empty:
            raise InvalidSeries("series must hold at least one value", role=self.role)
        if self.unit == Unit.PERSONS:
            present = values[~np.isnan(values)]
            if np.any(present < 0):
                raise InvalidSeries("PERSONS values must be non-negative", role=self.role)

    @classmethod
    def empty(
        cls, frequency: Frequency, start: Period, unit: Unit, role: str = ""
    ) -> "Series":
        """空序列，只用于零步长预测"""
        return cls(frequency, start, np.empty(0), unit, role, _allow_empty=True)

    # ========== 索引 ==========

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> Period:
        return self.start.shift(len(self.values) - 1)

    @property
    def has_missing(self) -> bool:
        return bool(np.isnan(self.values).any())

    @property
    def missing_count(self) -> int:
        return int(np.isnan(self.values).sum())

    def periods(self) -> List[Period]:
        return [self.start.shift(i) for i in range(len(self.values))]

    def index_of(self, period: Period) -> int:
        """时间点在序列中的位置（可能越界，由调用方检查）"""
        return period.distance(self.start)

    def covers(self, start: Period, end: Period) -> bool:
        return (
            len(self) > 0
            and self.index_of(start) >= 0
            and self.index_of(end) <= len(self) - 1
        )

    def value_at(self, period: Period) -> float:
        idx = self.index_of(period)
        if not 0 <= idx < len(self.values):
            raise InvalidArgument(f"period {period} outside series {self.role}")
        return float(self.values[idx])

    def slice(self, start: Period, end: Period) -> "Series":
        """截取 [start, end] 闭区间"""
        lo = self.index_of(start)
        hi = self.index_of(end)
        if lo < 0 or hi >= len(self.values) or hi < lo:
            raise InvalidArgument(
                f"slice {start}..{end} outside series range {self.start}..{self.end}"
            )
        return self.replace(values=self.values[lo : hi + 1], start=start)

    def replace(
        self,
        values: Optional[np.ndarray] = None,
        start: Optional[Period] = None,
        unit: Optional[Unit] = None,
        role: Optional[str] = None,
    ) -> "Series":
        return Series(
            frequency=self.frequency,
            start=start if start is not None else self.start,
            values=self.values if values is None else values,
            unit=unit if unit is not None else self.unit,
            role=self.role if role is None else role,
        )

    def require_complete(self, what: str = "series"):
        """数值内核前置检查：不允许缺失值"""
        if self.has_missing:
            first = int(np.flatnonzero(np.isnan(self.values))[0])
            raise MissingValue(
                f"{what} '{self.role}' has missing value at {self.start.shift(first)}",
                role=self.role,
            )

    # ========== 序列化 ==========

    def to_dict(self) -> Dict[str, Any]:
        return {
            "frequency": self.frequency.value,
            "start": str(self.start),
            "unit": self.unit.value,
            "role": self.role,
            "values": [None if np.isnan(v) else float(v) for v in self.values],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Series":
        frequency = Frequency(data["frequency"])
        values = [np.nan if v is None else float(v) for v in data["values"]]
        return cls(
            frequency=frequency,
            start=Period.parse(data["start"], frequency),
            values=np.array(values, dtype=float),
            unit=Unit(data.get("unit", Unit.RATE_PER_YEAR.value)),
            role=data.get("role", ""),
        )

    def __repr__(self) -> str:
        return (
            f"Series(role={self.role!r}, {self.frequency.value}, "
            f"{self.start}..{self.end}, n={len(self)}, unit={self.unit.value})"
        )


# ============================================================================
# 增长率配置
# ============================================================================


class GrowthMethod(str, Enum):
    """增长率口径"""

    BACKWARD = "BACKWARD"  # 环比，按每年期数年化
    YEAR_OVER_YEAR = "YEAR_OVER_YEAR"  # 同比


# 年度 MA(3)、月度 MA(12)；季度不平滑
DEFAULT_SMOOTH_WINDOW = {
    Frequency.ANNUAL: 3,
    Frequency.QUARTERLY: 0,
    Frequency.MONTHLY: 12,
}


@dataclass(frozen=True)
class GrowthSpec:
    """增长率计算方式"""

    method: GrowthMethod = GrowthMethod.BACKWARD
    smooth_window: int = 0

    def __post_init__(self):
        if self.smooth_window < 0 or self.smooth_window == 1:
            raise InvalidArgument(
                f"smooth_window must be 0 or >= 2, got {self.smooth_window}"
            )

    @classmethod
    def default_for(cls, frequency: Frequency) -> "GrowthSpec":
        """月度默认同比（对单月噪声更稳定），其余默认环比"""
        method = (
            GrowthMethod.YEAR_OVER_YEAR
            if frequency == Frequency.MONTHLY
            else GrowthMethod.BACKWARD
        )
        return cls(method=method, smooth_window=DEFAULT_SMOOTH_WINDOW[frequency])


# ============================================================================
# 派生运算
# ============================================================================


def growth_rate(lf: Series, spec: GrowthSpec) -> Series:
    """
    水平序列的年化相对变化率 dLF/LF

    BACKWARD: p·(lf(t) − lf(t−1))/lf(t−1)
    YEAR_OVER_YEAR: (lf(t) − lf(t−p))/lf(t−p)
    """
    if lf.unit == Unit.RATE_PER_YEAR:
        raise UnitMismatch(
            f"growth_rate expects a level series, got rate series '{lf.role}'"
        )

    p = lf.frequency.periods_per_year
    span = 1 if spec.method == GrowthMethod.BACKWARD else p
    factor = float(p) if spec.method == GrowthMethod.BACKWARD else 1.0

    if len(lf) < span + 1:
        raise InsufficientLength(
            f"growth_rate needs at least {span + 1} values, got {len(lf)}",
            role=lf.role,
        )

    v = lf.values
    if np.isnan(v).any():
        first = int(np.flatnonzero(np.isnan(v))[0])
        raise MissingInWindow(
            f"missing level at {lf.start.shift(first)} inside differencing window",
            role=lf.role,
        )

    base = v[:-span]
    if np.any(base == 0):
        first = int(np.flatnonzero(base == 0)[0])
        raise DivisionByZeroLevel(
            f"zero level at {lf.start.shift(first)}", role=lf.role
        )

    out = factor * (v[span:] - base) / base
    role = f"{lf.role}_GROWTH" if lf.role else "GROWTH"
    result = Series(
        frequency=lf.frequency,
        start=lf.start.shift(span),
        values=out,
        unit=Unit.RATE_PER_YEAR,
        role=role,
    )
    if spec.smooth_window > 0:
        result = moving_average(result, spec.smooth_window)
    return result


def moving_average(s: Series, window: int) -> Series:
    """
    移动平均

    奇数窗口居中（两端各损失 (window−1)/2 个点），
    偶数窗口为尾随平均（开头损失 window−1 个点）。
    """
    if window < 2:
        raise InvalidArgument(f"moving average window must be >= 2, got {window}")
    if window > len(s):
        raise WindowTooLarge(
            f"window {window} exceeds series length {len(s)}", role=s.role
        )
    s.require_complete("moving_average input")

    means = sliding_window_view(s.values, window).mean(axis=1)
    # 保证不越出输入的取值范围
    means = np.clip(means, s.values.min(), s.values.max())

    lead = (window - 1) // 2 if window % 2 == 1 else window - 1
    return s.replace(values=means, start=s.start.shift(lead))


def cumulative(s: Series) -> Series:
    """
    累积曲线

    子年度频率每期累加 value/p，常数年化率 r 每个日历年累积 r。
    """
    s.require_complete("cumulative input")
    p = s.frequency.periods_per_year
    return s.replace(values=np.cumsum(s.values) / p, unit=Unit.INDEX)


def align(a: Series, b: Series, lag_on_b: int = 0) -> Tuple[Series, Series]:
    """
    按滞后对齐两个序列

    b 向后平移 lag_on_b 期（b(t−lag) 与 a(t) 配对），
    返回两者在重叠区间上的截取；第二个序列重新索引到 a 的时间轴上。
    """
    if a.frequency != b.frequency:
        raise FrequencyMismatch(
            f"cannot align {a.frequency.value} '{a.role}' with {b.frequency.value} '{b.role}'"
        )
    shifted = b.replace(start=b.start.shift(lag_on_b))

    lo = max(a.start, shifted.start)
    hi = min(a.end, shifted.end)
    if hi < lo:
        raise EmptyOverlap(
            f"no overlap between '{a.role}' ({a.start}..{a.end}) and "
            f"'{b.role}' lagged {lag_on_b} ({shifted.start}..{shifted.end})"
        )
    return a.slice(lo, hi), shifted.slice(lo, hi)


def common_range(*series: Series) -> Tuple[Period, Period]:
    """多个序列的公共区间"""
    if not series:
        raise InvalidArgument("common_range needs at least one series")
    frequency = series[0].frequency
    for s in series[1:]:
        if s.frequency != frequency:
            raise FrequencyMismatch(
                f"'{s.role}' is {s.frequency.value}, expected {frequency.value}"
            )
    lo = max(s.start for s in series)
    hi = min(s.end for s in series)
    if hi < lo:
        raise EmptyOverlap(
            "series have no common range: "
            + ", ".join(f"{s.role}={s.start}..{s.end}" for s in series)
        )
    return lo, hi
