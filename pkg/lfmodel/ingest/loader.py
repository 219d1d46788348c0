# -*- coding: utf-8 -*-
"""
数据加载

按清单读取本地 CSV，解析时间列、缩放数值、排序并以缺失值补齐空档。
同样的文件与清单总是得到逐位相同的 Dataset。
"""

import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from lfmodel.core import Frequency, Period, Series, Unit, align
from lfmodel.core.errors import (
    DuplicatePeriod,
    EmptyResult,
    InvalidArgument,
    ParseError,
    ToolkitError,
    UnitMismatch,
)
from lfmodel.ingest.manifest import DataManifest, KnownBreak, SourceSpec

logger = logging.getLogger(__name__)

# 比例口径的比率序列超过该值视为误把百分比当比例
MAX_RATE_FRACTION = 1.5

# 视为缺失的单元格
MISSING_TOKENS = {"", "NA", "NaN", "nan", ".."}


# ============================================================================
# 数据集
# ============================================================================


@dataclass(frozen=True)
class Dataset:
    """
    加载后的数据集

    Attributes:
        country: 国家
        series: (角色, 频率) -> 序列
        provenance: 清单与各数据文件的 SHA-256
        known_breaks: 清单中登记的口径断点
    """

    country: str
    series: Dict[Tuple[str, Frequency], Series]
    provenance: Dict[str, Any] = field(default_factory=dict)
    known_breaks: List[KnownBreak] = field(default_factory=list)

    def get(self, role: str, frequency: Optional[Frequency] = None) -> Series:
        """按角色取序列；未给频率时要求该角色只有一个频率"""
        matches = [
            s for (r, f), s in self.series.items()
            if r == role and (frequency is None or f == frequency)
        ]
        if not matches:
            raise InvalidArgument(
                f"dataset has no series '{role}'"
                + (f" at {frequency.value}" if frequency is not None else ""),
                available=[f"{r}/{f.value}" for r, f in sorted(self.series, key=_key_order)],
            )
        if len(matches) > 1:
            raise InvalidArgument(f"series '{role}' exists at several frequencies; pass one")
        return matches[0]

    def roles(self, frequency: Optional[Frequency] = None) -> Dict[str, Series]:
        """角色 -> 序列（限定频率）"""
        return {
            r: s for (r, f), s in sorted(self.series.items(), key=lambda kv: _key_order(kv[0]))
            if frequency is None or f == frequency
        }

    def summary(self) -> List[Dict[str, Any]]:
        """各序列的区间、缺失数与相关口径断点"""
        rows = []
        for (role, freq), s in sorted(self.series.items(), key=lambda kv: _key_order(kv[0])):
            breaks = [
                {"period": b.period, "note": b.note}
                for b in self.known_breaks
                if b.role is None or b.role == role
            ]
            rows.append(
                {
                    "role": role,
                    "frequency": freq.value,
                    "unit": s.unit.value,
                    "start": str(s.start),
                    "end": str(s.end),
                    "length": len(s),
                    "missing": s.missing_count,
                    "known_breaks": breaks,
                }
            )
        return rows


def _key_order(key: Tuple[str, Frequency]) -> Tuple[str, str]:
    return key[0], key[1].value


# ============================================================================
# 加载
# ============================================================================


def file_sha256(path: Union[str, Path]) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _parse_value(text: str, row: int, source: SourceSpec, path: Path) -> float:
    text = text.strip()
    if text in MISSING_TOKENS:
        return np.nan
    try:
        return float(text.replace(",", ""))
    except ValueError:
        raise ParseError(
            f"cannot parse value {text!r}", path=str(path), row=row, column=source.column_value
        ) from None


def load_source(source: SourceSpec, path: Path) -> Series:
    """
    读取单个数据源

    Raises:
        ParseError: 文件不可读、缺少列或某行无法解析
        DuplicatePeriod: 时间重复
        UnitMismatch: 比率序列超出比例口径
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ParseError(f"cannot read {path}: {e}", path=str(path)) from e

    for column in (source.column_period, source.column_value):
        if column not in frame.columns:
            raise ParseError(
                f"column {column!r} not found (have {list(frame.columns)})",
                path=str(path),
                column=column,
            )
    if frame.empty:
        raise ParseError(f"{path} has no data rows", path=str(path))

    observations: Dict[int, float] = {}
    first_period = None
    # 第 1 行是表头，数据行号从 2 开始
    for offset, (period_text, value_text) in enumerate(
        zip(frame[source.column_period], frame[source.column_value])
    ):
        row = offset + 2
        try:
            period = Period.parse(str(period_text).strip(), source.frequency)
        except ToolkitError as e:
            raise ParseError(
                f"cannot parse period {period_text!r}: {e.message}",
                path=str(path),
                row=row,
                column=source.column_period,
            ) from e
        if period.ordinal in observations:
            raise DuplicatePeriod(
                f"period {period} appears more than once in {path}",
                period=str(period),
                row=row,
            )
        observations[period.ordinal] = _parse_value(str(value_text), row, source, path)
        if first_period is None or period < first_period:
            first_period = period

    ordinals = sorted(observations)
    values = np.full(ordinals[-1] - ordinals[0] + 1, np.nan)
    for o in ordinals:
        values[o - ordinals[0]] = observations[o]
    gaps = len(values) - len(ordinals)
    if gaps:
        logger.warning(f"[Ingest] {source.role}: {gaps} gap period(s) in {path.name} filled as missing")

    values = values * source.scale
    if source.unit == Unit.RATE_PER_YEAR:
        present = values[~np.isnan(values)]
        if present.size and float(np.max(np.abs(present))) > MAX_RATE_FRACTION:
            raise UnitMismatch(
                f"rate series '{source.role}' reaches {float(np.max(np.abs(present))):g} "
                f"after scale {source.scale}; declare percent data with scale 0.01",
                role=source.role,
            )

    return Series(
        frequency=source.frequency,
        start=first_period,
        values=values,
        unit=source.unit,
        role=source.role,
    )


def load(manifest: DataManifest) -> Dataset:
    """按清单加载全部数据源"""
    series: Dict[Tuple[str, Frequency], Series] = {}
    hashes: Dict[str, str] = {}
    for source in manifest.sources:
        path = manifest.resolve(source)
        if not path.is_file():
            raise ParseError(f"source file not found: {path}", path=str(path))
        hashes[source.path] = file_sha256(path)
        s = load_source(source, path)
        series[(source.role, source.frequency)] = s
        logger.info(
            f"[Ingest] {source.role}/{source.frequency.value}: {s.start}..{s.end} "
            f"({len(s)} points, {s.missing_count} missing)"
        )

    provenance: Dict[str, Any] = {"sources": hashes}
    if manifest.manifest_path is not None and manifest.manifest_path.is_file():
        provenance["manifest"] = file_sha256(manifest.manifest_path)
    for b in manifest.known_breaks:
        logger.warning(f"[Ingest] known series break at {b.period}: {b.note}")

    return Dataset(
        country=manifest.country,
        series=series,
        provenance=provenance,
        known_breaks=list(manifest.known_breaks),
    )


# ============================================================================
# 导出与比较
# ============================================================================


def export_csv(
    s: Series,
    path: Union[str, Path],
    column_period: str = "period",
    column_value: str = "value",
) -> Path:
    """写出 period,value 两列 CSV；数值用 repr 保证全精度，缺失写为空"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        {
            column_period: [str(p) for p in s.periods()],
            column_value: ["" if np.isnan(v) else repr(float(v)) for v in s.values],
        }
    )
    frame.to_csv(path, index=False)
    return path


def compare_sources(a: Series, b: Series) -> Series:
    """
    两个数据源的逐点差 a − b（重叠区间）

    差值可能为负，人数口径的差以 INDEX 单位返回。

    Raises:
        FrequencyMismatch: 频率不同
        EmptyOverlap: 区间不重叠
    """
    a_part, b_part = align(a, b, 0)
    unit = a.unit if a.unit == b.unit == Unit.RATE_PER_YEAR else Unit.INDEX
    diff = a_part.values - b_part.values
    logger.info(
        f"[Ingest] compare {a.role} vs {b.role}: {a_part.start}..{a_part.end}, "
        f"mean diff {np.nanmean(diff):.6g}"
    )
    return a_part.replace(values=diff, unit=unit, role=f"{a.role}-{b.role}")


def clip_reliable(s: Series, from_period: Period) -> Series:
    """
    截去可靠起点之前的数据

    Raises:
        EmptyResult: 起点晚于序列末期
    """
    if from_period > s.end:
        raise EmptyResult(
            f"clip at {from_period} leaves nothing of '{s.role}' ({s.start}..{s.end})"
        )
    start = max(from_period, s.start)
    return s.slice(start, s.end)
