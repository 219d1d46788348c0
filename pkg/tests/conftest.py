# -*- coding: utf-8 -*-
"""公共测试夹具"""

import json
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pytest

from lfmodel.core import Frequency, Period, Series, Unit


def make_series(
    values,
    start: str = "2000",
    frequency: Optional[Frequency] = None,
    unit: Unit = Unit.RATE_PER_YEAR,
    role: str = "X",
) -> Series:
    """按首期文本构造序列（频率默认由首期格式推断）"""
    period = Period.parse(start, frequency)
    return Series(period.frequency, period, np.asarray(values, dtype=float), unit, role)


def write_csv(path: Path, rows: List[tuple], header=("period", "value")) -> Path:
    lines = [",".join(header)] + [",".join(str(c) for c in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_manifest(path: Path, sources: List[Dict], country: str = "TEST", known_breaks=None) -> Path:
    doc = {"country": country, "sources": sources, "known_breaks": known_breaks or []}
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)
