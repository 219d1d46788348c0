# -*- coding: utf-8 -*-
"""
澳大利亚预置模型

按原始不等式取分段边界："t < 1995" / "t > 1994" 表示 1994 属于前一段，
1984/1985 同理。CPI 广义模型中 "1984 < t < 1996" 把 1995 划入中间段。
所有预置模型均为同期关系（滞后 0）。
"""

from typing import Dict, Optional

from lfmodel.core import Frequency, Period
from lfmodel.models.model import Regressor, RegressorKind, Segment, SegmentedModel

LF = Regressor(RegressorKind.LF_GROWTH, 0)
UE = Regressor(RegressorKind.UNEMPLOYMENT, 0)
CPI = Regressor(RegressorKind.CPI_INFLATION, 0)


def _last_of(year: int, frequency: Frequency) -> Period:
    return Period(frequency, year, frequency.periods_per_year)


def _first_of(year: int, frequency: Frequency) -> Period:
    return Period(frequency, year, 1)


def _two_segment(
    target: str,
    frequency: Frequency,
    regressor: Regressor,
    last_year_before: int,
    before: tuple,
    after: tuple,
) -> SegmentedModel:
    """两段模型：before/after 为 (斜率, 截距)"""
    return SegmentedModel(
        target=target,
        frequency=frequency,
        segments=(
            Segment(
                start=None,
                end=_last_of(last_year_before, frequency),
                slopes={regressor: before[0]},
                intercept=before[1],
            ),
            Segment(
                start=_first_of(last_year_before + 1, frequency),
                end=None,
                slopes={regressor: after[0]},
                intercept=after[1],
            ),
        ),
    )


def australian_presets() -> Dict[str, SegmentedModel]:
    """
    澳大利亚经验模型

    Returns:
        名称 -> 模型：phillips-annual, ue-annual, ue-monthly,
        dgdp-annual, dgdp-quarterly, cpi-generalized
    """
    annual = Frequency.ANNUAL
    return {
        # UE = −0.47·CPI + 0.112 (t<1995); −1.5·CPI + 0.105 (t>1994)
        "phillips-annual": _two_segment(
            "UE", annual, CPI, 1994, (-0.47, 0.112), (-1.5, 0.105)
        ),
        # dLF/LF 经 MA(3) 平滑
        "ue-annual": _two_segment(
            "UE", annual, LF, 1994, (-2.1, 0.13), (-2.1, 0.098)
        ),
        # dLF/LF 经 MA(12) 平滑
        "ue-monthly": _two_segment(
            "UE", Frequency.MONTHLY, LF, 1994, (-1.77, 0.124), (-2.1, 0.0977)
        ),
        "dgdp-annual": _two_segment(
            "DGDP", annual, LF, 1984, (7.8, -0.024), (4.2, -0.042)
        ),
        # 季度年化环比
        "dgdp-quarterly": _two_segment(
            "DGDP", Frequency.QUARTERLY, LF, 1984, (6.5, -0.021), (3.3, -0.026)
        ),
        "cpi-generalized": SegmentedModel(
            target="CPI",
            frequency=annual,
            segments=(
                Segment(None, Period(annual, 1984), {LF: 8.3, UE: 0.97}, -0.1),
                Segment(Period(annual, 1985), Period(annual, 1995), {LF: 3.9, UE: 0.97}, -0.1),
                Segment(Period(annual, 1996), None, {LF: 3.9, UE: 0.88}, -0.1),
            ),
        ),
    }


def get_preset(name: str) -> Optional[SegmentedModel]:
    """按名称获取预置模型"""
    return australian_presets().get(name)
