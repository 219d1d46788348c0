# -*- coding: utf-8 -*-
"""
核心模块

包含时间序列容器及派生序列运算：
- Period / Series: 时间索引与序列
- GrowthSpec: 增长率口径
- growth_rate / moving_average / cumulative / align: 派生运算

异常请从 lfmodel.core.errors 导入。
"""

from .series import (
    # 类型
    Frequency,
    Unit,
    Period,
    Series,
    GrowthMethod,
    GrowthSpec,
    DEFAULT_SMOOTH_WINDOW,
    # 运算
    growth_rate,
    moving_average,
    cumulative,
    align,
    common_range,
)

__all__ = [
    # 类型
    "Frequency",
    "Unit",
    "Period",
    "Series",
    "GrowthMethod",
    "GrowthSpec",
    "DEFAULT_SMOOTH_WINDOW",
    # 运算
    "growth_rate",
    "moving_average",
    "cumulative",
    "align",
    "common_range",
]
