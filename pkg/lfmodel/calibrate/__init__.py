# -*- coding: utf-8 -*-
"""
标定模块

- FitConfig: 网格、断点、目标函数配置
- fit_cumulative / break_scan: 累积曲线法标定与断点扫描
- fit_ols / goodness / rmsfe / cumulative_errors: 对照估计与评分
"""

from .config import FitConfig, GridRange, Objective
from .fit import FitResult, fit_cumulative, break_scan
from .grid import Candidate, search_segment, grid_objectives
from .scoring import OLSFit, Goodness, fit_ols, goodness, rmsfe, cumulative_errors

__all__ = [
    # 配置
    "FitConfig",
    "GridRange",
    "Objective",
    # 标定
    "FitResult",
    "fit_cumulative",
    "break_scan",
    "Candidate",
    "search_segment",
    "grid_objectives",
    # 评分
    "OLSFit",
    "Goodness",
    "fit_ols",
    "goodness",
    "rmsfe",
    "cumulative_errors",
]
