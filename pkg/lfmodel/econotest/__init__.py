# -*- coding: utf-8 -*-
"""
计量检验模块

单位根（ADF、PP、DF-GLS）与协整（Engle-Granger、Johansen）检验，
临界值全部来自 simulate_critical_values 的模拟结果（随包 CSV 或按需模拟的缓存）。
"""

from .critical import (
    CriticalTable,
    CriticalTest,
    LEVELS,
    SimulatedTable,
    critical_values,
    default_table,
)
from .regression import Deterministic, OLSResult, ols
from .unitroot import (
    UnitRootTest,
    UnitRootReport,
    adf_test,
    pp_test,
    dfgls_test,
    dfgls_sweep,
    default_pp_bandwidth,
)
from .cointegration import (
    TrendSpec,
    CointegrationReport,
    engle_granger,
    johansen_test,
    DEFAULT_JOHANSEN_LAGS,
)
from .simulate import simulate_critical_values, build_table, table_rows

__all__ = [
    # 临界值
    "CriticalTable",
    "CriticalTest",
    "LEVELS",
    "SimulatedTable",
    "critical_values",
    "default_table",
    # 回归
    "Deterministic",
    "OLSResult",
    "ols",
    # 单位根
    "UnitRootTest",
    "UnitRootReport",
    "adf_test",
    "pp_test",
    "dfgls_test",
    "dfgls_sweep",
    "default_pp_bandwidth",
    # 协整
    "TrendSpec",
    "CointegrationReport",
    "engle_granger",
    "johansen_test",
    "DEFAULT_JOHANSEN_LAGS",
    # 模拟
    "simulate_critical_values",
    "build_table",
    "table_rows",
]
