# -*- coding: utf-8 -*-
"""
标定配置

FitConfig 可从 JSON 文档加载，字段与命令行参数一一对应。
"""

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from lfmodel.core import Frequency, GrowthMethod, GrowthSpec, Period
from lfmodel.core.errors import InvalidArgument
from lfmodel.models import RegressorKind

logger = logging.getLogger(__name__)

# ========== 网格默认值 ==========
# 覆盖全部澳大利亚预置模型的系数
DEFAULT_SLOPE_MIN = -10.0
DEFAULT_SLOPE_MAX = 10.0
DEFAULT_SLOPE_STEP = 0.01
DEFAULT_INTERCEPT_MIN = -0.2
DEFAULT_INTERCEPT_MAX = 0.2
DEFAULT_INTERCEPT_STEP = 0.001
DEFAULT_LAGS = [0, 1, 2, 3]

# ========== 两阶段搜索 ==========
# 粗网格步长 = 细网格步长 × REFINE_FACTOR；细化范围为粗最优点 ±1 个粗步长
DEFAULT_REFINE_FACTOR = 10
DEFAULT_MAX_GRID_POINTS = 2_000_000

# 网格取值的小数位（消除 min + k·step 的浮点误差）
GRID_DECIMALS = 12


class Objective(str, Enum):
    """累积曲线目标函数"""

    CUM_RMS = "CUM_RMS"  # 累积曲线差的均方根
    CUM_ENDPOINT_REL = "CUM_ENDPOINT_REL"  # 累积曲线最大偏差 / 观测累积曲线最大幅度


class GridRange(BaseModel):
    """一维网格 [min, max]，步长 step"""

    min: float
    max: float
    step: float

    @model_validator(mode="after")
    def _check(self) -> "GridRange":
        if not self.min < self.max:
            raise ValueError(f"grid min {self.min} must be below max {self.max}")
        if not self.step > 0:
            raise ValueError(f"grid step must be positive, got {self.step}")
        return self

    @property
    def size(self) -> int:
        return int(np.floor((self.max - self.min) / self.step + 1e-9)) + 1

    def _at(self, k: np.ndarray) -> np.ndarray:
        return np.round(self.min + self.step * k, GRID_DECIMALS)

    def values(self) -> np.ndarray:
        return self._at(np.arange(self.size))

    def coarsen(self, factor: int) -> "GridRange":
        return GridRange(min=self.min, max=self.max, step=self.step * factor)

    def around(self, center: float, radius: int) -> np.ndarray:
        """center 附近 ±radius 个步长内的网格点（center 先夹到 [min, max] 内）"""
        k0 = min(max(int(round((center - self.min) / self.step)), 0), self.size - 1)
        lo = max(0, k0 - radius)
        hi = min(self.size - 1, k0 + radius)
        return self._at(np.arange(lo, hi + 1))

    def within(self, lo: float, hi: float) -> np.ndarray:
        """落在 [lo, hi] 内的网格点，可能为空"""
        lo, hi = max(lo, self.min), min(hi, self.max)
        k_lo = max(0, int(np.ceil((lo - self.min) / self.step - 1e-9)))
        k_hi = min(self.size - 1, int(np.floor((hi - self.min) / self.step + 1e-9)))
        return self._at(np.arange(k_lo, k_hi + 1))


def _default_slope_grid() -> GridRange:
    return GridRange(min=DEFAULT_SLOPE_MIN, max=DEFAULT_SLOPE_MAX, step=DEFAULT_SLOPE_STEP)


def _default_intercept_grid() -> GridRange:
    return GridRange(
        min=DEFAULT_INTERCEPT_MIN, max=DEFAULT_INTERCEPT_MAX, step=DEFAULT_INTERCEPT_STEP
    )


class FitConfig(BaseModel):
    """累积曲线标定配置"""

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "target": "UE",
                "frequency": "MONTHLY",
                "regressors": ["LF_GROWTH"],
                "breaks": ["1995-01"],
                "slope_grid": {"LF_GROWTH": {"min": -5, "max": 0, "step": 0.01}},
                "intercept_grid": {"min": 0, "max": 0.2, "step": 0.001},
                "lag_grid": {"LF_GROWTH": [0]},
                "objective": "CUM_RMS",
            }
        }
    )

    target: str = Field(default="UE", description="目标变量角色")
    frequency: Optional[Frequency] = Field(default=None, description="数据频率")
    regressors: List[RegressorKind] = Field(
        default_factory=lambda: [RegressorKind.LF_GROWTH], min_length=1
    )
    breaks: List[str] = Field(default_factory=list, description="新分段的首期")
    slope_grid: Dict[RegressorKind, GridRange] = Field(default_factory=dict)
    intercept_grid: GridRange = Field(default_factory=_default_intercept_grid)
    lag_grid: Dict[RegressorKind, List[int]] = Field(default_factory=dict)
    objective: Objective = Objective.CUM_RMS
    refine_factor: int = Field(default=DEFAULT_REFINE_FACTOR, ge=2)
    max_grid_points: int = Field(default=DEFAULT_MAX_GRID_POINTS, ge=1)
    workers: int = Field(default=1, ge=1)

    # 解释变量增长率口径（为空时按频率取默认值）
    growth_method: Optional[GrowthMethod] = None
    smooth_window: Optional[int] = Field(default=None, ge=0)

    # 可靠数据起点（clip_reliable）
    reliable_from: Optional[str] = None

    @field_validator("breaks")
    @classmethod
    def _check_breaks(cls, value: List[str]) -> List[str]:
        periods = [Period.parse(b) for b in value]
        for prev, cur in zip(periods[:-1], periods[1:]):
            if not prev < cur:
                raise ValueError(f"breaks must be strictly increasing: {prev} !< {cur}")
        return value

    @field_validator("lag_grid")
    @classmethod
    def _check_lags(cls, value: Dict[RegressorKind, List[int]]) -> Dict[RegressorKind, List[int]]:
        for kind, lags in value.items():
            if not lags:
                raise ValueError(f"lag grid for {kind.value} is empty")
            if any(lag < 0 for lag in lags):
                raise ValueError(f"lags for {kind.value} must be >= 0")
        return value

    # ========== 访问器 ==========

    def slope_range(self, kind: RegressorKind) -> GridRange:
        return self.slope_grid.get(kind) or _default_slope_grid()

    def lags_for(self, kind: RegressorKind) -> List[int]:
        return sorted(set(self.lag_grid.get(kind) or DEFAULT_LAGS))

    def break_periods(self, frequency: Frequency) -> List[Period]:
        return [Period.parse(b, frequency) for b in self.breaks]

    def growth_spec(self, frequency: Frequency) -> GrowthSpec:
        default = GrowthSpec.default_for(frequency)
        return GrowthSpec(
            method=self.growth_method or default.method,
            smooth_window=(
                default.smooth_window if self.smooth_window is None else self.smooth_window
            ),
        )

    # ========== 加载 ==========

    @classmethod
    def from_json_file(cls, path: Union[str, Path]) -> "FitConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
            return cls.model_validate(data)
        except (OSError, json.JSONDecodeError, ValidationError) as e:
            raise InvalidArgument(f"cannot load fit config {path}: {e}", path=str(path)) from e
