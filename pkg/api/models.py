# -*- coding: utf-8 -*-
"""
API 数据模型

命令行运行规格、批处理接口的请求/响应，以及机器可读的错误记录。
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from lfmodel import __version__
from lfmodel.calibrate import FitConfig
from lfmodel.core import Series
from lfmodel.econotest import Deterministic, TrendSpec

# 命令集合（每次运行只执行一个命令）
COMMANDS = ("validate", "fit", "predict", "diagnose", "forecast", "report", "tables", "synth")


# ============================================================================
# 通用模型
# ============================================================================


class ErrorRecord(BaseModel):
    """错误记录"""

    error: str = Field(..., description="异常类名")
    message: str = Field(default="", description="错误信息")
    exit_code: int = Field(..., description="进程退出码")
    details: Dict[str, Any] = Field(default_factory=dict)


class SeriesPayload(BaseModel):
    """序列的 JSON 形式（缺失值为 null）"""

    frequency: str
    start: str
    unit: str = "RATE_PER_YEAR"
    role: str = ""
    values: List[Optional[float]] = Field(..., min_length=1)

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "frequency": "ANNUAL",
                "start": "1990",
                "unit": "RATE_PER_YEAR",
                "role": "LF_GROWTH",
                "values": [0.012, 0.015, None, 0.018],
            }
        }
    )

    def to_series(self) -> Series:
        return Series.from_dict(self.model_dump())

    @classmethod
    def from_series(cls, s: Series) -> "SeriesPayload":
        return cls.model_validate(s.to_dict())


# ============================================================================
# 运行规格
# ============================================================================


class RunSpec(BaseModel):
    """一次命令行运行"""

    command: str = Field(..., description="命令名")
    manifest: Optional[str] = Field(default=None, description="数据清单路径")
    config: Optional[str] = Field(default=None, description="标定配置路径")
    preset: Optional[str] = Field(default=None, description="预置模型名")
    model: Optional[str] = Field(default=None, description="fit.json 或模型 JSON 路径")
    out: str = Field(default="out", description="输出目录")
    seed: int = Field(default=0, ge=0)
    from_period: Optional[str] = Field(default=None, description="可靠数据起点")
    breaks: Optional[List[str]] = Field(default=None, description="覆盖配置中的断点")
    target: Optional[str] = Field(default=None, description="目标变量角色")
    frequency: Optional[str] = Field(default=None, description="数据频率")
    horizon: Optional[int] = Field(default=None, ge=0, description="预测步长")
    projections: Optional[str] = Field(default=None, description="解释变量投影清单")
    start: Optional[str] = Field(default=None, description="预测起点")
    workers: int = Field(default=1, ge=1)
    # tables / synth
    replications: int = Field(default=10_000, ge=1)
    sizes: Optional[List[int]] = None
    length: int = Field(default=300, ge=2)
    # diagnose
    adf_lags: int = Field(default=1, ge=0)
    johansen_lags: int = Field(default=2, ge=1)
    trend: TrendSpec = TrendSpec.NONE
    deterministic: Deterministic = Deterministic.CONSTANT

    @field_validator("command")
    @classmethod
    def _check_command(cls, value: str) -> str:
        if value not in COMMANDS:
            raise ValueError(f"unknown command {value!r}; expected one of {COMMANDS}")
        return value


# ============================================================================
# 批处理接口
# ============================================================================


class PredictRequest(BaseModel):
    """模型求值请求：preset 与 model 二选一"""

    preset: Optional[str] = Field(default=None, description="预置模型名")
    model: Optional[Dict[str, Any]] = Field(default=None, description="模型 JSON")
    inputs: Dict[str, SeriesPayload] = Field(..., description="角色 -> 解释变量序列")
    horizon: Optional[int] = Field(default=None, ge=0, description="给出时按预测处理")
    start: Optional[str] = None


class PredictResponse(BaseModel):
    success: bool
    predicted: Optional[SeriesPayload] = None
    error: Optional[ErrorRecord] = None


class FitRequest(BaseModel):
    """标定请求"""

    observed: SeriesPayload
    inputs: Dict[str, SeriesPayload]
    config: FitConfig = Field(default_factory=FitConfig)


class FitResponse(BaseModel):
    success: bool
    result: Optional[Dict[str, Any]] = None
    error: Optional[ErrorRecord] = None


class DiagnoseRequest(BaseModel):
    """检验请求：residual 做单位根检验，observed/regressor 同时给出时做协整检验"""

    residual: SeriesPayload
    observed: Optional[SeriesPayload] = None
    regressor: Optional[SeriesPayload] = None
    adf_lags: int = Field(default=1, ge=0)
    johansen_lags: int = Field(default=2, ge=1)
    trend: TrendSpec = TrendSpec.NONE


class DiagnoseResponse(BaseModel):
    success: bool
    diagnostics: Optional[Dict[str, Any]] = None
    error: Optional[ErrorRecord] = None


class PresetInfo(BaseModel):
    name: str
    target: str
    frequency: str
    segments: int


class PresetListResponse(BaseModel):
    success: bool = True
    presets: List[PresetInfo] = Field(default_factory=list)


class HealthResponse(BaseModel):
    """健康检查响应"""

    status: str = Field(default="ok")
    version: str = Field(default=__version__)
