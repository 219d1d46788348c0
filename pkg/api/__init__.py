# -*- coding: utf-8 -*-
"""
lfmodel 接口模块

命令行（api.cli）与基于 FastAPI 的批处理服务（api.main）共用分析服务层。
"""

from api.config import settings, ToolkitSettings
from api.models import (
    COMMANDS,
    RunSpec,
    ErrorRecord,
    SeriesPayload,
    PredictRequest,
    PredictResponse,
    FitRequest,
    FitResponse,
    DiagnoseRequest,
    DiagnoseResponse,
    PresetListResponse,
    HealthResponse,
)
from api.service import AnalysisService, RunOutput, analysis_service
from api.commands import build_kit

__all__ = [
    # 配置
    "settings",
    "ToolkitSettings",
    # 数据模型
    "COMMANDS",
    "RunSpec",
    "ErrorRecord",
    "SeriesPayload",
    "PredictRequest",
    "PredictResponse",
    "FitRequest",
    "FitResponse",
    "DiagnoseRequest",
    "DiagnoseResponse",
    "PresetListResponse",
    "HealthResponse",
    # 服务
    "AnalysisService",
    "RunOutput",
    "analysis_service",
    "build_kit",
]
