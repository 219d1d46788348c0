# -*- coding: utf-8 -*-
"""
API 路由定义

批处理接口：模型求值、标定与检验，全部为内存计算，不读写文件。
工具包异常以 ErrorRecord 形式返回，不抛出 HTTP 错误。
"""

import logging
from typing import Any, Dict

from fastapi import APIRouter

from lfmodel.core.errors import InvalidArgument, ToolkitError
from lfmodel.models import SegmentedModel, australian_presets, get_preset
from lfmodel.tools import INTERNAL_ERROR_CODE

from api.models import (
    DiagnoseRequest,
    DiagnoseResponse,
    ErrorRecord,
    FitRequest,
    FitResponse,
    HealthResponse,
    PredictRequest,
    PredictResponse,
    PresetInfo,
    PresetListResponse,
    SeriesPayload,
)
from api.service import AnalysisService, _clean, analysis_service

logger = logging.getLogger(__name__)

# 创建路由器
router = APIRouter()


def _error(e: Exception, endpoint: str) -> ErrorRecord:
    if isinstance(e, ToolkitError):
        logger.warning(f"[API] {endpoint} {e.__class__.__name__}: {e.message}")
        return ErrorRecord.model_validate(e.to_record())
    logger.error(f"[API] {endpoint} 错误: {e}", exc_info=True)
    return ErrorRecord(
        error="InternalError", message=f"{e.__class__.__name__}: {e}", exit_code=INTERNAL_ERROR_CODE
    )


def _inputs(payloads: Dict[str, SeriesPayload]) -> Dict[str, Any]:
    return {role: p.to_series() for role, p in payloads.items()}


# ============================================================================
# 系统
# ============================================================================


@router.get("/health", response_model=HealthResponse, tags=["系统"])
async def health_check():
    """健康检查"""
    return HealthResponse()


@router.get("/presets", response_model=PresetListResponse, tags=["模型"])
async def list_presets():
    """列出预置模型"""
    presets = [
        PresetInfo(
            name=name,
            target=model.target,
            frequency=model.frequency.value,
            segments=len(model.segments),
        )
        for name, model in sorted(australian_presets().items())
    ]
    return PresetListResponse(presets=presets)


# ============================================================================
# 计算接口
# ============================================================================


@router.post("/predict", response_model=PredictResponse, tags=["模型"])
async def predict(request: PredictRequest):
    """
    模型求值

    - **preset** / **model**: 预置模型名或模型 JSON（二选一）
    - **inputs**: 角色 -> 解释变量序列
    - **horizon**: 给出时按预测处理，从 start（默认投影首期）起外推
    """
    try:
        if (request.preset is None) == (request.model is None):
            raise InvalidArgument("pass exactly one of 'preset' and 'model'")
        if request.preset is not None:
            model = get_preset(request.preset)
            if model is None:
                raise InvalidArgument(f"unknown preset {request.preset!r}")
        else:
            try:
                model = SegmentedModel.from_dict(request.model)
            except (KeyError, TypeError, ValueError) as e:
                raise InvalidArgument(f"invalid model: {e}") from e

        predicted = AnalysisService.predict_series(
            model, _inputs(request.inputs), request.horizon, request.start
        )
        if len(predicted) == 0:
            return PredictResponse(success=True)
        return PredictResponse(success=True, predicted=SeriesPayload.from_series(predicted))
    except Exception as e:
        return PredictResponse(success=False, error=_error(e, "/predict"))


@router.post("/fit", response_model=FitResponse, tags=["标定"])
async def fit(request: FitRequest):
    """累积曲线法标定"""
    try:
        result = AnalysisService.fit_series(
            request.observed.to_series(), _inputs(request.inputs), request.config
        )
        return FitResponse(success=True, result=_clean(result.to_dict()))
    except Exception as e:
        return FitResponse(success=False, error=_error(e, "/fit"))


@router.post("/diagnose", response_model=DiagnoseResponse, tags=["检验"])
async def diagnose(request: DiagnoseRequest):
    """残差单位根检验；同时给出 observed 与 regressor 时附带协整检验"""
    try:
        report = analysis_service.diagnostics(
            request.residual.to_series(),
            observed=request.observed.to_series() if request.observed else None,
            regressor=request.regressor.to_series() if request.regressor else None,
            adf_lags=request.adf_lags,
            johansen_lags=request.johansen_lags,
            trend=request.trend,
        )
        return DiagnoseResponse(success=True, diagnostics=_clean(report))
    except Exception as e:
        return DiagnoseResponse(success=False, error=_error(e, "/diagnose"))
