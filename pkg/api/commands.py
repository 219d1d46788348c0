# -*- coding: utf-8 -*-
"""
命令定义

每个命令把 RunSpec 交给 AnalysisService 的同名方法，
返回 CommandResult（摘要数据 + 写出的文件）。
"""

from typing import Optional

from lfmodel.tools import Command, CommandKit, CommandResult

from api.models import RunSpec
from api.service import AnalysisService, RunOutput, analysis_service


class ServiceCommand(Command):
    """委托给分析服务的命令"""

    def __init__(self, service: AnalysisService):
        super().__init__()
        self._service = service

    def execute(self, spec: RunSpec) -> CommandResult:
        output: RunOutput = getattr(self._service, self.name)(spec)
        return CommandResult.ok(output.data, output.files)


class ValidateCommand(ServiceCommand):
    name = "validate"
    description = "加载数据清单，输出各序列区间、缺失与口径断点"


class FitCommand(ServiceCommand):
    name = "fit"
    description = "累积曲线法标定分段模型"


class PredictCommand(ServiceCommand):
    name = "predict"
    description = "用预置或已标定模型计算预测值"


class DiagnoseCommand(ServiceCommand):
    name = "diagnose"
    description = "残差单位根检验与协整检验"


class ForecastCommand(ServiceCommand):
    name = "forecast"
    description = "用解释变量投影外推目标变量"


class ReportCommand(ServiceCommand):
    name = "report"
    description = "摘要、标定、检验与图表一次输出"


class TablesCommand(ServiceCommand):
    name = "tables"
    description = "蒙特卡洛模拟重建临界值表"


class SynthCommand(ServiceCommand):
    name = "synth"
    description = "生成合成劳动力/失业率数据与清单"


COMMAND_TYPES = (
    ValidateCommand,
    FitCommand,
    PredictCommand,
    DiagnoseCommand,
    ForecastCommand,
    ReportCommand,
    TablesCommand,
    SynthCommand,
)


def build_kit(service: Optional[AnalysisService] = None) -> CommandKit:
    """注册全部命令"""
    service = service or analysis_service
    return CommandKit([cls(service) for cls in COMMAND_TYPES])
