# -*- coding: utf-8 -*-
"""
异常定义

工具包内所有模块共用的异常层级。每个异常类带有独立的退出码，
命令行层据此返回非零状态并输出机器可读的错误记录。
"""

from typing import Any, Dict, Optional


class ToolkitError(Exception):
    """工具包异常基类"""

    exit_code: int = 2

    def __init__(self, message: str, **details: Any):
        self.message = message
        self.details: Dict[str, Any] = {
            k: str(v) if not isinstance(v, (int, float, str, bool, type(None))) else v
            for k, v in details.items()
        }
        super().__init__(message)

    def to_record(self) -> Dict[str, Any]:
        """转换为机器可读的错误记录"""
        return {
            "error": self.__class__.__name__,
            "message": self.message,
            "exit_code": self.exit_code,
            "details": dict(self.details),
        }


# ============================================================================
# 通用
# ============================================================================


class InvalidArgument(ToolkitError):
    """参数不合法"""

    exit_code = 3


class InvalidSeries(ToolkitError):
    """序列或时间点违反不变量"""

    exit_code = 4


# ============================================================================
# series-core
# ============================================================================


class DivisionByZeroLevel(ToolkitError):
    """增长率分母为 0"""

    exit_code = 10


class InsufficientLength(ToolkitError):
    """序列长度不足"""

    exit_code = 11


class MissingInWindow(ToolkitError):
    """差分窗口内有缺失值"""

    exit_code = 12


class WindowTooLarge(ToolkitError):
    """移动平均窗口超过序列长度"""

    exit_code = 13


class MissingValue(ToolkitError):
    """数值内核不接受缺失值"""

    exit_code = 14


class FrequencyMismatch(ToolkitError):
    """频率不一致"""

    exit_code = 15


class EmptyOverlap(ToolkitError):
    """两个序列没有重叠区间"""

    exit_code = 16


# ============================================================================
# model-core
# ============================================================================


class MissingRegressor(ToolkitError):
    """缺少模型所需的解释变量序列"""

    exit_code = 20


class CoverageGap(ToolkitError):
    """滞后后的输入数据不能覆盖所需区间"""

    exit_code = 21


# ============================================================================
# calibrate
# ============================================================================


class SegmentTooShort(ToolkitError):
    """分段观测数不足"""

    exit_code = 30


class EmptyGrid(ToolkitError):
    """搜索网格为空"""

    exit_code = 31


class DegenerateInput(ToolkitError):
    """解释变量没有方差"""

    exit_code = 32


class InsufficientOverlap(ToolkitError):
    """对齐后公共区间过短"""

    exit_code = 33


class ZeroVariance(ToolkitError):
    """观测序列总平方和为 0"""

    exit_code = 34


# ============================================================================
# econotest
# ============================================================================


class SingularRegression(ToolkitError):
    """检验回归的设计矩阵奇异或完全拟合"""

    exit_code = 40


class SingularCovariance(ToolkitError):
    """Johansen 协方差矩阵奇异"""

    exit_code = 41


class DegenerateResidual(SingularRegression):
    """协整回归残差恒为 0"""

    exit_code = 42


# ============================================================================
# ingest
# ============================================================================


class ParseError(ToolkitError):
    """数据文件解析失败"""

    exit_code = 50

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        row: Optional[int] = None,
        column: Optional[str] = None,
    ):
        super().__init__(message, path=path, row=row, column=column)


class DuplicatePeriod(ToolkitError):
    """同一时间点出现多行"""

    exit_code = 51


class UnitMismatch(ToolkitError):
    """单位与声明不一致"""

    exit_code = 52


class EmptyResult(ToolkitError):
    """截取结果为空"""

    exit_code = 53
