# -*- coding: utf-8 -*-
"""模型模块"""

from lfmodel.models.model import (
    RegressorKind,
    Regressor,
    Segment,
    SegmentedModel,
    evaluate,
    evaluate_pieces,
    forecast,
    generalized_sum,
)
from lfmodel.models.presets import australian_presets, get_preset

__all__ = [
    "RegressorKind",
    "Regressor",
    "Segment",
    "SegmentedModel",
    "evaluate",
    "evaluate_pieces",
    "forecast",
    "generalized_sum",
    "australian_presets",
    "get_preset",
]
