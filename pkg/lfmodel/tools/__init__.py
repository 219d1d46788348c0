# -*- coding: utf-8 -*-
"""命令与调度模块"""

from .base import Command, CommandResult, CommandKit, parallel_map, INTERNAL_ERROR_CODE

__all__ = [
    "Command",
    "CommandResult",
    "CommandKit",
    "parallel_map",
    "INTERNAL_ERROR_CODE",
]
