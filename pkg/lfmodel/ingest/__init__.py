# -*- coding: utf-8 -*-
"""数据接入模块"""

from .manifest import DataManifest, SourceSpec, KnownBreak
from .loader import (
    Dataset,
    load,
    load_source,
    export_csv,
    compare_sources,
    clip_reliable,
    file_sha256,
)

__all__ = [
    # 清单
    "DataManifest",
    "SourceSpec",
    "KnownBreak",
    # 加载
    "Dataset",
    "load",
    "load_source",
    "export_csv",
    "compare_sources",
    "clip_reliable",
    "file_sha256",
]
