# -*- coding: utf-8 -*-
"""
lfmodel - 劳动力驱动的通胀与失业率建模工具包

子模块：
- core: 时间序列与派生运算
- models: 分段线性滞后模型与预置模型
- calibrate: 累积曲线法标定
- econotest: 单位根与协整检验
- ingest: 本地 CSV 数据接入
- tools: 命令基类与有序并行
- synthetic: 可复现的合成数据
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
