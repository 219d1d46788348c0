# -*- coding: utf-8 -*-
"""
运行配置模块

集中管理命令行与批处理服务的进程级配置，全部可由环境变量覆盖。
"""

import os
from dataclasses import dataclass, field


@dataclass
class ServerConfig:
    """批处理 HTTP 服务配置"""

    host: str = "0.0.0.0"
    port: int = 8000
    debug: bool = False
    workers: int = 1


@dataclass
class OutputConfig:
    """输出配置"""

    output_dir: str = "out"
    chart_width: int = 800
    chart_height: int = 360


@dataclass
class RunConfig:
    """分析运行配置"""

    # 所有随机过程共用的种子
    seed: int = 0
    # 网格搜索与模拟的并行线程数
    workers: int = 1
    log_level: str = "INFO"


@dataclass
class ToolkitSettings:
    """全局配置"""

    server: ServerConfig = field(default_factory=ServerConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    run: RunConfig = field(default_factory=RunConfig)

    @classmethod
    def from_env(cls) -> "ToolkitSettings":
        """从环境变量加载配置"""
        config = cls()

        # 服务配置
        config.server.host = os.getenv("LFMODEL_API_HOST", config.server.host)
        config.server.port = int(os.getenv("LFMODEL_API_PORT", config.server.port))
        config.server.debug = os.getenv("LFMODEL_API_DEBUG", "false").lower() == "true"

        # 输出配置
        config.output.output_dir = os.getenv("LFMODEL_OUTPUT_DIR", config.output.output_dir)
        config.output.chart_width = int(
            os.getenv("LFMODEL_CHART_WIDTH", config.output.chart_width)
        )
        config.output.chart_height = int(
            os.getenv("LFMODEL_CHART_HEIGHT", config.output.chart_height)
        )

        # 运行配置
        config.run.seed = int(os.getenv("LFMODEL_SEED", config.run.seed))
        config.run.workers = int(os.getenv("LFMODEL_WORKERS", config.run.workers))
        config.run.log_level = os.getenv("LFMODEL_LOG_LEVEL", config.run.log_level).upper()

        return config


# 全局配置实例
settings = ToolkitSettings.from_env()
