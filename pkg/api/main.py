# -*- coding: utf-8 -*-
"""
lfmodel 批处理 HTTP 服务

启动方式：
    uvicorn api.main:app --host 0.0.0.0 --port 8000
    # 或
    python -m api.main

API 文档：
    - Swagger UI: http://localhost:8000/docs

环境变量：
    - LFMODEL_API_HOST: 服务主机地址 (默认: 0.0.0.0)
    - LFMODEL_API_PORT: 服务端口 (默认: 8000)
    - LFMODEL_API_DEBUG: 调试模式 (默认: false)
    - LFMODEL_LOG_LEVEL: 日志级别 (默认: INFO)
"""

import logging
import sys
from contextlib import asynccontextmanager

from fastapi import FastAPI

from lfmodel import __version__
from lfmodel.econotest import default_table

from api.config import settings
from api.routes import router

# 配置日志
logging.basicConfig(
    level=settings.run.log_level,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[logging.StreamHandler(sys.stdout)],
)
logger = logging.getLogger(__name__)


# ============================================================================
# 生命周期管理
# ============================================================================


@asynccontextmanager
async def lifespan(app: FastAPI):
    """应用生命周期管理"""
    logger.info("=" * 60)
    logger.info(f"lfmodel {__version__} 服务正在启动...")
    # 预加载临界值表，表文件损坏时启动即失败
    default_table()
    logger.info(f"服务地址: http://{settings.server.host}:{settings.server.port}")
    logger.info("=" * 60)

    yield

    logger.info("服务已关闭")


# ============================================================================
# 创建应用
# ============================================================================


app = FastAPI(
    title="lfmodel API",
    description="劳动力驱动的通胀与失业率模型：求值、标定与计量检验。",
    version=__version__,
    lifespan=lifespan,
)

app.include_router(router, prefix="/api/v1")


@app.get("/", tags=["系统"])
async def root():
    return {
        "service": "lfmodel API",
        "version": __version__,
        "docs": "/docs",
        "health": "/api/v1/health",
    }


# ============================================================================
# 主入口
# ============================================================================


def main():
    """主入口函数"""
    import uvicorn

    uvicorn.run(
        "api.main:app",
        host=settings.server.host,
        port=settings.server.port,
        reload=settings.server.debug,
        workers=settings.server.workers if not settings.server.debug else 1,
    )


if __name__ == "__main__":
    main()
