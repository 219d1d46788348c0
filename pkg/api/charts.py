# -*- coding: utf-8 -*-
"""
SVG 折线图

一张图画若干条同一时间轴上的曲线（坐标轴标签与图例）。
SVG 元数据只含版本与调用方给出的说明（输入哈希），不含日期，相同输入得到相同文件。
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from lfmodel import __version__  # noqa: E402

logger = logging.getLogger(__name__)

DPI = 100
# 固定 SVG 内部 id 的哈希盐
SVG_HASH_SALT = "lfmodel"


def line_chart(
    path: Union[str, Path],
    title: str,
    periods: Sequence[str],
    curves: List[Tuple[str, np.ndarray]],
    y_label: str = "",
    width: int = 800,
    height: int = 360,
    note: Optional[str] = None,
    marks: Sequence[str] = (),
    description: Optional[str] = None,
) -> Path:
    """
    写出折线图

    Args:
        path: SVG 路径
        title: 标题
        periods: 横轴时间标签
        curves: (图例, 数值) 列表，缺失值处断线
        y_label: 纵轴标签
        note: 图下方的说明（如已知口径断点）
        marks: 画竖虚线的时间标签（不在 periods 中的忽略）
        description: 写入 SVG 元数据 Description 的文本
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    x = np.arange(len(periods))
    metadata = {"Date": None, "Creator": f"lfmodel {__version__}"}
    if description:
        metadata["Description"] = description

    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(width / DPI, height / DPI), dpi=DPI)
        try:
            for label, values in curves:
                ax.plot(x, np.asarray(values, dtype=float), label=label, linewidth=1.2)

            step = max(1, len(periods) // 8)
            ticks = x[::step]
            ax.set_xticks(ticks)
            ax.set_xticklabels([periods[i] for i in ticks], rotation=30, ha="right", fontsize=8)
            ax.set_title(title)
            ax.set_xlabel("period")
            ax.set_ylabel(y_label)
            ax.grid(True, linewidth=0.3)
            ax.legend(loc="best", fontsize=8)
            for mark in marks:
                if mark in periods:
                    ax.axvline(list(periods).index(mark), color="grey", linestyle="--", linewidth=0.8)
            if note:
                fig.text(0.01, 0.01, note, fontsize=7)
            fig.tight_layout()
            fig.savefig(path, format="svg", metadata=metadata)
        finally:
            plt.close(fig)

    logger.debug(f"[Chart] wrote {path}")
    return path
