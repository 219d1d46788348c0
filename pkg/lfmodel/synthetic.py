# -*- coding: utf-8 -*-
"""
合成数据

按给定分段线性关系生成劳动力与失业率序列，种子固定时结果可复现。
生成器本身就是检验标定与检验统计量的基准答案。
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np

from lfmodel.core import Frequency, Period, Series, Unit
from lfmodel.core.errors import InvalidArgument
from lfmodel.ingest import export_csv

logger = logging.getLogger(__name__)

# ========== 默认参数 ==========
DEFAULT_SLOPE = -2.1
DEFAULT_INTERCEPT = 0.098
DEFAULT_GROWTH_MEAN = 0.015
DEFAULT_GROWTH_SD = 0.02
DEFAULT_GROWTH_PERSISTENCE = 0.99
DEFAULT_LF_START_LEVEL = 10_000_000.0


@dataclass(frozen=True)
class SyntheticCase:
    """
    一组合成数据

    Attributes:
        lf: 劳动力水平（比 ue 早一期开始，环比增长率恰好等于 growth）
        growth: 观测到的劳动力增长率（含观测噪声）
        growth_true: 无噪声的增长率
        ue: 失业率
    """

    lf: Series
    growth: Series
    growth_true: Series
    ue: Series
    slope: float
    intercept: float
    break_at: Optional[Period] = None
    jump: float = 0.0

    @property
    def inputs(self) -> Dict[str, Series]:
        return {"LF_GROWTH": self.growth}


def growth_path(
    n: int,
    rng: np.random.Generator,
    mean: float = DEFAULT_GROWTH_MEAN,
    sd: float = DEFAULT_GROWTH_SD,
    persistence: float = DEFAULT_GROWTH_PERSISTENCE,
) -> np.ndarray:
    """
    围绕 mean 的平稳 AR(1) 增长率

    g(t) − mean = persistence·(g(t−1) − mean) + ε(t)，sd 为平稳标准差，起点取自平稳分布。
    默认参数下年化增长率围绕 1.5% 波动约 2 个百分点，相关时间约 100 期。
    """
    if not 0.0 <= persistence < 1.0:
        raise InvalidArgument(f"persistence must lie in [0, 1), got {persistence}")
    innovation = sd * np.sqrt(1.0 - persistence**2)
    return mean + ar1(n, rng, persistence, innovation, first_scale=sd)


def level_from_growth(
    growth: np.ndarray, frequency: Frequency, first: float = DEFAULT_LF_START_LEVEL
) -> np.ndarray:
    """由环比年化增长率还原水平：lf(t) = lf(t−1)·(1 + g(t)/p)，长度 n + 1"""
    p = frequency.periods_per_year
    return first * np.concatenate([[1.0], np.cumprod(1.0 + growth / p)])


def lf_ue_case(
    n: int = 300,
    frequency: Frequency = Frequency.MONTHLY,
    start: Optional[Period] = None,
    slope: float = DEFAULT_SLOPE,
    intercept: float = DEFAULT_INTERCEPT,
    noise_growth: float = 0.0,
    noise_ue: float = 0.0,
    break_at: Optional[Period] = None,
    jump: float = 0.0,
    seed: int = 0,
    growth: Optional[np.ndarray] = None,
) -> SyntheticCase:
    """
    UE(t) = slope·g(t) + intercept (+ jump, t ≥ break_at) + 噪声

    growth 给定时直接使用，否则由 growth_path 生成平稳 AR(1) 增长率。
    观测噪声分别加在增长率与失业率上（变量含误差）。
    """
    if n < 2:
        raise InvalidArgument(f"synthetic series needs n >= 2, got {n}")
    rng = np.random.default_rng(seed)
    start = start or Period(frequency, 1980, 1)

    g_true = growth_path(n, rng) if growth is None else np.asarray(growth, dtype=float)
    if len(g_true) != n:
        raise InvalidArgument(f"growth has {len(g_true)} values, expected {n}")

    ue = slope * g_true + intercept
    if break_at is not None:
        offset = max(break_at.distance(start), 0)
        ue[offset:] += jump
    if noise_ue > 0:
        ue = ue + rng.normal(0.0, noise_ue, n)
    g_obs = g_true + (rng.normal(0.0, noise_growth, n) if noise_growth > 0 else 0.0)

    lf = level_from_growth(g_obs, frequency)
    logger.debug(
        f"[Synthetic] n={n} {frequency.value} slope={slope} intercept={intercept} "
        f"noise=({noise_growth}, {noise_ue}) seed={seed}"
    )
    return SyntheticCase(
        lf=Series(frequency, start.shift(-1), lf, Unit.PERSONS, "LF"),
        growth=Series(frequency, start, g_obs, Unit.RATE_PER_YEAR, "LF_GROWTH"),
        growth_true=Series(frequency, start, g_true, Unit.RATE_PER_YEAR, "LF_GROWTH"),
        ue=Series(frequency, start, ue, Unit.RATE_PER_YEAR, "UE"),
        slope=slope,
        intercept=intercept,
        break_at=break_at,
        jump=jump,
    )


def ar1(
    n: int,
    rng: np.random.Generator,
    coef: float,
    scale: float = 1.0,
    first_scale: Optional[float] = None,
) -> np.ndarray:
    """零均值 AR(1)；首项标准差默认等于新息标准差"""
    e = rng.normal(0.0, 1.0, n)
    out = np.empty(n)
    out[0] = e[0] * (scale if first_scale is None else first_scale)
    for t in range(1, n):
        out[t] = coef * out[t - 1] + scale * e[t]
    return out


def write_manifest(
    case: SyntheticCase,
    directory: Union[str, Path],
    country: str = "SYNTH",
) -> Path:
    """把合成数据写成 CSV 与清单（人数与比例口径，scale 均为 1）"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    export_csv(case.lf, directory / "lf.csv")
    export_csv(case.ue, directory / "ue.csv")

    freq = case.ue.frequency.value
    manifest = {
        "country": country,
        "sources": [
            {"path": "lf.csv", "role": "LF", "frequency": freq, "unit": "PERSONS", "scale": 1},
            {"path": "ue.csv", "role": "UE", "frequency": freq, "unit": "RATE_PER_YEAR", "scale": 1},
        ],
        "known_breaks": [],
    }
    if case.break_at is not None:
        manifest["known_breaks"].append(
            {"period": str(case.break_at), "note": f"synthetic intercept jump {case.jump}"}
        )
    path = directory / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8")
    logger.info(f"[Synthetic] wrote manifest to {path}")
    return path
