# -*- coding: utf-8 -*-
"""
临界值表

表的每一行都来自 simulate_critical_values（列：test, n, deterministic, level, value），
按样本量在 1/n 上线性插值，两端取边界值。

默认表的来源依次为：
1. 随包 CSV（由 scripts/gen_critical_values.sh 调用 `lfmodel tables` 生成，可能不存在）
2. 缓存目录中的 CSV（LFMODEL_CACHE_DIR，默认 ~/.cache/lfmodel）
3. 缺少某个 (检验, 确定性项) 组合时当场模拟整组样本量并写入缓存
"""

import logging
import os
import threading
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np
import pandas as pd

from lfmodel.core.errors import InvalidArgument

logger = logging.getLogger(__name__)

TABLE_PATH = Path(__file__).parent / "data" / "critical_values.csv"
TABLE_COLUMNS = ("test", "n", "deterministic", "level", "value")

# 默认表的模拟设置
DEFAULT_REPLICATIONS = 100_000
DEFAULT_SEED = 0

# 显著性水平（报告顺序）
LEVELS = ("1%", "5%", "10%")
LEVEL_PROB = {"1%": 0.01, "5%": 0.05, "10%": 0.10}


class CriticalTest(str, Enum):
    """临界值表中的检验统计量"""

    ADF = "ADF"  # DF/ADF t 统计量
    DFGLS = "DFGLS"  # GLS 去均值后的 t 统计量
    PP_RHO = "PP_RHO"  # ρ 形式 T·(ρ̂−1)
    EG = "EG"  # 协整回归残差的 t 统计量
    JOHANSEN_R0 = "JOHANSEN_R0"  # 迹统计量，H0: rank = 0
    JOHANSEN_R1 = "JOHANSEN_R1"  # 迹统计量，H0: rank ≤ 1

    @property
    def right_tailed(self) -> bool:
        return self in (CriticalTest.JOHANSEN_R0, CriticalTest.JOHANSEN_R1)


def _concat(*frames: pd.DataFrame) -> pd.DataFrame:
    parts = [f for f in frames if not f.empty]
    if not parts:
        return pd.DataFrame(columns=list(TABLE_COLUMNS))
    return pd.concat(parts, ignore_index=True)


def _read_frame(path: Union[str, Path]) -> pd.DataFrame:
    frame = pd.read_csv(path, dtype={"test": str, "deterministic": str, "level": str})
    logger.debug(f"[Critical] loaded {len(frame)} row(s) from {path}")
    return frame


def cache_dir() -> Path:
    return Path(os.getenv("LFMODEL_CACHE_DIR", str(Path.home() / ".cache" / "lfmodel")))


class CriticalTable:
    """临界值查询"""

    def __init__(self, frame: pd.DataFrame):
        missing = set(TABLE_COLUMNS) - set(frame.columns)
        if missing:
            raise InvalidArgument(f"critical-value table lacks columns {sorted(missing)}")
        self._frame = frame.astype({"n": int, "value": float})

    @classmethod
    def from_csv(cls, path: Union[str, Path] = TABLE_PATH) -> "CriticalTable":
        return cls(_read_frame(path))

    @property
    def frame(self) -> pd.DataFrame:
        return self._frame.copy()

    def _rows(self, test: CriticalTest, det: str) -> pd.DataFrame:
        return self._frame[
            (self._frame["test"] == test.value) & (self._frame["deterministic"] == det)
        ]

    def lookup(self, test: CriticalTest, n: int, deterministic: str) -> Dict[str, float]:
        """
        样本量 n 下各显著性水平的临界值

        Raises:
            InvalidArgument: 表中没有该 (检验, 确定性项) 组合
        """
        test = CriticalTest(test)
        det = getattr(deterministic, "value", deterministic)
        rows = self._rows(test, det)
        if rows.empty:
            raise InvalidArgument(f"no critical values for {test.value}/{det}")

        x = 1.0 / max(int(n), 1)
        result = {}
        for level in LEVELS:
            sub = rows[rows["level"] == level].sort_values("n", ascending=False)
            if sub.empty:
                raise InvalidArgument(f"no {level} critical value for {test.value}/{det}")
            result[level] = float(
                np.interp(x, 1.0 / sub["n"].to_numpy(dtype=float), sub["value"].to_numpy())
            )
        return result


class SimulatedTable(CriticalTable):
    """
    按需模拟的临界值表

    缺少的 (检验, 确定性项) 组合在默认样本量网格上整组模拟，追加到 cache_path。
    同一 replications 与 seed 下的结果与 build_table 写出的 CSV 逐行相同。
    """

    def __init__(
        self,
        frame: pd.DataFrame,
        cache_path: Union[str, Path],
        replications: int = DEFAULT_REPLICATIONS,
        seed: int = DEFAULT_SEED,
        workers: int = 1,
    ):
        self.cache_path = Path(cache_path)
        self.replications = replications
        self.seed = seed
        self.workers = workers
        self._cached = _read_frame(self.cache_path) if self.cache_path.is_file() else _concat()
        self._lock = threading.Lock()
        super().__init__(_concat(frame, self._cached))

    def lookup(self, test: CriticalTest, n: int, deterministic: str) -> Dict[str, float]:
        test = CriticalTest(test)
        det = getattr(deterministic, "value", deterministic)
        if self._rows(test, det).empty:
            with self._lock:
                if self._rows(test, det).empty:
                    self._simulate(test, det)
        return super().lookup(test, n, det)

    def _simulate(self, test: CriticalTest, det: str):
        from lfmodel.econotest.simulate import DEFAULT_TABLE_SIZES, TABLE_SPECS, table_rows

        if (test, det) not in {(CriticalTest(t), d) for t, d in TABLE_SPECS}:
            raise InvalidArgument(f"no critical values for {test.value}/{det}")

        logger.warning(
            f"[Critical] simulating {test.value}/{det} at n={list(DEFAULT_TABLE_SIZES)} "
            f"({self.replications} replications, seed {self.seed})"
        )
        rows = table_rows(
            [(test, det)], DEFAULT_TABLE_SIZES, self.replications, self.seed, self.workers
        )
        self._cached = _concat(self._cached, rows)
        self._frame = _concat(self._frame, rows).astype({"n": int, "value": float})

        try:
            self.cache_path.parent.mkdir(parents=True, exist_ok=True)
            tmp = self.cache_path.with_suffix(".tmp")
            self._cached.to_csv(tmp, index=False)
            tmp.replace(self.cache_path)
            logger.info(f"[Critical] cached {len(self._cached)} row(s) in {self.cache_path}")
        except OSError as e:
            logger.warning(f"[Critical] cannot write cache {self.cache_path}: {e}")


@lru_cache(maxsize=1)
def default_table() -> SimulatedTable:
    """随包 CSV（若已生成）加按需模拟的缓存"""
    shipped = _read_frame(TABLE_PATH) if TABLE_PATH.is_file() else _concat()
    replications = int(os.getenv("LFMODEL_CV_REPLICATIONS", DEFAULT_REPLICATIONS))
    cache = cache_dir() / f"critical_values_r{replications}_s{DEFAULT_SEED}.csv"
    return SimulatedTable(shipped, cache, replications=replications, seed=DEFAULT_SEED)


def critical_values(
    test: CriticalTest, n: int, deterministic: str, table: Optional[CriticalTable] = None
) -> Dict[str, float]:
    return (table or default_table()).lookup(test, n, deterministic)
