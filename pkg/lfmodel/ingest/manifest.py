# -*- coding: utf-8 -*-
"""
数据清单

描述一个国家的全部本地 CSV 数据源，路径相对清单文件所在目录。
"""

import json
import logging
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, ValidationError, model_validator

from lfmodel.core import Frequency, Period, Unit
from lfmodel.core.errors import InvalidArgument

logger = logging.getLogger(__name__)


class SourceSpec(BaseModel):
    """单个 CSV 数据源"""

    path: str = Field(..., description="CSV 路径（相对清单目录）", min_length=1)
    role: str = Field(..., description="序列角色，如 LF、UE、DGDP、CPI", min_length=1)
    frequency: Frequency
    unit: Unit
    column_period: str = Field(default="period", description="时间列名")
    column_value: str = Field(default="value", description="数值列名")
    scale: float = Field(default=1.0, gt=0, description="乘数，如千人→人 1000，百分比→比例 0.01")
    note: str = ""


class KnownBreak(BaseModel):
    """已知的统计口径断点（只在报告中展示，不参与建模）"""

    period: str
    note: str = ""
    role: Optional[str] = None

    @model_validator(mode="after")
    def _check_period(self) -> "KnownBreak":
        Period.parse(self.period)
        return self


class DataManifest(BaseModel):
    """数据清单"""

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "country": "AU",
                "sources": [
                    {
                        "path": "lf.csv",
                        "role": "LF",
                        "frequency": "MONTHLY",
                        "unit": "PERSONS",
                        "scale": 1000,
                    },
                    {
                        "path": "ue.csv",
                        "role": "UE",
                        "frequency": "MONTHLY",
                        "unit": "RATE_PER_YEAR",
                        "scale": 0.01,
                    },
                ],
                "known_breaks": [{"period": "2001-04", "note": "new questionnaire"}],
            }
        }
    )

    country: str = Field(..., min_length=1)
    sources: List[SourceSpec] = Field(..., min_length=1)
    known_breaks: List[KnownBreak] = Field(default_factory=list)

    _base_dir: Path = PrivateAttr(default_factory=Path.cwd)
    _manifest_path: Optional[Path] = PrivateAttr(default=None)

    @model_validator(mode="after")
    def _check_unique(self) -> "DataManifest":
        seen = set()
        for src in self.sources:
            key = (src.role, src.frequency)
            if key in seen:
                raise ValueError(f"duplicate source for role {src.role} at {src.frequency.value}")
            seen.add(key)
        return self

    @property
    def base_dir(self) -> Path:
        return self._base_dir

    @property
    def manifest_path(self) -> Optional[Path]:
        return self._manifest_path

    def with_base_dir(self, base_dir: Union[str, Path]) -> "DataManifest":
        self._base_dir = Path(base_dir)
        return self

    def resolve(self, source: SourceSpec) -> Path:
        path = Path(source.path)
        return path if path.is_absolute() else self._base_dir / path

    @classmethod
    def from_json_file(cls, path: Union[str, Path]) -> "DataManifest":
        """
        从 JSON 文件加载清单

        Raises:
            InvalidArgument: 文件不可读或内容不合法
        """
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            manifest = cls.model_validate(data)
        except (OSError, json.JSONDecodeError, ValidationError) as e:
            raise InvalidArgument(f"cannot load manifest {path}: {e}", path=str(path)) from e
        manifest._base_dir = path.parent
        manifest._manifest_path = path
        logger.debug(f"[Ingest] manifest {path}: {len(manifest.sources)} source(s)")
        return manifest
