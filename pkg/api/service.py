# -*- coding: utf-8 -*-
"""
分析服务层

把数据接入、标定、检验与预测串成可复现的批处理运行。
命令行与 HTTP 接口共用这里的逻辑。

输出约定：
- JSON 按键排序，带 meta（工具包版本 + 输入文件 SHA-256）
- CSV 以 "#" 开头的元数据行起始
- 相同输入（文件 + 参数 + 种子）得到逐字节相同的 JSON/CSV
"""

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from lfmodel import __version__
from lfmodel.calibrate import (
    FitConfig,
    FitResult,
    Objective,
    cumulative_errors,
    fit_cumulative,
    goodness,
    rmsfe,
)
from lfmodel.core import (
    Frequency,
    GrowthSpec,
    Period,
    Series,
    Unit,
    align,
    cumulative,
    growth_rate,
)
from lfmodel.core.errors import EmptyOverlap, InvalidArgument, ToolkitError
from lfmodel.econotest import (
    Deterministic,
    TrendSpec,
    adf_test,
    build_table,
    dfgls_sweep,
    engle_granger,
    johansen_test,
    pp_test,
)
from lfmodel.econotest.simulate import DEFAULT_TABLE_SIZES
from lfmodel.ingest import (
    DataManifest,
    Dataset,
    KnownBreak,
    clip_reliable,
    file_sha256,
    load,
)
from lfmodel.models import (
    RegressorKind,
    SegmentedModel,
    australian_presets,
    evaluate,
    forecast,
    get_preset,
)
from lfmodel.synthetic import lf_ue_case, write_manifest

from api.charts import line_chart
from api.config import ToolkitSettings, settings
from api.models import RunSpec

logger = logging.getLogger(__name__)


# ============================================================================
# 输出工具
# ============================================================================


@dataclass
class RunOutput:
    """命令输出：摘要数据与写出的文件"""

    data: Dict[str, Any] = field(default_factory=dict)
    files: List[str] = field(default_factory=list)


def _clean(value: Any) -> Any:
    """NaN/inf 转为 null，numpy 标量转为 Python 值"""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def meta_block(hashes: Dict[str, str]) -> Dict[str, Any]:
    return {"version": __version__, "inputs": dict(sorted(hashes.items()))}


def write_json(path: Path, payload: Dict[str, Any], hashes: Dict[str, str]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    body = dict(payload)
    body["meta"] = meta_block(hashes)
    text = json.dumps(_clean(body), indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def provenance_lines(hashes: Dict[str, str]) -> List[str]:
    """版本与输入哈希，每项一行"""
    lines = [f"lfmodel {__version__}"]
    lines += [f"input {name} sha256={digest}" for name, digest in sorted(hashes.items())]
    return lines


def write_table(path: Path, frame: pd.DataFrame, hashes: Dict[str, str]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    header = [f"# {line}" for line in provenance_lines(hashes)]
    body = frame.to_csv(index=False, float_format="%.10g", na_rep="", lineterminator="\n")
    path.write_text("\n".join(header) + "\n" + body, encoding="utf-8")
    return path


def curves_frame(observed: Optional[Series], predicted: Series) -> pd.DataFrame:
    """
    观测与预测曲线表

    两者都完整时给出 period, observed, predicted, cum_observed, cum_predicted, residual；
    没有观测值时只有 period, predicted。
    """
    if observed is None:
        return pd.DataFrame(
            {"period": [str(p) for p in predicted.periods()], "predicted": predicted.values}
        )
    obs, pred = align(observed, predicted, 0)
    frame = pd.DataFrame(
        {
            "period": [str(p) for p in obs.periods()],
            "observed": obs.values,
            "predicted": pred.values,
        }
    )
    if not obs.has_missing and not pred.has_missing:
        frame["cum_observed"] = cumulative(obs).values
        frame["cum_predicted"] = cumulative(pred).values
    frame["residual"] = obs.values - pred.values
    return frame


def _trim_missing(s: Series) -> Series:
    """去掉首尾缺失值（中间的缺失值保留，由下游报错）"""
    present = np.flatnonzero(~np.isnan(s.values))
    if present.size == 0:
        raise InvalidArgument(f"series '{s.role}' has no observations")
    return s.slice(s.start.shift(int(present[0])), s.start.shift(int(present[-1])))


def _attempt(name: str, func: Callable[[], Any]) -> Any:
    """单项检验失败时记录错误而不中断整套检验"""
    try:
        result = func()
    except ToolkitError as e:
        logger.warning(f"[Diagnose] {name} skipped: {e.__class__.__name__}: {e.message}")
        return {"error": e.to_record()}
    if isinstance(result, list):
        return [r.to_dict() for r in result]
    return result.to_dict()


# ============================================================================
# 分析服务
# ============================================================================


@dataclass
class FitContext:
    """一次标定的全部中间结果"""

    cfg: FitConfig
    frequency: Frequency
    observed: Series
    inputs: Dict[str, Series]
    result: FitResult
    hashes: Dict[str, str]
    known_breaks: List[KnownBreak] = field(default_factory=list)


class AnalysisService:
    """
    分析服务

    每个公开方法对应一个命令，接收 RunSpec，返回 RunOutput。
    """

    def __init__(self, config: Optional[ToolkitSettings] = None):
        self._config = config or settings

    # ========== 加载 ==========

    @staticmethod
    def load_dataset(path: Optional[str], flag: str = "--manifest") -> Tuple[Dataset, Dict[str, str]]:
        if not path:
            raise InvalidArgument(f"{flag} is required for this command")
        manifest = DataManifest.from_json_file(path)
        dataset = load(manifest)
        prefix = "projections" if flag == "--projections" else "manifest"
        hashes = {f"{prefix}:{name}": digest for name, digest in dataset.provenance["sources"].items()}
        if "manifest" in dataset.provenance:
            hashes[prefix] = dataset.provenance["manifest"]
        return dataset, hashes

    @staticmethod
    def fit_config(spec: RunSpec, hashes: Dict[str, str]) -> FitConfig:
        """读取标定配置并应用命令行覆盖项"""
        if spec.config:
            cfg = FitConfig.from_json_file(spec.config)
            hashes["config"] = file_sha256(spec.config)
        else:
            cfg = FitConfig()
        update: Dict[str, Any] = {}
        if spec.breaks is not None:
            update["breaks"] = list(spec.breaks)
        if spec.from_period is not None:
            update["reliable_from"] = spec.from_period
        if spec.target is not None:
            update["target"] = spec.target
        if spec.frequency is not None:
            update["frequency"] = Frequency(spec.frequency)
        if spec.workers > 1:
            update["workers"] = spec.workers
        if update:
            # 经由校验重建，保证覆盖后的断点仍然合法
            cfg = FitConfig.model_validate({**cfg.model_dump(), **update})
        return cfg

    @staticmethod
    def load_model(spec: RunSpec, hashes: Dict[str, str]) -> Optional[SegmentedModel]:
        """--preset 或 --model 指定的模型；都没有时返回 None"""
        if spec.preset and spec.model:
            raise InvalidArgument("pass either --preset or --model, not both")
        if spec.preset:
            model = get_preset(spec.preset)
            if model is None:
                raise InvalidArgument(
                    f"unknown preset {spec.preset!r}", available=sorted(australian_presets())
                )
            return model
        if spec.model:
            try:
                data = json.loads(Path(spec.model).read_text(encoding="utf-8"))
                model = SegmentedModel.from_dict(data["model"] if "model" in data else data)
            except (OSError, ValueError, KeyError, TypeError) as e:
                raise InvalidArgument(f"cannot load model {spec.model}: {e}", path=spec.model) from e
            hashes["model"] = file_sha256(spec.model)
            return model
        return None

    @staticmethod
    def _frequency(dataset: Dataset, target: str, requested: Optional[Frequency]) -> Frequency:
        if requested is not None:
            return requested
        return dataset.get(target).frequency

    @staticmethod
    def build_inputs(
        dataset: Dataset,
        kinds: Sequence[RegressorKind],
        frequency: Frequency,
        growth: GrowthSpec,
        reliable_from: Optional[Period] = None,
    ) -> Dict[str, Series]:
        """
        由数据集构造解释变量

        LF_GROWTH 优先取现成的增长率序列，否则由 LF 水平按 growth 计算；
        CPI 为价格指数时换算为不平滑的通胀率。
        """
        inputs: Dict[str, Series] = {}
        for kind in dict.fromkeys(kinds):
            if kind == RegressorKind.LF_GROWTH:
                if ("LF_GROWTH", frequency) in dataset.series:
                    series = dataset.get("LF_GROWTH", frequency)
                else:
                    series = growth_rate(dataset.get("LF", frequency), growth)
            elif kind == RegressorKind.CPI_INFLATION:
                series = dataset.get("CPI", frequency)
                if series.unit == Unit.INDEX:
                    series = growth_rate(series, GrowthSpec(growth.method, 0)).replace(role="CPI")
            else:
                series = dataset.get(kind.role, frequency)
            if reliable_from is not None:
                series = clip_reliable(series, reliable_from)
            inputs[kind.role] = _trim_missing(series)
        return inputs

    @staticmethod
    def observed_series(
        dataset: Dataset, target: str, frequency: Frequency, reliable_from: Optional[Period]
    ) -> Series:
        series = dataset.get(target, frequency)
        if reliable_from is not None:
            series = clip_reliable(series, reliable_from)
        return _trim_missing(series)

    # ========== 标定流程 ==========

    def run_fit(self, spec: RunSpec) -> FitContext:
        dataset, hashes = self.load_dataset(spec.manifest)
        cfg = self.fit_config(spec, hashes)
        frequency = self._frequency(dataset, cfg.target, cfg.frequency)
        reliable = Period.parse(cfg.reliable_from, frequency) if cfg.reliable_from else None

        inputs = self.build_inputs(
            dataset, cfg.regressors, frequency, cfg.growth_spec(frequency), reliable
        )
        observed = self.observed_series(dataset, cfg.target, frequency, reliable)
        result = fit_cumulative(observed, inputs, cfg)
        return FitContext(cfg, frequency, observed, inputs, result, hashes, dataset.known_breaks)

    @staticmethod
    def score_model(
        model: SegmentedModel, observed: Series, inputs: Dict[str, Series]
    ) -> FitResult:
        """用现成模型计算残差与拟合优度（不做搜索）"""
        predicted = evaluate(model, inputs)
        obs, pred = align(observed, predicted, 0)
        obs.require_complete(f"observed '{observed.role}'")
        pred.require_complete(f"predicted '{model.target}'")
        r2_dyn, r2_cum = goodness(obs, pred)
        diff = cumulative(obs).values - cumulative(pred).values
        return FitResult(
            model=model,
            r2_dynamic=r2_dyn,
            r2_cumulative=r2_cum,
            residual=obs.replace(values=obs.values - pred.values, role=f"{observed.role}_RESIDUAL"),
            objective_value=float(np.sqrt(np.mean(diff * diff))),
            objective=Objective.CUM_RMS,
            segment_objectives=[],
            predicted=pred,
        )

    def _fit_or_score(self, spec: RunSpec) -> FitContext:
        hashes: Dict[str, str] = {}
        model = self.load_model(spec, hashes)
        if model is None:
            return self.run_fit(spec)

        dataset, data_hashes = self.load_dataset(spec.manifest)
        hashes.update(data_hashes)
        cfg = self.fit_config(spec, hashes)
        reliable = Period.parse(cfg.reliable_from, model.frequency) if cfg.reliable_from else None
        kinds = [r.kind for r in model.regressors()]
        inputs = self.build_inputs(
            dataset, kinds, model.frequency, cfg.growth_spec(model.frequency), reliable
        )
        observed = self.observed_series(dataset, model.target, model.frequency, reliable)
        result = self.score_model(model, observed, inputs)
        return FitContext(
            cfg, model.frequency, observed, inputs, result, hashes, dataset.known_breaks
        )

    # ========== 检验 ==========

    @staticmethod
    def diagnostics(
        residual: Series,
        observed: Optional[Series] = None,
        regressor: Optional[Series] = None,
        adf_lags: int = 1,
        johansen_lags: int = 2,
        trend: TrendSpec = TrendSpec.NONE,
        deterministic: Deterministic = Deterministic.CONSTANT,
    ) -> Dict[str, Any]:
        """残差单位根检验，以及目标与解释变量之间的协整检验"""
        report: Dict[str, Any] = {
            "residual": {
                "adf": _attempt("ADF", lambda: adf_test(residual, adf_lags, deterministic)),
                "pp": _attempt("PP", lambda: pp_test(residual, None, deterministic)),
                "dfgls": _attempt("DF-GLS", lambda: dfgls_sweep(residual)),
            }
        }
        if observed is not None and regressor is not None:
            report["cointegration"] = {
                "pair": [observed.role, regressor.role],
                "engle_granger": _attempt(
                    "Engle-Granger", lambda: engle_granger(observed, regressor, adf_lags)
                ),
                "johansen": _attempt(
                    "Johansen", lambda: johansen_test([observed, regressor], johansen_lags, trend)
                ),
            }
        return report

    # ========== 命令 ==========

    def validate(self, spec: RunSpec) -> RunOutput:
        dataset, hashes = self.load_dataset(spec.manifest)
        out = Path(spec.out)
        summary = {
            "country": dataset.country,
            "series": dataset.summary(),
            "known_breaks": [b.model_dump() for b in dataset.known_breaks],
        }
        path = write_json(out / "summary.json", summary, hashes)
        return RunOutput(data=summary, files=[str(path)])

    def fit(self, spec: RunSpec) -> RunOutput:
        ctx = self.run_fit(spec)
        return RunOutput(data=self._fit_summary(ctx), files=self._write_fit(ctx, Path(spec.out)))

    def _write_fit(self, ctx: FitContext, out: Path) -> List[str]:
        payload = ctx.result.to_dict()
        payload["config"] = json.loads(ctx.cfg.model_dump_json())
        payload["range"] = {"start": str(ctx.observed.start), "end": str(ctx.observed.end)}
        files = [write_json(out / "fit.json", payload, ctx.hashes)]
        files.append(
            write_table(out / "curves.csv", curves_frame(ctx.observed, ctx.result.predicted), ctx.hashes)
        )
        return [str(f) for f in files]

    @staticmethod
    def _fit_summary(ctx: FitContext) -> Dict[str, Any]:
        return {
            "model": ctx.result.model.to_dict(),
            "r2_dynamic": ctx.result.r2_dynamic,
            "r2_cumulative": ctx.result.r2_cumulative,
            "objective": ctx.result.objective.value,
            "objective_value": ctx.result.objective_value,
        }

    def predict(self, spec: RunSpec) -> RunOutput:
        hashes: Dict[str, str] = {}
        model = self.load_model(spec, hashes)
        if model is None:
            raise InvalidArgument("predict needs --preset or --model")
        dataset, data_hashes = self.load_dataset(spec.manifest)
        hashes.update(data_hashes)
        cfg = self.fit_config(spec, hashes)
        reliable = Period.parse(cfg.reliable_from, model.frequency) if cfg.reliable_from else None

        kinds = [r.kind for r in model.regressors()]
        inputs = self.build_inputs(
            dataset, kinds, model.frequency, cfg.growth_spec(model.frequency), reliable
        )
        predicted = evaluate(model, inputs)

        observed = None
        if (model.target, model.frequency) in dataset.series:
            observed = self.observed_series(dataset, model.target, model.frequency, reliable)
            try:
                align(observed, predicted, 0)
            except EmptyOverlap:
                observed = None

        data: Dict[str, Any] = {
            "model": model.to_dict(),
            "predicted": predicted.to_dict(),
        }
        if observed is not None:
            obs, pred = align(observed, predicted, 0)
            if not obs.has_missing and not pred.has_missing and len(obs) >= 3:
                data["goodness"] = _attempt("goodness", lambda: _GoodnessView(goodness(obs, pred)))

        out = Path(spec.out)
        files = [
            write_json(out / "predict.json", data, hashes),
            write_table(out / "predict.csv", curves_frame(observed, predicted), hashes),
        ]
        return RunOutput(data=data, files=[str(f) for f in files])

    def diagnose(self, spec: RunSpec) -> RunOutput:
        ctx = self._fit_or_score(spec)
        data = self._diagnose_ctx(ctx, spec)
        path = write_json(Path(spec.out) / "diagnostics.json", data, ctx.hashes)
        return RunOutput(data=data, files=[str(path)])

    def _diagnose_ctx(self, ctx: FitContext, spec: RunSpec) -> Dict[str, Any]:
        kind = ctx.result.model.regressors()[0].kind
        regressor = ctx.inputs.get(kind.role)
        return self.diagnostics(
            ctx.result.residual,
            observed=ctx.observed,
            regressor=regressor,
            adf_lags=spec.adf_lags,
            johansen_lags=spec.johansen_lags,
            trend=spec.trend,
            deterministic=spec.deterministic,
        )

    def forecast(self, spec: RunSpec) -> RunOutput:
        if spec.horizon is None:
            raise InvalidArgument("forecast needs --horizon")
        hashes: Dict[str, str] = {}
        model = self.load_model(spec, hashes)
        if model is None:
            ctx = self.run_fit(spec)
            model = ctx.result.model
            hashes.update(ctx.hashes)
        else:
            self.fit_config(spec, hashes)
        return self._forecast_with(model, spec, hashes)

    def _forecast_with(
        self, model: SegmentedModel, spec: RunSpec, hashes: Dict[str, str]
    ) -> RunOutput:
        projections, proj_hashes = self.load_dataset(spec.projections, flag="--projections")
        hashes.update(proj_hashes)
        cfg = self.fit_config(spec, {})
        kinds = [r.kind for r in model.regressors()]
        inputs = self.build_inputs(
            projections, kinds, model.frequency, cfg.growth_spec(model.frequency)
        )
        start = Period.parse(spec.start, model.frequency) if spec.start else None
        predicted = forecast(model, inputs, spec.horizon, start)

        data: Dict[str, Any] = {
            "model": model.to_dict(),
            "horizon": spec.horizon,
            "forecast": predicted.to_dict(),
            "rmsfe": None,
        }
        observed = None
        if spec.manifest and len(predicted) > 0:
            dataset, data_hashes = self.load_dataset(spec.manifest)
            hashes.update(data_hashes)
            if (model.target, model.frequency) in dataset.series:
                observed = self.observed_series(dataset, model.target, model.frequency, None)
                try:
                    data["rmsfe"] = rmsfe(observed, predicted, spec.horizon)
                except EmptyOverlap:
                    logger.info("[Forecast] no observations overlap the forecast window")
                    observed = None
                except ToolkitError as e:
                    logger.warning(f"[Forecast] RMSFE unavailable: {e.message}")
                    observed = None

        out = Path(spec.out)
        files = [write_json(out / "forecast.json", data, hashes)]
        if len(predicted) > 0:
            frame = curves_frame(observed, predicted).rename(columns={"predicted": "forecast"})
            files.append(write_table(out / "forecast.csv", frame, hashes))
        return RunOutput(data=data, files=[str(f) for f in files])

    def report(self, spec: RunSpec) -> RunOutput:
        """summary + fit + curves + diagnostics + 图表（给出投影时附带预测）"""
        out = Path(spec.out)
        files: List[str] = []
        files += self.validate(spec).files

        ctx = self._fit_or_score(spec)
        files += self._write_fit(ctx, out)
        diagnostics = self._diagnose_ctx(ctx, spec)
        files.append(str(write_json(out / "diagnostics.json", diagnostics, ctx.hashes)))
        files += self._charts(ctx, out)

        data = self._fit_summary(ctx)
        if spec.projections and spec.horizon is not None:
            fc = self._forecast_with(ctx.result.model, spec, dict(ctx.hashes))
            files += fc.files
            data["rmsfe"] = fc.data.get("rmsfe")
        return RunOutput(data=data, files=files)

    @staticmethod
    def _breaks_note(breaks: List[KnownBreak]) -> Optional[str]:
        if not breaks:
            return None
        items = [
            f"{b.period}" + (f" [{b.role}]" if b.role else "") + (f": {b.note}" if b.note else "")
            for b in breaks
        ]
        return "known breaks: " + "; ".join(items)

    @staticmethod
    def _break_marks(breaks: List[KnownBreak], frequency: Frequency) -> List[str]:
        marks = []
        for b in breaks:
            period = Period.parse(b.period)
            if period.frequency == frequency:
                marks.append(str(period))
        return marks

    def _charts(self, ctx: FitContext, out: Path) -> List[str]:
        obs, pred = align(ctx.observed, ctx.result.predicted, 0)
        periods = [str(p) for p in obs.periods()]
        target = ctx.observed.role
        charts = out / "charts"
        common = dict(
            width=self._config.output.chart_width,
            height=self._config.output.chart_height,
            note=self._breaks_note(ctx.known_breaks),
            marks=self._break_marks(ctx.known_breaks, ctx.frequency),
            description="; ".join(provenance_lines(ctx.hashes)),
        )
        files = [
            line_chart(
                charts / "dynamic.svg",
                f"{target}: observed vs predicted",
                periods,
                [("observed", obs.values), ("predicted", pred.values)],
                y_label="rate per year",
                **common,
            ),
            line_chart(
                charts / "cumulative.svg",
                f"{target}: cumulative curves",
                periods,
                [("cum observed", cumulative(obs).values), ("cum predicted", cumulative(pred).values)],
                y_label="cumulative",
                **common,
            ),
        ]
        absolute, relative = cumulative_errors(obs, pred)
        files.append(
            line_chart(
                charts / "cumulative_error.svg",
                f"{target}: cumulative error",
                periods,
                [("absolute", absolute.values), ("relative", relative.values)],
                y_label="error",
                **common,
            )
        )
        return [str(f) for f in files]

    def tables(self, spec: RunSpec) -> RunOutput:
        sizes = spec.sizes or list(DEFAULT_TABLE_SIZES)
        path = Path(spec.out) / "critical_values.csv"
        frame = build_table(path, sizes, spec.replications, spec.seed, workers=spec.workers)
        return RunOutput(
            data={"rows": len(frame), "sizes": list(sizes), "replications": spec.replications},
            files=[str(path)],
        )

    def synth(self, spec: RunSpec) -> RunOutput:
        frequency = Frequency(spec.frequency) if spec.frequency else Frequency.MONTHLY
        case = lf_ue_case(n=spec.length, frequency=frequency, seed=spec.seed)
        path = write_manifest(case, spec.out)
        data = {
            "manifest": str(path),
            "slope": case.slope,
            "intercept": case.intercept,
            "length": len(case.ue),
            "frequency": frequency.value,
        }
        return RunOutput(data=data, files=[str(path), str(Path(spec.out) / "lf.csv"), str(Path(spec.out) / "ue.csv")])

    # ========== 内存接口（HTTP） ==========

    @staticmethod
    def predict_series(
        model: SegmentedModel,
        inputs: Dict[str, Series],
        horizon: Optional[int] = None,
        start: Optional[str] = None,
    ) -> Series:
        if horizon is None:
            return evaluate(model, inputs)
        first = Period.parse(start, model.frequency) if start else None
        return forecast(model, inputs, horizon, first)

    @staticmethod
    def fit_series(observed: Series, inputs: Dict[str, Series], cfg: FitConfig) -> FitResult:
        return fit_cumulative(observed, inputs, cfg)


@dataclass
class _GoodnessView:
    """把 Goodness 包装成带 to_dict 的对象，供 _attempt 使用"""

    value: Any

    def to_dict(self) -> Dict[str, float]:
        return {"r2_dynamic": self.value.r2_dynamic, "r2_cumulative": self.value.r2_cumulative}


# 全局服务实例
analysis_service = AnalysisService()
