# -*- coding: utf-8 -*-
"""命令行端到端测试"""

import json

import pytest

from lfmodel.core import Frequency, Period
from lfmodel.synthetic import lf_ue_case, write_manifest as write_case

from api.cli import main
from tests.conftest import write_csv, write_manifest

FIT_CONFIG = {
    "growth_method": "BACKWARD",
    "smooth_window": 0,
    "lag_grid": {"LF_GROWTH": [0]},
    "slope_grid": {"LF_GROWTH": {"min": -5.0, "max": 0.0, "step": 0.01}},
}


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, (json.loads(captured.out) if code == 0 else None)


@pytest.fixture
def fit_config(tmp_path):
    path = tmp_path / "fit_config.json"
    path.write_text(json.dumps(FIT_CONFIG), encoding="utf-8")
    return path


@pytest.fixture
def noisy_manifest(tmp_path):
    case = lf_ue_case(n=300, noise_ue=0.003, seed=3)
    return write_case(case, tmp_path / "noisy")


def slope_of(model: dict, segment: int = 0) -> float:
    return model["segments"][segment]["slopes"][0]["value"]


class TestSynthAndFit:
    """合成数据与标定"""

    def test_fit_recovers_generator(self, tmp_path, capsys, fit_config):
        code, synth = run(capsys, "synth", "--out", tmp_path / "data", "--seed", 7, "--length", 120)
        assert code == 0
        assert synth["data"]["length"] == 120

        code, fit = run(
            capsys, "fit", "--manifest", synth["data"]["manifest"],
            "--config", fit_config, "--out", tmp_path / "fit",
        )
        assert code == 0
        model = fit["data"]["model"]
        assert slope_of(model) == pytest.approx(synth["data"]["slope"], abs=1e-6)
        assert model["segments"][0]["intercept"] == pytest.approx(synth["data"]["intercept"], abs=1e-6)
        assert fit["data"]["r2_dynamic"] == pytest.approx(1.0, abs=1e-6)
        assert (tmp_path / "fit" / "fit.json").is_file()

        curves = (tmp_path / "fit" / "curves.csv").read_text(encoding="utf-8").splitlines()
        assert curves[0].startswith("# lfmodel ")
        assert any(line.startswith("period,observed,predicted") for line in curves)

    def test_break_override(self, tmp_path, capsys, fit_config):
        case = lf_ue_case(
            n=240, break_at=Period(Frequency.MONTHLY, 1990, 1), jump=-0.02, seed=11
        )
        manifest = write_case(case, tmp_path / "data")
        code, fit = run(
            capsys, "fit", "--manifest", manifest, "--config", fit_config,
            "--breaks", "1990-01", "--out", tmp_path / "fit",
        )
        assert code == 0
        segments = fit["data"]["model"]["segments"]
        assert len(segments) == 2
        assert segments[0]["intercept"] - segments[1]["intercept"] == pytest.approx(0.02, abs=1e-6)


class TestPredictAndForecast:
    """预置模型求值与外推"""

    def test_dgdp_preset_on_flat_growth(self, tmp_path, capsys):
        write_csv(tmp_path / "g.csv", [(str(y), "0.01") for y in range(1990, 2000)])
        manifest = write_manifest(
            tmp_path / "m.json",
            [{"path": "g.csv", "role": "LF_GROWTH", "frequency": "ANNUAL", "unit": "RATE_PER_YEAR"}],
        )
        code, out = run(capsys, "predict", "--preset", "dgdp-annual", "--manifest", manifest, "--out", tmp_path / "o")
        assert code == 0
        predicted = out["data"]["predicted"]
        assert predicted["start"] == "1990"
        assert predicted["values"] == pytest.approx([0.0] * 10, abs=1e-12)
        assert "goodness" not in out["data"]
        assert (tmp_path / "o" / "predict.csv").is_file()

    def test_forecast_from_projections(self, tmp_path, capsys):
        write_csv(tmp_path / "g.csv", [(str(y), "0.02") for y in range(2020, 2026)])
        projections = write_manifest(
            tmp_path / "p.json",
            [{"path": "g.csv", "role": "LF_GROWTH", "frequency": "ANNUAL", "unit": "RATE_PER_YEAR"}],
        )
        code, out = run(
            capsys, "forecast", "--preset", "ue-annual", "--projections", projections,
            "--horizon", 3, "--out", tmp_path / "o",
        )
        assert code == 0
        fc = out["data"]["forecast"]
        assert fc["start"] == "2020"
        assert fc["values"] == pytest.approx([-2.1 * 0.02 + 0.098] * 3)
        assert out["data"]["rmsfe"] is None


class TestDiagnoseAndReport:
    """检验与报告"""

    def test_diagnose_finds_cointegration(self, tmp_path, capsys, fit_config, noisy_manifest):
        code, out = run(
            capsys, "diagnose", "--manifest", noisy_manifest, "--config", fit_config,
            "--trend", "CONSTANT", "--out", tmp_path / "d",
        )
        assert code == 0
        data = out["data"]
        assert data["residual"]["adf"]["reject_at"]["1%"]
        assert len(data["residual"]["dfgls"]) == 12
        coint = data["cointegration"]
        assert coint["pair"] == ["UE", "LF_GROWTH"]
        assert coint["engle_granger"]["cointegrated_at"]["1%"]
        assert coint["johansen"]["rank_at"]["1%"] >= 1

    def test_report_is_reproducible(self, tmp_path, capsys, fit_config, noisy_manifest):
        names = ["summary.json", "fit.json", "curves.csv", "diagnostics.json"]
        outputs = []
        for label in ("a", "b"):
            code, _ = run(
                capsys, "report", "--manifest", noisy_manifest, "--config", fit_config,
                "--out", tmp_path / label,
            )
            assert code == 0
            outputs.append({n: (tmp_path / label / n).read_bytes() for n in names})
            for chart in ("dynamic.svg", "cumulative.svg", "cumulative_error.svg"):
                assert (tmp_path / label / "charts" / chart).is_file()
        assert outputs[0] == outputs[1]

        meta = json.loads(outputs[0]["fit.json"])["meta"]
        assert set(meta["inputs"]) >= {"manifest", "manifest:lf.csv", "manifest:ue.csv", "config"}

    def test_charts_carry_hashes_and_known_breaks(self, tmp_path, capsys, fit_config):
        brk = Period(Frequency.MONTHLY, 1990, 1)
        case = lf_ue_case(n=240, noise_ue=0.003, break_at=brk, jump=-0.02, seed=12)
        manifest = write_case(case, tmp_path / "data")
        code, _ = run(
            capsys, "report", "--manifest", manifest, "--config", fit_config,
            "--breaks", "1990-01", "--out", tmp_path / "r",
        )
        assert code == 0
        meta = json.loads((tmp_path / "r" / "fit.json").read_text(encoding="utf-8"))["meta"]
        for chart in ("dynamic.svg", "cumulative.svg", "cumulative_error.svg"):
            svg = (tmp_path / "r" / "charts" / chart).read_text(encoding="utf-8")
            assert f"lfmodel {meta['version']}" in svg
            for name, digest in meta["inputs"].items():
                assert f"input {name} sha256={digest}" in svg
            assert "known breaks: 1990-01: synthetic intercept jump -0.02" in svg

    def test_validate(self, tmp_path, capsys, noisy_manifest):
        code, out = run(capsys, "validate", "--manifest", noisy_manifest, "--out", tmp_path / "v")
        assert code == 0
        roles = {row["role"] for row in out["data"]["series"]}
        assert roles == {"LF", "UE"}
        assert out["data"]["country"] == "SYNTH"


class TestErrors:
    """错误记录与退出码"""

    def _error(self, out_dir):
        return json.loads((out_dir / "error.json").read_text(encoding="utf-8"))

    def test_missing_manifest_flag(self, tmp_path, capsys):
        code, _ = run(capsys, "fit", "--out", tmp_path / "o")
        assert code == 3
        assert self._error(tmp_path / "o")["error"] == "InvalidArgument"

    def test_unknown_preset(self, tmp_path, capsys, noisy_manifest):
        code, _ = run(
            capsys, "predict", "--preset", "nope", "--manifest", noisy_manifest, "--out", tmp_path / "o"
        )
        assert code == 3

    def test_break_outside_data(self, tmp_path, capsys, fit_config, noisy_manifest):
        code, _ = run(
            capsys, "fit", "--manifest", noisy_manifest, "--config", fit_config,
            "--breaks", "2050-01", "--out", tmp_path / "o",
        )
        assert code == 30
        record = self._error(tmp_path / "o")
        assert record["error"] == "SegmentTooShort"
        assert record["exit_code"] == 30

    def test_unreadable_manifest(self, tmp_path, capsys):
        code, _ = run(capsys, "validate", "--manifest", tmp_path / "absent.json", "--out", tmp_path / "o")
        assert code == 3

    def test_low_replications(self, tmp_path, capsys):
        code, _ = run(capsys, "tables", "--replications", 100, "--sizes", "25", "--out", tmp_path / "o")
        assert code == 3

    def test_unknown_command(self):
        with pytest.raises(SystemExit) as info:
            main(["explode"])
        assert info.value.code == 2
