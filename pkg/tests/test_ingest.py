# -*- coding: utf-8 -*-
"""数据清单与 CSV 加载测试"""

import numpy as np
import pytest

from lfmodel.core import Frequency, Period, Unit
from lfmodel.core.errors import (
    DuplicatePeriod,
    EmptyResult,
    InvalidArgument,
    ParseError,
    UnitMismatch,
)
from lfmodel.ingest import (
    DataManifest,
    SourceSpec,
    clip_reliable,
    compare_sources,
    export_csv,
    file_sha256,
    load,
    load_source,
)

from tests.conftest import make_series, write_csv, write_manifest


def source(path="x.csv", role="UE", frequency="ANNUAL", unit="RATE_PER_YEAR", **extra):
    return {"path": path, "role": role, "frequency": frequency, "unit": unit, **extra}


def load_one(tmp_path, rows, **spec):
    path = write_csv(tmp_path / "x.csv", rows)
    return load_source(SourceSpec(**source(**spec)), path)


class TestManifest:
    """清单校验"""

    def test_relative_paths_follow_manifest(self, tmp_path):
        sub = tmp_path / "au"
        sub.mkdir()
        path = write_manifest(sub / "manifest.json", [source()])
        manifest = DataManifest.from_json_file(path)
        assert manifest.base_dir == sub
        assert manifest.resolve(manifest.sources[0]) == sub / "x.csv"

    def test_duplicate_role_frequency(self, tmp_path):
        path = write_manifest(tmp_path / "m.json", [source(), source(path="y.csv")])
        with pytest.raises(InvalidArgument):
            DataManifest.from_json_file(path)

    def test_unknown_unit(self, tmp_path):
        path = write_manifest(tmp_path / "m.json", [source(unit="PERCENT")])
        with pytest.raises(InvalidArgument):
            DataManifest.from_json_file(path)

    def test_bad_known_break(self, tmp_path):
        path = write_manifest(tmp_path / "m.json", [source()], known_breaks=[{"period": "soon"}])
        with pytest.raises(InvalidArgument):
            DataManifest.from_json_file(path)

    def test_not_json(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text("{country", encoding="utf-8")
        with pytest.raises(InvalidArgument):
            DataManifest.from_json_file(path)


class TestLoadSource:
    """单个数据源"""

    def test_scale_and_sort(self, tmp_path):
        s = load_one(
            tmp_path,
            [("2002", "7.5"), ("2000", "5.0"), ("2001", "6.0")],
            scale=0.01,
        )
        assert str(s.start) == "2000"
        np.testing.assert_allclose(s.values, [0.05, 0.06, 0.075])
        assert s.unit == Unit.RATE_PER_YEAR
        assert s.role == "UE"

    def test_persons_in_thousands(self, tmp_path):
        s = load_one(
            tmp_path,
            [("1990-Q1", "1234.5"), ("1990-Q2", "1240")],
            role="LF",
            frequency="QUARTERLY",
            unit="PERSONS",
            scale=1000,
        )
        np.testing.assert_allclose(s.values, [1234500.0, 1240000.0])
        assert s.frequency == Frequency.QUARTERLY

    def test_gaps_become_missing(self, tmp_path):
        s = load_one(tmp_path, [("2000", "0.05"), ("2001", "0.06"), ("2003", "0.07")])
        assert len(s) == 4
        assert np.isnan(s.values[2])
        assert s.missing_count == 1

    def test_missing_tokens(self, tmp_path):
        s = load_one(tmp_path, [("2000", "0.05"), ("2001", ".."), ("2002", "NA")])
        assert s.missing_count == 2

    def test_duplicate_period(self, tmp_path):
        with pytest.raises(DuplicatePeriod):
            load_one(tmp_path, [("2000", "0.05"), ("2001", "0.06"), ("2000", "0.07")])

    def test_bad_value_reports_row_and_column(self, tmp_path):
        with pytest.raises(ParseError) as info:
            load_one(tmp_path, [("2000", "0.05"), ("2001", "abc")])
        assert info.value.details["row"] == 3
        assert info.value.details["column"] == "value"

    def test_wrong_frequency_period(self, tmp_path):
        with pytest.raises(ParseError) as info:
            load_one(tmp_path, [("2000-01", "0.05")])
        assert info.value.details["column"] == "period"

    def test_missing_column(self, tmp_path):
        path = write_csv(tmp_path / "x.csv", [("2000", "0.05")], header=("date", "value"))
        with pytest.raises(ParseError):
            load_source(SourceSpec(**source()), path)

    def test_percent_without_scale(self, tmp_path):
        with pytest.raises(UnitMismatch):
            load_one(tmp_path, [("2000", "5.2"), ("2001", "6.1")])

    def test_custom_columns(self, tmp_path):
        path = write_csv(tmp_path / "x.csv", [("2000", "0.05")], header=("year", "ur"))
        s = load_source(SourceSpec(**source(column_period="year", column_value="ur")), path)
        assert s.values[0] == pytest.approx(0.05)


class TestLoad:
    """整体加载"""

    def _manifest(self, tmp_path, **extra):
        write_csv(tmp_path / "ue.csv", [("2000", "5"), ("2001", "6")])
        write_csv(tmp_path / "lf_a.csv", [("2000", "100"), ("2001", "101")])
        write_csv(tmp_path / "lf_q.csv", [("2000-Q1", "100"), ("2000-Q2", "101")])
        return write_manifest(
            tmp_path / "manifest.json",
            [
                source("ue.csv", "UE", scale=0.01),
                source("lf_a.csv", "LF", unit="PERSONS"),
                source("lf_q.csv", "LF", frequency="QUARTERLY", unit="PERSONS"),
            ],
            **extra,
        )

    def test_provenance_hashes(self, tmp_path):
        path = self._manifest(tmp_path)
        dataset = load(DataManifest.from_json_file(path))
        assert dataset.provenance["sources"]["ue.csv"] == file_sha256(tmp_path / "ue.csv")
        assert dataset.provenance["manifest"] == file_sha256(path)
        assert dataset.country == "TEST"

    def test_get_by_role_and_frequency(self, tmp_path):
        dataset = load(DataManifest.from_json_file(self._manifest(tmp_path)))
        assert dataset.get("UE").role == "UE"
        assert dataset.get("LF", Frequency.QUARTERLY).frequency == Frequency.QUARTERLY
        with pytest.raises(InvalidArgument):
            dataset.get("LF")
        with pytest.raises(InvalidArgument):
            dataset.get("CPI")

    def test_summary_lists_breaks_by_role(self, tmp_path):
        path = self._manifest(
            tmp_path,
            known_breaks=[{"period": "2001", "note": "new survey", "role": "UE"}],
        )
        rows = load(DataManifest.from_json_file(path)).summary()
        by_key = {(r["role"], r["frequency"]): r for r in rows}
        assert by_key[("UE", "ANNUAL")]["known_breaks"] == [{"period": "2001", "note": "new survey"}]
        assert by_key[("LF", "ANNUAL")]["known_breaks"] == []
        assert by_key[("LF", "QUARTERLY")]["end"] == "2000-Q2"

    def test_missing_file(self, tmp_path):
        path = write_manifest(tmp_path / "manifest.json", [source("absent.csv")])
        with pytest.raises(ParseError):
            load(DataManifest.from_json_file(path))

    def test_repeatable(self, tmp_path):
        manifest = DataManifest.from_json_file(self._manifest(tmp_path))
        a, b = load(manifest), load(manifest)
        np.testing.assert_array_equal(a.get("UE").values, b.get("UE").values)
        assert a.provenance == b.provenance


class TestExportAndCompare:
    """导出、比较与截取"""

    def test_export_keeps_full_precision(self, tmp_path):
        s = make_series([0.1 / 3.0, np.nan, 2.0 / 7.0], "1995-Q4", role="UE")
        path = export_csv(s, tmp_path / "out" / "ue.csv")
        back = load_source(SourceSpec(**source(frequency="QUARTERLY")), path)
        assert back.start == s.start
        np.testing.assert_array_equal(back.values[[0, 2]], s.values[[0, 2]])
        assert np.isnan(back.values[1])

    def test_compare_rates(self):
        a = make_series([0.05, 0.06, 0.07], "2000", role="UE")
        b = make_series([0.04, 0.06], "2001", role="UE_ALT")
        diff = compare_sources(a, b)
        assert str(diff.start) == "2001"
        np.testing.assert_allclose(diff.values, [0.02, 0.01])
        assert diff.unit == Unit.RATE_PER_YEAR
        assert diff.role == "UE-UE_ALT"

    def test_compare_persons_may_be_negative(self):
        a = make_series([100.0, 101.0], unit=Unit.PERSONS, role="LF")
        b = make_series([102.0, 101.0], unit=Unit.PERSONS, role="LF_ALT")
        diff = compare_sources(a, b)
        assert diff.unit == Unit.INDEX
        np.testing.assert_allclose(diff.values, [-2.0, 0.0])

    def test_clip_reliable(self):
        s = make_series(np.arange(10.0), "1990")
        clipped = clip_reliable(s, Period.parse("1995"))
        assert str(clipped.start) == "1995"
        assert len(clipped) == 5
        assert len(clip_reliable(s, Period.parse("1980"))) == 10

    def test_clip_past_end(self):
        with pytest.raises(EmptyResult):
            clip_reliable(make_series(np.arange(10.0), "1990"), Period.parse("2000"))
