# -*- coding: utf-8 -*-
"""分段模型、预置模型与预测测试"""

import json

import numpy as np
import pytest

from lfmodel.core import Frequency, Period, Series, Unit
from lfmodel.core.errors import CoverageGap, FrequencyMismatch, InvalidArgument, MissingRegressor
from lfmodel.models import (
    Regressor,
    RegressorKind,
    Segment,
    SegmentedModel,
    australian_presets,
    evaluate,
    evaluate_pieces,
    forecast,
    generalized_sum,
    get_preset,
)

from tests.conftest import make_series

LF = Regressor(RegressorKind.LF_GROWTH, 0)
UE = Regressor(RegressorKind.UNEMPLOYMENT, 0)


def annual(year: int) -> Period:
    return Period(Frequency.ANNUAL, year)


def growth(values, start="1990"):
    return make_series(values, start, role="LF_GROWTH")


class TestPresets:
    """预置模型系数"""

    def test_names(self):
        assert set(australian_presets()) == {
            "phillips-annual",
            "ue-annual",
            "ue-monthly",
            "dgdp-annual",
            "dgdp-quarterly",
            "cpi-generalized",
        }

    @pytest.mark.parametrize(
        "name,before,after",
        [
            ("ue-annual", (-2.1, 0.13), (-2.1, 0.098)),
            ("ue-monthly", (-1.77, 0.124), (-2.1, 0.0977)),
            ("dgdp-annual", (7.8, -0.024), (4.2, -0.042)),
            ("dgdp-quarterly", (6.5, -0.021), (3.3, -0.026)),
        ],
    )
    def test_two_segment_coefficients(self, name, before, after):
        model = get_preset(name)
        first, second = model.segments
        assert first.slope(RegressorKind.LF_GROWTH) == before[0]
        assert first.intercept == before[1]
        assert second.slope(RegressorKind.LF_GROWTH) == after[0]
        assert second.intercept == after[1]

    def test_phillips(self):
        model = get_preset("phillips-annual")
        assert model.target == "UE"
        assert [s.slope(RegressorKind.CPI_INFLATION) for s in model.segments] == [-0.47, -1.5]
        assert [s.intercept for s in model.segments] == [0.112, 0.105]

    def test_boundaries_follow_inequalities(self):
        ue = get_preset("ue-annual")
        assert ue.segments[0].end == annual(1994)
        assert ue.segments[1].start == annual(1995)
        dgdp_q = get_preset("dgdp-quarterly")
        assert str(dgdp_q.segments[0].end) == "1984-Q4"
        assert str(dgdp_q.segments[1].start) == "1985-Q1"
        monthly = get_preset("ue-monthly")
        assert str(monthly.segments[0].end) == "1994-12"

    def test_generalized_cpi(self):
        model = get_preset("cpi-generalized")
        assert len(model.segments) == 3
        assert [s.slope(RegressorKind.LF_GROWTH) for s in model.segments] == [8.3, 3.9, 3.9]
        assert [s.slope(RegressorKind.UNEMPLOYMENT) for s in model.segments] == [0.97, 0.97, 0.88]
        assert all(s.intercept == -0.1 for s in model.segments)
        # 1995 属于中间段
        assert model.segment_for(annual(1995)) is model.segments[1]

    def test_sign_structure(self):
        presets = australian_presets()
        for name in ("ue-annual", "ue-monthly"):
            assert all(s.slope(RegressorKind.LF_GROWTH) < 0 for s in presets[name].segments)
        for name in ("dgdp-annual", "dgdp-quarterly", "cpi-generalized"):
            assert all(s.slope(RegressorKind.LF_GROWTH) > 0 for s in presets[name].segments)
        assert all(s.slope(RegressorKind.UNEMPLOYMENT) > 0 for s in presets["cpi-generalized"].segments)

    def test_json_round_trip_is_exact(self):
        for name, model in australian_presets().items():
            back = SegmentedModel.from_json(model.to_json())
            assert back == model, name

    def test_unknown(self):
        assert get_preset("nope") is None


class TestModelInvariants:
    """模型构造约束"""

    def test_overlapping_segments_rejected(self):
        with pytest.raises(InvalidArgument):
            SegmentedModel(
                "UE",
                Frequency.ANNUAL,
                (
                    Segment(None, annual(1995), {LF: -2.0}, 0.1),
                    Segment(annual(1995), None, {LF: -2.0}, 0.1),
                ),
            )

    def test_mixed_kinds_rejected(self):
        with pytest.raises(InvalidArgument):
            SegmentedModel(
                "UE",
                Frequency.ANNUAL,
                (
                    Segment(None, annual(1994), {LF: -2.0}, 0.1),
                    Segment(annual(1995), None, {UE: 1.0}, 0.1),
                ),
            )

    def test_bound_frequency_checked(self):
        with pytest.raises(FrequencyMismatch):
            SegmentedModel(
                "UE", Frequency.MONTHLY, (Segment(None, annual(1994), {LF: -2.0}, 0.1),)
            )

    def test_negative_lag(self):
        with pytest.raises(InvalidArgument):
            Regressor(RegressorKind.LF_GROWTH, -1)

    def test_empty_slopes(self):
        with pytest.raises(InvalidArgument):
            Segment(None, None, {}, 0.1)


class TestEvaluate:
    """模型求值"""

    def test_ue_monthly_zero_growth(self):
        g = make_series(np.zeros(24), "1996-01", role="LF_GROWTH")
        out = evaluate(get_preset("ue-monthly"), {"LF_GROWTH": g})
        np.testing.assert_allclose(out.values, 0.0977)
        assert out.role == "UE"

    def test_cpi_generalized_last_segment(self):
        inputs = {
            "LF_GROWTH": growth(np.full(5, 0.02), "1996"),
            "UE": make_series(np.full(5, 0.05), "1996", role="UE"),
        }
        out = evaluate(get_preset("cpi-generalized"), inputs)
        assert str(out.start) == "1996"
        np.testing.assert_allclose(out.values, 3.9 * 0.02 + 0.88 * 0.05 - 0.1)
        assert out.values[0] == pytest.approx(0.022)

    def test_dgdp_annual_zero(self):
        out = evaluate(get_preset("dgdp-annual"), {"LF_GROWTH": growth(np.full(10, 0.01), "1990")})
        np.testing.assert_allclose(out.values, 0.0, atol=1e-15)

    def test_segments_switch_at_break(self):
        out = evaluate(get_preset("ue-annual"), {"LF_GROWTH": growth(np.zeros(6), "1992")})
        np.testing.assert_allclose(out.values, [0.13, 0.13, 0.13, 0.098, 0.098, 0.098])

    def test_lag_shifts_output(self):
        model = SegmentedModel(
            "UE", Frequency.ANNUAL, (Segment(None, None, {Regressor(RegressorKind.LF_GROWTH, 2): 1.0}, 0.0),)
        )
        out = evaluate(model, {"LF_GROWTH": growth([1.0, 2.0, 3.0, 4.0], "2000")})
        assert str(out.start) == "2002"
        np.testing.assert_array_equal(out.values, [1.0, 2.0, 3.0, 4.0])

    def test_outside_segments_omitted(self):
        model = SegmentedModel(
            "UE", Frequency.ANNUAL, (Segment(annual(2002), annual(2004), {LF: 1.0}, 0.0),)
        )
        out = evaluate(model, {"LF_GROWTH": growth(np.arange(10.0), "2000")})
        assert (str(out.start), str(out.end)) == ("2002", "2004")

    def test_gap_between_segments(self):
        """两个不相邻分段：分段求值各自一条，连续求值在空隙处为缺失值"""
        model = SegmentedModel(
            "UE",
            Frequency.ANNUAL,
            (
                Segment(annual(2001), annual(2002), {LF: 1.0}, 0.0),
                Segment(annual(2005), annual(2006), {LF: 1.0}, 0.5),
            ),
        )
        inputs = {"LF_GROWTH": growth(np.arange(10.0), "2000")}
        pieces = evaluate_pieces(model, inputs)
        assert [(str(p.start), str(p.end)) for p in pieces] == [("2001", "2002"), ("2005", "2006")]
        np.testing.assert_array_equal(pieces[1].values, [5.5, 6.5])

        out = evaluate(model, inputs)
        assert (str(out.start), str(out.end)) == ("2001", "2006")
        np.testing.assert_array_equal(out.values[[0, 1, 4, 5]], [1.0, 2.0, 5.5, 6.5])
        assert np.isnan(out.values[2:4]).all()

    def test_disjoint_bounded_segment_skipped(self):
        out = evaluate(
            get_preset("cpi-generalized"),
            {
                "LF_GROWTH": growth(np.full(4, 0.02), "2000"),
                "UE": make_series(np.full(4, 0.05), "2000", role="UE"),
            },
        )
        assert str(out.start) == "2000"
        assert len(out) == 4

    def test_partially_covered_segment(self):
        inputs = {
            "LF_GROWTH": growth(np.full(10, 0.02), "1990"),
            "UE": make_series(np.full(10, 0.05), "1990", role="UE"),
        }
        with pytest.raises(CoverageGap):
            evaluate(get_preset("cpi-generalized"), inputs)

    def test_missing_regressor(self):
        with pytest.raises(MissingRegressor):
            evaluate(get_preset("cpi-generalized"), {"LF_GROWTH": growth(np.zeros(3), "2000")})

    def test_frequency_mismatch(self):
        with pytest.raises(FrequencyMismatch):
            evaluate(get_preset("ue-annual"), {"LF_GROWTH": growth(np.zeros(3), "2000-01")})

    def test_missing_inside_segment(self):
        with pytest.raises(CoverageGap):
            evaluate(get_preset("ue-annual"), {"LF_GROWTH": growth([0.01, np.nan, 0.01], "2000")})

    def test_piecewise_linearity(self, rng):
        model = get_preset("ue-annual")
        u = growth(rng.normal(0.015, 0.01, 8), "2000")
        v = growth(rng.normal(0.015, 0.01, 8), "2000")
        a, b = 0.7, -1.3
        mix = u.replace(values=a * u.values + b * v.values)
        lhs = evaluate(model, {"LF_GROWTH": mix}).values
        rhs = (
            a * evaluate(model, {"LF_GROWTH": u}).values
            + b * evaluate(model, {"LF_GROWTH": v}).values
            - (a + b - 1) * 0.098
        )
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestForecast:
    """预测"""

    def test_constant_projection(self):
        out = forecast(get_preset("ue-annual"), {"LF_GROWTH": growth(np.full(10, 0.02), "2010")}, 5)
        assert len(out) == 5
        np.testing.assert_allclose(out.values, -2.1 * 0.02 + 0.098)
        assert out.values[0] == pytest.approx(0.056)

    def test_last_segment_extends(self):
        model = SegmentedModel(
            "UE",
            Frequency.ANNUAL,
            (
                Segment(None, annual(1994), {LF: -1.0}, 0.2),
                Segment(annual(1995), annual(2000), {LF: -2.0}, 0.1),
            ),
        )
        out = forecast(model, {"LF_GROWTH": growth(np.zeros(5), "2010")}, 3)
        np.testing.assert_allclose(out.values, 0.1)

    def test_explicit_start(self):
        out = forecast(
            get_preset("ue-annual"), {"LF_GROWTH": growth(np.zeros(10), "2010")}, 2, annual(2015)
        )
        assert str(out.start) == "2015"
        assert len(out) == 2

    def test_zero_horizon(self):
        out = forecast(get_preset("ue-annual"), {"LF_GROWTH": growth(np.zeros(3), "2010")}, 0)
        assert len(out) == 0

    def test_short_projection(self):
        with pytest.raises(CoverageGap):
            forecast(get_preset("ue-annual"), {"LF_GROWTH": growth(np.zeros(3), "2010")}, 5)

    def test_negative_horizon(self):
        with pytest.raises(InvalidArgument):
            forecast(get_preset("ue-annual"), {"LF_GROWTH": growth(np.zeros(3), "2010")}, -1)


class TestGeneralizedSum:
    """通胀模型与失业模型之和"""

    def test_breaks_unioned_and_coefficients_added(self):
        inflation = SegmentedModel(
            "DGDP",
            Frequency.ANNUAL,
            (
                Segment(None, annual(1984), {LF: 7.8}, -0.024),
                Segment(annual(1985), None, {LF: 4.2}, -0.042),
            ),
        )
        total = generalized_sum(inflation, get_preset("ue-annual"))
        assert [str(s.start) if s.start else None for s in total.segments] == [None, "1985", "1995"]
        first, middle, last = total.segments
        assert first.slope(RegressorKind.LF_GROWTH) == pytest.approx(7.8 - 2.1)
        assert first.intercept == pytest.approx(-0.024 + 0.13)
        assert middle.slope(RegressorKind.LF_GROWTH) == pytest.approx(4.2 - 2.1)
        assert last.intercept == pytest.approx(-0.042 + 0.098)

    def test_sum_matches_evaluated_sum(self, rng):
        inflation = get_preset("dgdp-annual")
        unemployment = get_preset("ue-annual")
        inputs = {"LF_GROWTH": growth(rng.normal(0.015, 0.005, 30), "1975")}
        total = evaluate(generalized_sum(inflation, unemployment), inputs)
        parts = evaluate(inflation, inputs).values + evaluate(unemployment, inputs).values
        np.testing.assert_allclose(total.values, parts, atol=1e-12)

    def test_frequency_mismatch(self):
        with pytest.raises(FrequencyMismatch):
            generalized_sum(get_preset("dgdp-quarterly"), get_preset("ue-annual"))
