# -*- coding: utf-8 -*-
"""时间序列与派生运算测试"""

import numpy as np
import pytest

from lfmodel.core import (
    Frequency,
    GrowthMethod,
    GrowthSpec,
    Period,
    Series,
    Unit,
    align,
    common_range,
    cumulative,
    growth_rate,
    moving_average,
)
from lfmodel.core.errors import (
    DivisionByZeroLevel,
    EmptyOverlap,
    FrequencyMismatch,
    InsufficientLength,
    InvalidArgument,
    InvalidSeries,
    MissingInWindow,
    MissingValue,
    UnitMismatch,
    WindowTooLarge,
)

from tests.conftest import make_series

BACKWARD = GrowthSpec(GrowthMethod.BACKWARD, 0)
YOY = GrowthSpec(GrowthMethod.YEAR_OVER_YEAR, 0)


def level(values, start="2000"):
    return make_series(values, start, unit=Unit.PERSONS, role="LF")


class TestPeriod:
    """时间点解析与排序"""

    def test_parse_infers_frequency(self):
        assert Period.parse("1994") == Period(Frequency.ANNUAL, 1994)
        assert Period.parse("1994-Q2") == Period(Frequency.QUARTERLY, 1994, 2)
        assert Period.parse("1994-07") == Period(Frequency.MONTHLY, 1994, 7)

    def test_parse_rejects_wrong_frequency(self):
        with pytest.raises(FrequencyMismatch):
            Period.parse("1994-07", Frequency.ANNUAL)

    def test_parse_rejects_garbage(self):
        with pytest.raises(InvalidArgument):
            Period.parse("July 1994")

    def test_sub_out_of_range(self):
        with pytest.raises(InvalidSeries):
            Period(Frequency.QUARTERLY, 2000, 5)

    def test_shift_wraps_years(self):
        assert Period(Frequency.MONTHLY, 1994, 12).shift(1) == Period(Frequency.MONTHLY, 1995, 1)
        assert Period(Frequency.QUARTERLY, 1995, 1).shift(-1) == Period(Frequency.QUARTERLY, 1994, 4)

    def test_ordering_within_frequency(self):
        assert Period.parse("1994") < Period.parse("1995")
        assert Period.parse("1995-03") > Period.parse("1995-02")

    def test_cross_frequency_comparison_fails(self):
        with pytest.raises(FrequencyMismatch):
            _ = Period.parse("1994") < Period.parse("1994-Q1")

    def test_str_round_trip(self):
        for text in ("1994", "1994-Q3", "1994-11"):
            assert str(Period.parse(text)) == text


class TestSeries:
    """序列约束"""

    def test_empty_rejected(self):
        with pytest.raises(InvalidSeries):
            Series(Frequency.ANNUAL, Period.parse("2000"), np.array([]), Unit.RATE_PER_YEAR)

    def test_start_frequency_must_match(self):
        with pytest.raises(InvalidSeries):
            Series(Frequency.MONTHLY, Period.parse("2000"), np.ones(3), Unit.RATE_PER_YEAR)

    def test_negative_persons_rejected(self):
        with pytest.raises(InvalidSeries):
            level([100.0, -1.0])

    def test_missing_persons_allowed(self):
        s = level([100.0, np.nan, 102.0])
        assert s.missing_count == 1

    def test_values_are_immutable(self):
        s = make_series([1.0, 2.0])
        with pytest.raises(ValueError):
            s.values[0] = 5.0

    def test_slice_and_end(self):
        s = make_series(np.arange(10.0), "1990")
        part = s.slice(Period.parse("1992"), Period.parse("1994"))
        assert str(part.start) == "1992"
        assert str(part.end) == "1994"
        np.testing.assert_array_equal(part.values, [2.0, 3.0, 4.0])

    def test_dict_round_trip_keeps_missing(self):
        s = make_series([0.1, np.nan, 0.3], "2001-Q2", role="UE")
        data = s.to_dict()
        assert data["values"][1] is None
        back = Series.from_dict(data)
        assert back.start == s.start
        assert back.role == "UE"
        np.testing.assert_array_equal(np.isnan(back.values), np.isnan(s.values))


class TestGrowthRate:
    """增长率"""

    def test_constant_level_gives_zero(self):
        out = growth_rate(level([100.0, 100.0, 100.0]), BACKWARD)
        np.testing.assert_array_equal(out.values, [0.0, 0.0])
        assert str(out.start) == "2001"
        assert out.unit == Unit.RATE_PER_YEAR
        assert out.role == "LF_GROWTH"

    def test_annual_backward(self):
        out = growth_rate(level([100.0, 102.0]), BACKWARD)
        assert out.values[0] == pytest.approx(0.02)

    def test_quarterly_is_annualized(self):
        out = growth_rate(level([1000.0, 1010.0], "2000-Q1"), BACKWARD)
        assert out.values[0] == pytest.approx(0.04)

    def test_year_over_year_monthly(self):
        values = [100.0] * 12 + [103.0]
        out = growth_rate(level(values, "2000-01"), YOY)
        assert len(out) == 1
        assert str(out.start) == "2001-01"
        assert out.values[0] == pytest.approx(0.03)

    @pytest.mark.parametrize("frequency,start", [("ANNUAL", "2000"), ("QUARTERLY", "2000-Q1"), ("MONTHLY", "2000-01")])
    def test_exponential_level(self, frequency, start):
        p = Frequency(frequency).periods_per_year
        r = 0.03
        t = np.arange(40)
        out = growth_rate(level(1e6 * np.exp(r * t / p), start), BACKWARD)
        np.testing.assert_allclose(out.values, p * (np.exp(r / p) - 1.0), rtol=1e-9)

    def test_smoothing_applied(self):
        lf = level([100.0, 101.0, 103.0, 104.0, 106.0])
        raw = growth_rate(lf, BACKWARD)
        smooth = growth_rate(lf, GrowthSpec(GrowthMethod.BACKWARD, 3))
        assert len(smooth) == len(raw) - 2
        assert smooth.values[0] == pytest.approx(raw.values[:3].mean())

    def test_rate_input_rejected(self):
        with pytest.raises(UnitMismatch):
            growth_rate(make_series([0.1, 0.2]), BACKWARD)

    def test_index_input_accepted(self):
        cpi = make_series([100.0, 105.0], unit=Unit.INDEX, role="CPI")
        assert growth_rate(cpi, BACKWARD).values[0] == pytest.approx(0.05)

    def test_zero_level(self):
        with pytest.raises(DivisionByZeroLevel):
            growth_rate(level([0.0, 1.0]), BACKWARD)

    def test_too_short(self):
        with pytest.raises(InsufficientLength):
            growth_rate(level([100.0]), BACKWARD)
        with pytest.raises(InsufficientLength):
            growth_rate(level([100.0] * 12, "2000-01"), YOY)

    def test_missing_in_window(self):
        with pytest.raises(MissingInWindow):
            growth_rate(level([100.0, np.nan, 102.0]), BACKWARD)

    def test_smooth_window_one_rejected(self):
        with pytest.raises(InvalidArgument):
            GrowthSpec(GrowthMethod.BACKWARD, 1)

    def test_defaults_by_frequency(self):
        assert GrowthSpec.default_for(Frequency.ANNUAL) == GrowthSpec(GrowthMethod.BACKWARD, 3)
        assert GrowthSpec.default_for(Frequency.QUARTERLY) == GrowthSpec(GrowthMethod.BACKWARD, 0)
        assert GrowthSpec.default_for(Frequency.MONTHLY) == GrowthSpec(GrowthMethod.YEAR_OVER_YEAR, 12)


class TestMovingAverage:
    """移动平均"""

    def test_constant(self):
        out = moving_average(make_series([0.7] * 5), 3)
        np.testing.assert_array_equal(out.values, [0.7, 0.7, 0.7])

    def test_odd_window_centered(self):
        out = moving_average(make_series([1.0, 2.0, 3.0, 4.0, 5.0]), 3)
        np.testing.assert_allclose(out.values, [2.0, 3.0, 4.0])
        assert str(out.start) == "2001"

    def test_even_window_trailing(self):
        out = moving_average(make_series([1.0, 2.0, 3.0, 4.0]), 2)
        np.testing.assert_allclose(out.values, [1.5, 2.5, 3.5])
        assert str(out.start) == "2001"

    def test_within_input_range(self, rng):
        s = make_series(rng.normal(size=50))
        out = moving_average(s, 12)
        assert out.values.min() >= s.values.min()
        assert out.values.max() <= s.values.max()

    def test_window_too_large(self):
        with pytest.raises(WindowTooLarge):
            moving_average(make_series([1.0, 2.0]), 3)

    def test_missing_rejected(self):
        with pytest.raises(MissingValue):
            moving_average(make_series([1.0, np.nan, 3.0]), 2)


class TestCumulative:
    """累积曲线"""

    def test_annual_running_sum(self):
        out = cumulative(make_series([0.1, 0.1, 0.1]))
        np.testing.assert_allclose(out.values, [0.1, 0.2, 0.3])
        assert out.unit == Unit.INDEX

    def test_quarterly_divides_by_four(self):
        out = cumulative(make_series([0.12] * 4, "2000-Q1"))
        np.testing.assert_allclose(out.values, [0.03, 0.06, 0.09, 0.12])

    def test_zeros(self):
        np.testing.assert_array_equal(cumulative(make_series([0.0] * 4)).values, np.zeros(4))

    def test_linear(self, rng):
        s = make_series(rng.normal(size=30), "2000-01")
        scaled = s.replace(values=-2.5 * s.values)
        np.testing.assert_allclose(cumulative(scaled).values, -2.5 * cumulative(s).values)

    def test_missing_rejected(self):
        with pytest.raises(MissingValue):
            cumulative(make_series([0.1, np.nan]))


class TestAlign:
    """滞后对齐"""

    def test_identity(self):
        a = make_series([1.0, 2.0, 3.0])
        x, y = align(a, a, 0)
        np.testing.assert_array_equal(x.values, a.values)
        np.testing.assert_array_equal(y.values, a.values)

    def test_intersection(self):
        a = make_series(np.arange(11.0), "1990")
        b = make_series(np.arange(11.0), "1985")
        x, y = align(a, b, 0)
        assert (str(x.start), str(x.end)) == ("1990", "1995")
        assert (str(y.start), str(y.end)) == ("1990", "1995")

    def test_lag_pairs(self):
        a = make_series(np.arange(10.0) * 10, "2000")
        b = make_series(np.arange(10.0), "2000")
        x, y = align(a, b, 2)
        assert str(x.start) == "2002"
        # a(2002) 与 b(2000) 配对
        assert x.values[0] == 20.0
        assert y.values[0] == 0.0
        assert len(x) == len(y) == 8

    def test_symmetric_at_zero_lag(self):
        a = make_series(np.ones(8), "1990")
        b = make_series(np.ones(8), "1994")
        ab = align(a, b, 0)
        ba = align(b, a, 0)
        assert (ab[0].start, ab[0].end) == (ba[0].start, ba[0].end)

    def test_no_overlap(self):
        with pytest.raises(EmptyOverlap):
            align(make_series([1.0], "1990"), make_series([1.0], "2000"), 0)

    def test_frequency_mismatch(self):
        with pytest.raises(FrequencyMismatch):
            align(make_series([1.0], "1990"), make_series([1.0], "1990-01"), 0)

    def test_common_range(self):
        lo, hi = common_range(make_series(np.ones(10), "1990"), make_series(np.ones(10), "1995"))
        assert (str(lo), str(hi)) == ("1995", "1999")
