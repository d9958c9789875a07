#include "support.hpp"

#include "stackindex/evaluation.hpp"

#include <algorithm>

using namespace stackindex;
using namespace stackindex::testing;

TEST(Metrics, SmallExample) {
    const std::vector<double> actual{2, 2}, predicted{1, 3};
    const auto m = compute_metrics(actual, predicted);
    EXPECT_EQ(m.mae, 1);
    EXPECT_EQ(m.mse, 1);
    EXPECT_EQ(m.rmse, 1);
    EXPECT_EQ(m.n, 2u);
    EXPECT_EQ(m.cumulative_abs_error, 0);
    ASSERT_TRUE(m.cumulative_rel_error);
    EXPECT_EQ(*m.cumulative_rel_error, 0);
}

TEST(Metrics, PerfectForecast) {
    const std::vector<double> y{3, 1, 4, 1, 5};
    const auto m = compute_metrics(y, y);
    EXPECT_EQ(m.mae, 0);
    EXPECT_EQ(m.mse, 0);
    EXPECT_EQ(m.rmse, 0);
    EXPECT_EQ(m.cumulative_abs_error, 0);
    EXPECT_EQ(*m.cumulative_rel_error, 0);
}

TEST(Metrics, CumulativeHoldoutTotals) {
    const std::vector<double> actual{1767566}, predicted{1721483};
    const auto m = compute_metrics(actual, predicted);
    EXPECT_EQ(m.cumulative_predicted, 1721483);
    EXPECT_EQ(m.cumulative_actual, 1767566);
    EXPECT_EQ(m.cumulative_abs_error, 46083);
    EXPECT_NEAR(*m.cumulative_rel_error, 46083.0 / 1767566.0, 1e-15);
    EXPECT_NEAR(*m.cumulative_rel_error, 0.0261, 1e-4);
}

TEST(Metrics, IdentitiesOnRandomResiduals) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> value(0, 1e6);
    std::lognormal_distribution<double> scale(0, 4);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng() % 50;
        std::vector<double> a(n), p(n), flipped(n);
        const double s = scale(rng);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = value(rng);
            p[i] = a[i] + s * (value(rng) / 5e5 - 1);
            flipped[i] = 2 * a[i] - p[i];
        }
        const auto m = compute_metrics(a, p);
        ASSERT_EQ(m.rmse * m.rmse, m.mse);
        ASSERT_LE(m.mae, m.rmse);
        ASSERT_GE(m.mae, 0);
        const auto f = compute_metrics(a, flipped);
        EXPECT_NEAR(f.mae, m.mae, 1e-9 * (1 + m.mae));
        EXPECT_NEAR(f.rmse, m.rmse, 1e-9 * (1 + m.rmse));
    }
}

TEST(Metrics, Errors) {
    const std::vector<double> two{1, 2}, one{1}, none{};
    EXPECT_ERROR_CODE(compute_metrics(two, one), ErrorCode::LengthMismatch);
    EXPECT_ERROR_CODE(compute_metrics(none, none), ErrorCode::EmptyInput);
    const std::vector<double> zeros{0, 0}, ones{1, 1};
    EXPECT_FALSE(compute_metrics(zeros, ones).cumulative_rel_error);
}

TEST(Backtest, ExactlyLearnableLine) {
    std::vector<double> y(60);
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = 3.0 * t;
    ModelSpec spec;
    spec.additive.fourier_order = 0;
    spec.additive.n_changepoints = 0;
    const auto r = backtest(make_series(y, "line"), spec, 6);
    EXPECT_LT(r.metrics.mae, 1e-4);
    EXPECT_EQ(r.split_month, MonthStamp(2010, 1).plus(54));
    EXPECT_EQ(r.residuals.size(), 6u);
    EXPECT_EQ(r.actual.back(), 177);
}

TEST(Backtest, HoldoutBounds) {
    const auto s = make_series(trend_season_noise(60, 100, 1, 10, 1, 1));
    EXPECT_ERROR_CODE(backtest(s, ModelSpec{}, 30), ErrorCode::HoldoutTooLong);
    EXPECT_ERROR_CODE(backtest(s, ModelSpec{}, 0), ErrorCode::InvalidArgument);
    const auto short_series = make_series(std::vector<double>(20, 1.0));
    EXPECT_ERROR_CODE(backtest(short_series, ModelSpec{}, 20), ErrorCode::HoldoutTooLong);
}

TEST(Backtest, BeatsNaiveOnSeasonalTrend) {
    const auto y = trend_season_noise(120, 500, 3, 40, 5, 123);
    const auto r = backtest(make_series(y), ModelSpec{}, 12);
    double naive = 0;
    for (std::size_t i = 108; i < 120; ++i) naive += (y[i] - y[107]) * (y[i] - y[107]);
    EXPECT_LT(r.metrics.rmse, std::sqrt(naive / 12));
}

TEST(Backtest, UsesUnclampedPredictions) {
    // A steep decline pushes raw forecasts below zero; metrics must see them.
    std::vector<double> y(48);
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = t < 40 ? 400.0 - 10.0 * t : 0.0;
    ModelSpec spec;
    spec.additive.fourier_order = 0;
    spec.additive.n_changepoints = 0;
    const auto r = backtest(make_series(y), spec, 8);
    EXPECT_LT(*std::min_element(r.predicted.begin(), r.predicted.end()), 0.0);
}

TEST(Backtest, CsvRow) {
    std::vector<double> y(60);
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = 2.0 * t + 1;
    ModelSpec spec;
    spec.additive.fourier_order = 0;
    spec.additive.n_changepoints = 0;
    const auto r = backtest(make_series(y, "a,b"), spec, 12);
    EXPECT_EQ(backtest_csv_header(), "tag,model,split_month,holdout,mae,mse,rmse,cum_abs_err,cum_rel_err");
    const auto row = backtest_csv_row(r);
    EXPECT_EQ(row.rfind("\"a,b\",additive,2014-01,12,", 0), 0u) << row;
    EXPECT_EQ(row, backtest_csv_row(backtest(make_series(y, "a,b"), spec, 12)));
}

TEST(TrendRanking, Basic) {
    const Dataset ds(MonthStamp(2009, 1), {"a", "b"}, {1, 5, 1, 5}, std::vector<bool>(4, false));
    const auto r = trend_ranking(ds, 2, 1);
    ASSERT_EQ(r.entries.size(), 1u);
    EXPECT_EQ(r.entries[0].first, "b");
    EXPECT_EQ(r.entries[0].second, 5);
    EXPECT_EQ(r.window_start, MonthStamp(2009, 1));
    EXPECT_EQ(r.window_end, MonthStamp(2009, 2));
}

TEST(TrendRanking, TiesAlphabeticalAndWindow) {
    const Dataset ds(MonthStamp(2009, 1), {"zeta", "alpha", "mid"}, {100, 0, 0, 1, 3, 3, 1, 3, 3},
                     std::vector<bool>(9, false));
    const auto r = trend_ranking(ds, 2, 10);
    ASSERT_EQ(r.entries.size(), 3u);
    EXPECT_EQ(r.entries[0].first, "alpha");
    EXPECT_EQ(r.entries[1].first, "mid");
    EXPECT_EQ(r.entries[2].first, "zeta");
    EXPECT_ERROR_CODE(trend_ranking(ds, 4, 1), ErrorCode::WindowTooLong);
    EXPECT_ERROR_CODE(trend_ranking(ds, 0, 1), ErrorCode::InvalidArgument);
    EXPECT_ERROR_CODE(trend_ranking(ds, 1, 0), ErrorCode::InvalidArgument);
}

TEST(TrendRanking, ColumnOrderDoesNotMatter) {
    const Dataset ab(MonthStamp(2009, 1), {"a", "b", "c"}, {1, 2, 2, 3, 4, 4}, std::vector<bool>(6, false));
    const Dataset ba(MonthStamp(2009, 1), {"c", "b", "a"}, {2, 2, 1, 4, 4, 3}, std::vector<bool>(6, false));
    const auto x = trend_ranking(ab, 2, 3);
    const auto y = trend_ranking(ba, 2, 3);
    EXPECT_EQ(x.entries, y.entries);
}
