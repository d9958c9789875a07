#pragma once

#include "stackindex/dataset.hpp"
#include "stackindex/models.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stackindex {

struct MetricReport {
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    double cumulative_predicted = 0.0;
    double cumulative_actual = 0.0;
    double cumulative_abs_error = 0.0;
    /// |sum(predicted) - sum(actual)| / sum(actual); absent when sum(actual) == 0.
    std::optional<double> cumulative_rel_error;
    std::size_t n = 0;
};

/// MAE, MSE, RMSE and cumulative-count errors from one residual pass.
/// rmse * rmse == mse holds bit-exactly. Throws LengthMismatch or EmptyInput.
MetricReport compute_metrics(std::span<const double> actual, std::span<const double> predicted);

inline constexpr int kMaxHoldout = 24;

struct BacktestReport {
    std::string tag;
    ModelSpec model;
    /// First held-out month.
    MonthStamp split_month;
    int holdout = 0;
    MetricReport metrics;
    std::vector<MonthStamp> months;
    std::vector<double> actual;
    std::vector<double> predicted; ///< unclamped model output
    std::vector<double> residuals; ///< actual - predicted
    std::vector<std::string> warnings;
};

/// Fits on all but the last `holdout_months` points and scores the forecast
/// against them. Throws HoldoutTooLong above 24 (or when nothing would be left
/// to train on) and propagates model errors.
BacktestReport backtest(const TagSeries& series, const ModelSpec& model, int holdout_months);
BacktestReport backtest(const Dataset& dataset, std::string_view tag, const ModelSpec& model, int holdout_months);

/// `tag,model,split_month,holdout,mae,mse,rmse,cum_abs_err,cum_rel_err`
std::string backtest_csv_header();
std::string backtest_csv_row(const BacktestReport& report);

struct TrendRanking {
    MonthStamp window_start;
    MonthStamp window_end;
    std::vector<std::pair<std::string, double>> entries; ///< descending score, ties alphabetical
};

/// Ranks tags by mean monthly count over the final `window_months`.
/// Throws WindowTooLong or InvalidArgument.
TrendRanking trend_ranking(const Dataset& dataset, int window_months, int top);

} // namespace stackindex
