#include "stackindex/evaluation.hpp"

#include "stackindex/error.hpp"

#include <algorithm>
#include <cmath>

namespace stackindex {

namespace {

// Picks an rmse next to sqrt(mse) whose square rounds back to mse when one
// exists; otherwise mse is re-derived from rmse (a one-ulp adjustment).
std::pair<double, double> consistent_root(double mse) {
    const double root = std::sqrt(mse);
    for (double candidate : {root, std::nextafter(root, 0.0), std::nextafter(root, INFINITY)}) {
        if (candidate * candidate == mse) {
            return {mse, candidate};
        }
    }
    return {root * root, root};
}

} // namespace

MetricReport compute_metrics(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size()) {
        throw Error(ErrorCode::LengthMismatch, "actual and predicted lengths differ",
                    {{"actual", std::to_string(actual.size())}, {"predicted", std::to_string(predicted.size())}});
    }
    if (actual.empty()) {
        throw Error(ErrorCode::EmptyInput, "metrics need at least one value");
    }
    MetricReport r;
    r.n = actual.size();
    long double abs_sum = 0.0L;
    long double sq_sum = 0.0L;
    long double pred_sum = 0.0L;
    long double act_sum = 0.0L;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const long double e = static_cast<long double>(actual[i]) - predicted[i];
        abs_sum += std::fabs(e);
        sq_sum += e * e;
        pred_sum += predicted[i];
        act_sum += actual[i];
    }
    const auto n = static_cast<long double>(r.n);
    r.mae = static_cast<double>(abs_sum / n);
    std::tie(r.mse, r.rmse) = consistent_root(static_cast<double>(sq_sum / n));
    // Equal |e| everywhere makes mae == rmse mathematically; rounding may not.
    r.mae = std::min(r.mae, r.rmse);
    r.cumulative_predicted = static_cast<double>(pred_sum);
    r.cumulative_actual = static_cast<double>(act_sum);
    r.cumulative_abs_error = static_cast<double>(std::fabs(pred_sum - act_sum));
    if (act_sum > 0.0L) {
        r.cumulative_rel_error = static_cast<double>(std::fabs(pred_sum - act_sum) / act_sum);
    }
    return r;
}

BacktestReport backtest(const TagSeries& series, const ModelSpec& model, int holdout_months) {
    if (holdout_months < 1) {
        throw Error(ErrorCode::InvalidArgument, "holdout must be at least 1 month",
                    {{"holdout", std::to_string(holdout_months)}});
    }
    if (holdout_months > kMaxHoldout) {
        throw Error(ErrorCode::HoldoutTooLong,
                    "holdout " + std::to_string(holdout_months) + " exceeds the 24-month forecast cap",
                    {{"holdout", std::to_string(holdout_months)}, {"max_holdout", std::to_string(kMaxHoldout)}});
    }
    const auto h = static_cast<std::size_t>(holdout_months);
    if (h >= series.size()) {
        throw Error(ErrorCode::HoldoutTooLong, "holdout leaves no training data",
                    {{"holdout", std::to_string(holdout_months)}, {"length", std::to_string(series.size())}});
    }
    const auto train = series.head(series.size() - h);
    auto run = run_model(train, model, holdout_months, 0.8);

    BacktestReport report;
    report.tag = series.tag();
    report.model = model;
    report.split_month = series.month_at(train.size());
    report.holdout = holdout_months;
    report.predicted = run.forecast.raw_yhat();
    for (std::size_t i = 0; i < h; ++i) {
        report.months.push_back(series.month_at(train.size() + i));
        report.actual.push_back(series[train.size() + i]);
        report.residuals.push_back(report.actual.back() - report.predicted[i]);
    }
    report.metrics = compute_metrics(report.actual, report.predicted);
    report.warnings = std::move(run.warnings);
    return report;
}

BacktestReport backtest(const Dataset& dataset, std::string_view tag, const ModelSpec& model, int holdout_months) {
    return backtest(get_series(dataset, tag), model, holdout_months);
}

std::string backtest_csv_header() {
    return "tag,model,split_month,holdout,mae,mse,rmse,cum_abs_err,cum_rel_err";
}

std::string backtest_csv_row(const BacktestReport& report) {
    const auto& m = report.metrics;
    std::string row = report.tag;
    if (row.find_first_of(",\"") != std::string::npos) {
        std::string quoted = "\"";
        for (char c : row) {
            quoted += c;
            if (c == '"') {
                quoted += '"';
            }
        }
        row = quoted + "\"";
    }
    row += ",";
    row += to_string(report.model.kind);
    row += "," + report.split_month.to_string();
    row += "," + std::to_string(report.holdout);
    row += "," + format_number(m.mae);
    row += "," + format_number(m.mse);
    row += "," + format_number(m.rmse);
    row += "," + format_number(m.cumulative_abs_error);
    row += ",";
    if (m.cumulative_rel_error) {
        row += format_number(*m.cumulative_rel_error);
    }
    return row;
}

TrendRanking trend_ranking(const Dataset& dataset, int window_months, int top) {
    if (window_months < 1) {
        throw Error(ErrorCode::InvalidArgument, "window must be at least 1 month",
                    {{"window", std::to_string(window_months)}});
    }
    if (static_cast<std::size_t>(window_months) > dataset.month_count()) {
        throw Error(ErrorCode::WindowTooLong,
                    "window of " + std::to_string(window_months) + " months exceeds the dataset's " +
                        std::to_string(dataset.month_count()),
                    {{"window", std::to_string(window_months)}, {"months", std::to_string(dataset.month_count())}});
    }
    if (top < 1) {
        throw Error(ErrorCode::InvalidArgument, "top must be at least 1", {{"top", std::to_string(top)}});
    }
    const std::size_t first = dataset.month_count() - static_cast<std::size_t>(window_months);
    TrendRanking ranking{dataset.month(first), dataset.last_month(), {}};
    for (std::size_t col = 0; col < dataset.tag_count(); ++col) {
        bool observed = false;
        for (std::size_t r = 0; r < dataset.month_count() && !observed; ++r) {
            observed = !dataset.is_missing(r, col);
        }
        if (!observed) {
            continue;
        }
        const auto series = column_series(dataset, col);
        double sum = 0.0;
        for (std::size_t i = first; i < series.size(); ++i) {
            sum += series[i];
        }
        ranking.entries.emplace_back(series.tag(), sum / window_months);
    }
    std::sort(ranking.entries.begin(), ranking.entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) {
            return a.second > b.second;
        }
        return a.first < b.first;
    });
    if (ranking.entries.size() > static_cast<std::size_t>(top)) {
        ranking.entries.resize(static_cast<std::size_t>(top));
    }
    return ranking;
}

} // namespace stackindex
