#pragma once

#include "stackindex/changepoint.hpp"
#include "stackindex/dataset.hpp"
#include "stackindex/error.hpp"
#include "stackindex/evaluation.hpp"
#include "stackindex/models.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>

// JSON shapes shared by the HTTP API and the CLI's --json output.
namespace stackindex::json_codec {

using nlohmann::json;

json error_body(const Error& error);
json points(const TagSeries& series);
json series_body(const TagSeries& series);
json forecast(const Forecast& forecast);
/// One forecast result: tag, trailing history, forecast, warnings.
json forecast_result(const TagSeries& series, const ModelRun& run, std::size_t history_months);
json changepoints(const TagSeries& series, std::span<const ChangePoint> points, double min_confidence);
json metrics(const MetricReport& report);
json backtest(const BacktestReport& report);
json ranking(const TrendRanking& ranking);
json tags(const Dataset& dataset);

/// Reads `config` overrides into `spec`. Throws Error(InvalidRequest) naming the bad field.
void apply_model_config(const json& config, ModelSpec& spec);

} // namespace stackindex::json_codec
