#include "stackindex/json_codec.hpp"

namespace stackindex::json_codec {

namespace {

Error invalid(const std::string& field, const std::string& why) {
    return Error(ErrorCode::InvalidRequest, "invalid '" + field + "': " + why, {{"field", field}});
}

int read_int(const json& config, const char* field) {
    const auto& v = config.at(field);
    if (!v.is_number_integer()) {
        throw invalid(field, "expected an integer");
    }
    return v.get<int>();
}

double read_real(const json& config, const char* field) {
    const auto& v = config.at(field);
    if (!v.is_number()) {
        throw invalid(field, "expected a number");
    }
    return v.get<double>();
}

} // namespace

json error_body(const Error& error) {
    json details = json::object();
    for (const auto& [key, value] : error.details()) {
        details[key] = value;
    }
    return {{"code", std::string(to_string(error.code()))}, {"message", error.what()}, {"details", details}};
}

json points(const TagSeries& series) {
    json out = json::array();
    for (std::size_t i = 0; i < series.size(); ++i) {
        out.push_back({{"month", series.month_at(i).to_string()}, {"value", series[i]}});
    }
    return out;
}

json series_body(const TagSeries& series) {
    json filled = json::array();
    for (auto i : series.filled()) {
        filled.push_back(series.month_at(i).to_string());
    }
    return {{"tag", series.tag()},
            {"fill_policy", std::string(to_string(series.fill_policy()))},
            {"filled_months", filled},
            {"points", points(series)}};
}

json forecast(const Forecast& f) {
    json pts = json::array();
    for (const auto& p : f.points()) {
        pts.push_back({{"month", p.month.to_string()}, {"yhat", p.yhat}, {"lower", p.lower}, {"upper", p.upper}});
    }
    return {{"origin", f.origin().to_string()}, {"horizon", f.horizon()}, {"level", f.level()}, {"points", pts}};
}

json forecast_result(const TagSeries& series, const ModelRun& run, std::size_t history_months) {
    const std::size_t keep = std::min(history_months, series.size());
    const auto tail = series.slice(series.month_at(series.size() - keep), series.end());
    return {{"tag", series.tag()},
            {"history", points(tail)},
            {"forecast", forecast(run.forecast)},
            {"warnings", run.warnings}};
}

json changepoints(const TagSeries& series, std::span<const ChangePoint> cps, double min_confidence) {
    json list = json::array();
    for (const auto& cp : cps) {
        list.push_back({{"month", cp.month.to_string()},
                        {"confidence", cp.confidence},
                        {"direction", std::string(to_string(cp.direction))},
                        {"pre_mean", cp.pre_mean},
                        {"post_mean", cp.post_mean}});
    }
    return {{"tag", series.tag()}, {"min_confidence", min_confidence}, {"changepoints", list}};
}

json metrics(const MetricReport& m) {
    return {{"n", m.n},
            {"mae", m.mae},
            {"mse", m.mse},
            {"rmse", m.rmse},
            {"cumulative_predicted", m.cumulative_predicted},
            {"cumulative_actual", m.cumulative_actual},
            {"cum_abs_err", m.cumulative_abs_error},
            {"cum_rel_err", m.cumulative_rel_error ? json(*m.cumulative_rel_error) : json(nullptr)}};
}

json backtest(const BacktestReport& r) {
    json residuals = json::array();
    for (std::size_t i = 0; i < r.residuals.size(); ++i) {
        residuals.push_back({{"month", r.months[i].to_string()},
                             {"actual", r.actual[i]},
                             {"predicted", r.predicted[i]},
                             {"residual", r.residuals[i]}});
    }
    return {{"tag", r.tag},
            {"model", std::string(to_string(r.model.kind))},
            {"model_config", r.model.describe()},
            {"split_month", r.split_month.to_string()},
            {"holdout", r.holdout},
            {"metrics", metrics(r.metrics)},
            {"residuals", residuals},
            {"warnings", r.warnings}};
}

json ranking(const TrendRanking& ranking) {
    json entries = json::array();
    for (const auto& [tag, score] : ranking.entries) {
        entries.push_back({{"tag", tag}, {"score", score}});
    }
    return {{"window_start", ranking.window_start.to_string()},
            {"window_end", ranking.window_end.to_string()},
            {"ranking", entries}};
}

json tags(const Dataset& dataset) {
    return {{"tags", dataset.tags()},
            {"range", {{"from", dataset.first_month().to_string()}, {"to", dataset.last_month().to_string()}}},
            {"months", dataset.month_count()}};
}

void apply_model_config(const json& config, ModelSpec& spec) {
    if (config.is_null()) {
        return;
    }
    if (!config.is_object()) {
        throw invalid("config", "expected an object");
    }
    auto& a = spec.additive;
    if (config.contains("n_changepoints")) a.n_changepoints = read_int(config, "n_changepoints");
    if (config.contains("changepoint_range")) a.changepoint_range = read_real(config, "changepoint_range");
    if (config.contains("fourier_order")) a.fourier_order = read_int(config, "fourier_order");
    if (config.contains("seasonal_period")) a.seasonal_period = read_int(config, "seasonal_period");
    if (config.contains("ridge_lambda")) a.ridge_lambda = read_real(config, "ridge_lambda");
    if (config.contains("order")) {
        const auto& order = config["order"];
        if (order.is_string() && order.get<std::string>() == "auto") {
            spec.sarima_auto = true;
        } else if (order.is_array() && order.size() == 6 &&
                   std::all_of(order.begin(), order.end(), [](const json& v) { return v.is_number_integer(); })) {
            spec.sarima = SarimaOrder{order[0].get<int>(), order[1].get<int>(), order[2].get<int>(),
                                      order[3].get<int>(), order[4].get<int>(), order[5].get<int>()};
            spec.sarima_auto = false;
        } else {
            throw invalid("order", "expected [p,d,q,P,D,Q] or \"auto\"");
        }
    }
}

} // namespace stackindex::json_codec
