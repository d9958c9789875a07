#include "stackindex/models.hpp"

#include "stackindex/error.hpp"

#include <algorithm>

namespace stackindex {

namespace {

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) {
        return values[n / 2];
    }
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string format_real(double v) {
    return format_number(v);
}

} // namespace

Forecast ensemble_forecast(std::span<const Forecast> forecasts) {
    if (forecasts.size() < 2) {
        throw Error(ErrorCode::TooFewForecasts, "ensemble needs at least two member forecasts",
                    {{"count", std::to_string(forecasts.size())}});
    }
    const auto& first = forecasts.front();
    for (const auto& f : forecasts) {
        if (f.horizon() != first.horizon()) {
            throw Error(ErrorCode::MismatchedHorizons, "ensemble members have different horizons",
                        {{"expected", std::to_string(first.horizon())}, {"found", std::to_string(f.horizon())}});
        }
        if (f.origin() != first.origin()) {
            throw Error(ErrorCode::MismatchedOrigins, "ensemble members have different origins",
                        {{"expected", first.origin().to_string()}, {"found", f.origin().to_string()}});
        }
        if (f.level() != first.level()) {
            throw Error(ErrorCode::MismatchedLevels, "ensemble members have different interval levels",
                        {{"expected", format_real(first.level())}, {"found", format_real(f.level())}});
        }
    }

    std::vector<ForecastPoint> points;
    points.reserve(static_cast<std::size_t>(first.horizon()));
    std::vector<double> yhat, lower, upper, raw;
    for (std::size_t i = 0; i < static_cast<std::size_t>(first.horizon()); ++i) {
        yhat.clear();
        lower.clear();
        upper.clear();
        raw.clear();
        for (const auto& f : forecasts) {
            const auto& p = f.points()[i];
            yhat.push_back(p.yhat);
            lower.push_back(p.lower);
            upper.push_back(p.upper);
            raw.push_back(p.raw_yhat);
        }
        const double y = median(yhat);
        points.push_back({first.points()[i].month, y, std::min(median(lower), y), std::max(median(upper), y),
                          median(raw)});
    }
    return Forecast(first.origin(), first.level(), std::move(points));
}

std::string ModelSpec::describe() const {
    switch (kind) {
    case ModelKind::Additive:
        return "additive(changepoints=" + std::to_string(additive.n_changepoints) +
               ",range=" + format_real(additive.changepoint_range) +
               ",fourier=" + std::to_string(additive.fourier_order) +
               ",period=" + std::to_string(additive.seasonal_period) +
               ",lambda=" + format_real(additive.ridge_lambda) + ")";
    case ModelKind::HoltWinters:
        return "holt-winters(additive,period=12)";
    case ModelKind::Sarima:
        return sarima_auto ? "sarima(auto,d=" + std::to_string(sarima.d) + ",D=" + std::to_string(sarima.D) + ")"
                           : "sarima" + sarima.to_string();
    case ModelKind::Ensemble: {
        ModelSpec a = *this;
        a.kind = ModelKind::Additive;
        ModelSpec s = *this;
        s.kind = ModelKind::Sarima;
        return "ensemble[" + a.describe() + ";holt-winters;" + s.describe() + "]";
    }
    }
    return {};
}

ModelRun run_model(const TagSeries& series, const ModelSpec& spec, int horizon, double level) {
    validate_horizon(horizon);
    validate_level(level);
    switch (spec.kind) {
    case ModelKind::Additive:
        return {predict_additive(fit_additive(series, spec.additive), horizon, level), {}};
    case ModelKind::HoltWinters:
        return {predict_holt_winters(fit_holt_winters(series), horizon, level), {}};
    case ModelKind::Sarima: {
        auto fit = spec.sarima_auto ? fit_sarima_auto(series, spec.sarima.d, spec.sarima.D)
                                    : fit_sarima(series, spec.sarima);
        std::vector<std::string> warnings;
        if (!fit.converged) {
            warnings.push_back("NonConvergence: SARIMA " + fit.order.to_string() +
                               " optimizer stopped after " + std::to_string(fit.evaluations) +
                               " evaluations with simplex spread above 1e-6; best point returned");
        }
        return {predict_sarima(fit, horizon, level), std::move(warnings)};
    }
    case ModelKind::Ensemble: {
        ModelSpec member = spec;
        std::vector<Forecast> members;
        std::vector<std::string> warnings;
        for (auto kind : {ModelKind::Additive, ModelKind::HoltWinters, ModelKind::Sarima}) {
            member.kind = kind;
            auto run = run_model(series, member, horizon, level);
            members.push_back(std::move(run.forecast));
            warnings.insert(warnings.end(), run.warnings.begin(), run.warnings.end());
        }
        return {ensemble_forecast(members), std::move(warnings)};
    }
    }
    throw Error(ErrorCode::UnknownModel, "unknown model kind");
}

} // namespace stackindex
