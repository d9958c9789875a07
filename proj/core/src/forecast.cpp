#include "stackindex/forecast.hpp"

#include "stackindex/error.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>

namespace stackindex {

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
    case ModelKind::Additive: return "additive";
    case ModelKind::HoltWinters: return "holt-winters";
    case ModelKind::Sarima: return "sarima";
    case ModelKind::Ensemble: return "ensemble";
    }
    return "additive";
}

std::optional<ModelKind> parse_model_kind(std::string_view text) noexcept {
    for (auto kind : {ModelKind::Additive, ModelKind::HoltWinters, ModelKind::Sarima, ModelKind::Ensemble}) {
        if (text == to_string(kind)) {
            return kind;
        }
    }
    return std::nullopt;
}

Forecast::Forecast(MonthStamp origin, double level, std::vector<ForecastPoint> points)
    : origin_(origin), level_(level), points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].month != origin_.plus(static_cast<int>(i) + 1)) {
            throw Error(ErrorCode::InvalidArgument, "forecast months must follow the origin consecutively");
        }
        if (!(points_[i].lower <= points_[i].yhat && points_[i].yhat <= points_[i].upper)) {
            throw Error(ErrorCode::InvalidArgument, "forecast interval does not contain the point forecast",
                        {{"month", points_[i].month.to_string()}});
        }
    }
}

std::vector<double> Forecast::yhat() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) {
        out.push_back(p.yhat);
    }
    return out;
}

std::vector<double> Forecast::raw_yhat() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) {
        out.push_back(p.raw_yhat);
    }
    return out;
}

void validate_horizon(int horizon) {
    if (horizon < 1) {
        throw Error(ErrorCode::InvalidHorizon, "horizon must be at least 1 month",
                    {{"horizon", std::to_string(horizon)}});
    }
    if (horizon > kMaxHorizon) {
        throw Error(ErrorCode::HorizonTooLarge,
                    "horizon " + std::to_string(horizon) + " exceeds the 24-month cap: forecasts from about a "
                    "decade of monthly history are only reliable up to 2 years ahead",
                    {{"horizon", std::to_string(horizon)}, {"max_horizon", std::to_string(kMaxHorizon)}});
    }
}

void validate_level(double level) {
    if (!(level >= kMinLevel && level <= kMaxLevel)) {
        throw Error(ErrorCode::InvalidLevel, "interval level must lie in [0.5, 0.99]",
                    {{"level", std::to_string(level)}});
    }
}

double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double interval_z(double level) {
    validate_level(level);
    return normal_quantile(0.5 * (1.0 + level));
}

Forecast make_forecast(MonthStamp origin, double level, std::span<const double> raw_yhat,
                       std::span<const double> half_width) {
    if (raw_yhat.size() != half_width.size()) {
        throw Error(ErrorCode::LengthMismatch, "forecast means and widths differ in length");
    }
    std::vector<ForecastPoint> points;
    points.reserve(raw_yhat.size());
    for (std::size_t i = 0; i < raw_yhat.size(); ++i) {
        const double raw = raw_yhat[i];
        const double w = std::max(0.0, half_width[i]);
        const double yhat = std::max(raw, 0.0);
        const double lower = std::min(std::max(raw - w, 0.0), yhat);
        const double upper = std::max(raw + w, yhat);
        points.push_back({origin.plus(static_cast<int>(i) + 1), yhat, lower, upper, raw});
    }
    return Forecast(origin, level, std::move(points));
}

} // namespace stackindex
