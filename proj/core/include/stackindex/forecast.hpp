#pragma once

#include "stackindex/month.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace stackindex {

/// Longest supported forecast horizon in months. With roughly a decade of
/// monthly history, forecasts are only trusted up to two years ahead.
inline constexpr int kMaxHorizon = 24;
inline constexpr double kMinLevel = 0.5;
inline constexpr double kMaxLevel = 0.99;

enum class ModelKind { Additive, HoltWinters, Sarima, Ensemble };

/// Exact identifiers shared by the CLI, the HTTP API and the UI.
std::string_view to_string(ModelKind kind) noexcept;
std::optional<ModelKind> parse_model_kind(std::string_view text) noexcept;

struct ForecastPoint {
    MonthStamp month;
    double yhat;
    double lower;
    double upper;
    /// Model output before clamping at zero; used for error metrics.
    double raw_yhat;
};

/// Point forecasts with symmetric prediction intervals over consecutive months.
class Forecast {
public:
    Forecast(MonthStamp origin, double level, std::vector<ForecastPoint> points);

    MonthStamp origin() const noexcept { return origin_; }
    double level() const noexcept { return level_; }
    int horizon() const noexcept { return static_cast<int>(points_.size()); }
    const std::vector<ForecastPoint>& points() const noexcept { return points_; }

    std::vector<double> yhat() const;
    std::vector<double> raw_yhat() const;

private:
    MonthStamp origin_;
    double level_;
    std::vector<ForecastPoint> points_;
};

/// Throws InvalidHorizon (< 1) or HorizonTooLarge (> kMaxHorizon).
void validate_horizon(int horizon);
/// Throws InvalidLevel outside [kMinLevel, kMaxLevel].
void validate_level(double level);

/// Standard normal quantile.
double normal_quantile(double p);
/// Two-sided multiplier z((1 + level) / 2).
double interval_z(double level);

/// Builds a Forecast from unclamped means and interval half-widths.
/// Negative values are clamped to zero so that lower <= yhat <= upper holds.
Forecast make_forecast(MonthStamp origin, double level, std::span<const double> raw_yhat,
                       std::span<const double> half_width);

} // namespace stackindex
