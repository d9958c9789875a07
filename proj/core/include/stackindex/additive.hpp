#pragma once

#include "stackindex/dataset.hpp"
#include "stackindex/forecast.hpp"

#include <vector>

namespace stackindex {

struct AdditiveModelConfig {
    int n_changepoints = 10;
    /// Fraction of the history in which changepoints may be placed, in (0, 1].
    double changepoint_range = 0.8;
    int fourier_order = 3;
    int seasonal_period = 12;
    /// L2 penalty on the changepoint slope deltas only.
    double ridge_lambda = 0.5;

    /// Throws InvalidConfig for out-of-range fields, SeriesTooShort when the
    /// design would have at least as many columns as there are points.
    void validate(std::size_t series_length) const;
};

/// Piecewise-linear trend plus Fourier seasonality, fitted by penalized least squares.
///
/// With t the month index from the series start,
///   trend(t)    = intercept + slope * t + sum_j delta_j * max(0, t - c_j)
///   seasonal(t) = sum_n a_n cos(2 pi n t / P) + b_n sin(2 pi n t / P)
struct AdditiveModelFit {
    AdditiveModelConfig config;
    MonthStamp start;
    std::size_t length = 0;

    double intercept = 0.0;
    double slope = 0.0;
    std::vector<double> changepoints; ///< month indices c_j
    std::vector<double> deltas;
    std::vector<double> cos_coefficients; ///< a_1 .. a_N
    std::vector<double> sin_coefficients; ///< b_1 .. b_N

    double residual_sd = 0.0;
    std::vector<double> fitted;

    MonthStamp origin() const { return start.plus(static_cast<int>(length) - 1); }

    double trend(double t) const;
    double seasonal(double t) const;
    double predict_at(double t) const { return trend(t) + seasonal(t); }
};

/// Evenly spaced changepoint month indices over the first `changepoint_range`
/// of a series of `length` points.
std::vector<double> changepoint_positions(std::size_t length, const AdditiveModelConfig& config);

AdditiveModelFit fit_additive(const TagSeries& series, const AdditiveModelConfig& config = {});

Forecast predict_additive(const AdditiveModelFit& fit, int horizon, double level);

} // namespace stackindex
