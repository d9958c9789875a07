#pragma once

#include "stackindex/dataset.hpp"
#include "stackindex/forecast.hpp"

#include <vector>

namespace stackindex {

/// Additive triple exponential smoothing with a 12-month season.
struct HoltWintersFit {
    static constexpr int kPeriod = 12;

    double alpha = 0.0; ///< level smoothing
    double beta = 0.0;  ///< trend smoothing
    double gamma = 0.0; ///< seasonal smoothing

    double level = 0.0;
    double trend = 0.0;
    /// Seasonal index for each position t mod 12; sums to zero.
    std::vector<double> seasonal;

    MonthStamp start;
    std::size_t length = 0;
    double sse = 0.0; ///< one-step-ahead in-sample sum of squared errors
    double residual_sd = 0.0;
    std::vector<double> fitted; ///< one-step-ahead predictions

    MonthStamp origin() const { return start.plus(static_cast<int>(length) - 1); }
};

/// Grid search over (alpha, beta, gamma) in {0.05, 0.10, ..., 0.95}^3
/// minimizing one-step-ahead SSE. Throws SeriesTooShort below 24 points.
HoltWintersFit fit_holt_winters(const TagSeries& series);

Forecast predict_holt_winters(const HoltWintersFit& fit, int horizon, double level);

} // namespace stackindex
