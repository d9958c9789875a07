#pragma once

#include "stackindex/dataset.hpp"
#include "stackindex/forecast.hpp"

#include <string>
#include <vector>

namespace stackindex {

/// (p,d,q)(P,D,Q)_12. Defaults to (1,1,1)(0,1,1)_12.
struct SarimaOrder {
    static constexpr int kSeasonalPeriod = 12;

    int p = 1;
    int d = 1;
    int q = 1;
    int P = 0;
    int D = 1;
    int Q = 1;

    /// Throws InvalidOrder.
    void validate() const;
    std::string to_string() const;

    friend bool operator==(const SarimaOrder&, const SarimaOrder&) = default;
};

struct SarimaFit {
    SarimaOrder order;
    std::vector<double> ar;          ///< phi_1..phi_p
    std::vector<double> ma;          ///< theta_1..theta_q
    std::vector<double> seasonal_ar; ///< Phi_1..Phi_P
    std::vector<double> seasonal_ma; ///< Theta_1..Theta_Q

    bool has_mean = false; ///< intercept (d + D = 0) or drift of the differenced series
    double mean = 0.0;

    double css = 0.0;            ///< conditional sum of squares
    std::size_t effective_n = 0; ///< number of residuals in the CSS
    double residual_sd = 0.0;
    double aic = 0.0;

    bool converged = true; ///< false when the optimizer budget ran out first
    int evaluations = 0;

    MonthStamp start;
    std::vector<double> history;   ///< the training series
    std::vector<double> residuals; ///< aligned with the differenced series; zero before conditioning

    MonthStamp origin() const { return start.plus(static_cast<int>(history.size()) - 1); }
};

/// Conditional-sum-of-squares fit, Nelder-Mead from a zero start, at most
/// 2000 objective evaluations. The mean term is profiled out exactly.
SarimaFit fit_sarima(const TagSeries& series, const SarimaOrder& order = {});

/// Fits every (p,q,P,Q) in {0,1}^4 with the given differencing orders and
/// returns the fit with the lowest AIC.
SarimaFit fit_sarima_auto(const TagSeries& series, int d = 1, int D = 1);

Forecast predict_sarima(const SarimaFit& fit, int horizon, double level);

/// Psi weights psi_0..psi_{count-1} of the integrated model's MA(infinity) form.
std::vector<double> sarima_psi_weights(const SarimaFit& fit, std::size_t count);

} // namespace stackindex
