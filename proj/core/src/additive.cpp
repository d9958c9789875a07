#include "stackindex/additive.hpp"

#include "stackindex/error.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

namespace stackindex {

namespace {

constexpr std::size_t kMinLength = 24;

double fourier_angle(int harmonic, double t, int period) {
    return 2.0 * std::numbers::pi * harmonic * t / period;
}

} // namespace

void AdditiveModelConfig::validate(std::size_t series_length) const {
    if (n_changepoints < 0) {
        throw Error(ErrorCode::InvalidConfig, "n_changepoints must be non-negative");
    }
    if (!(changepoint_range > 0.0 && changepoint_range <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "changepoint_range must lie in (0, 1]");
    }
    if (fourier_order < 0) {
        throw Error(ErrorCode::InvalidConfig, "fourier_order must be non-negative");
    }
    if (seasonal_period < 2) {
        throw Error(ErrorCode::InvalidConfig, "seasonal_period must be at least 2");
    }
    // Harmonics at or beyond the Nyquist frequency alias onto lower ones.
    if (2 * fourier_order >= seasonal_period) {
        throw Error(ErrorCode::InvalidConfig, "fourier_order must be below seasonal_period / 2",
                    {{"fourier_order", std::to_string(fourier_order)},
                     {"seasonal_period", std::to_string(seasonal_period)}});
    }
    if (!(ridge_lambda >= 0.0) || !std::isfinite(ridge_lambda)) {
        throw Error(ErrorCode::InvalidConfig, "ridge_lambda must be a non-negative real");
    }
    const auto columns = static_cast<std::size_t>(2 * fourier_order + n_changepoints + 2);
    if (columns >= series_length) {
        throw Error(ErrorCode::SeriesTooShort,
                    "series of " + std::to_string(series_length) + " points cannot identify " +
                        std::to_string(columns) + " coefficients",
                    {{"length", std::to_string(series_length)}, {"columns", std::to_string(columns)}});
    }
}

std::vector<double> changepoint_positions(std::size_t length, const AdditiveModelConfig& config) {
    std::vector<double> out;
    if (config.n_changepoints == 0) {
        return out;
    }
    const auto history = static_cast<double>(
        std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(length * config.changepoint_range))));
    const double last = history - 1.0;
    for (int j = 1; j <= config.n_changepoints; ++j) {
        out.push_back(std::round(last * j / config.n_changepoints));
    }
    return out;
}

double AdditiveModelFit::trend(double t) const {
    double value = intercept + slope * t;
    for (std::size_t j = 0; j < changepoints.size(); ++j) {
        value += deltas[j] * std::max(0.0, t - changepoints[j]);
    }
    return value;
}

double AdditiveModelFit::seasonal(double t) const {
    double value = 0.0;
    for (std::size_t k = 0; k < cos_coefficients.size(); ++k) {
        const double angle = fourier_angle(static_cast<int>(k) + 1, t, config.seasonal_period);
        value += cos_coefficients[k] * std::cos(angle) + sin_coefficients[k] * std::sin(angle);
    }
    return value;
}

AdditiveModelFit fit_additive(const TagSeries& series, const AdditiveModelConfig& config) {
    const std::size_t n = series.size();
    if (n < kMinLength) {
        throw Error(ErrorCode::SeriesTooShort, "additive model needs at least 24 months",
                    {{"length", std::to_string(n)}, {"minimum", std::to_string(kMinLength)}});
    }
    config.validate(n);

    const auto cps = changepoint_positions(n, config);
    const auto n_cp = static_cast<Eigen::Index>(cps.size());
    const auto order = static_cast<Eigen::Index>(config.fourier_order);
    const Eigen::Index p = 2 + n_cp + 2 * order;
    const auto rows = static_cast<Eigen::Index>(n);

    // Penalized least squares as an augmented ordinary least-squares problem:
    // sqrt(lambda) rows below the design penalize each delta column.
    const bool penalize = config.ridge_lambda > 0.0 && n_cp > 0;
    const Eigen::Index aug = penalize ? n_cp : 0;
    Eigen::MatrixXd design = Eigen::MatrixXd::Zero(rows + aug, p);
    Eigen::VectorXd target = Eigen::VectorXd::Zero(rows + aug);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double t = static_cast<double>(i);
        design(i, 0) = 1.0;
        design(i, 1) = t;
        for (Eigen::Index j = 0; j < n_cp; ++j) {
            design(i, 2 + j) = std::max(0.0, t - cps[static_cast<std::size_t>(j)]);
        }
        for (Eigen::Index k = 0; k < order; ++k) {
            const double angle = fourier_angle(static_cast<int>(k) + 1, t, config.seasonal_period);
            design(i, 2 + n_cp + 2 * k) = std::cos(angle);
            design(i, 2 + n_cp + 2 * k + 1) = std::sin(angle);
        }
        target(i) = series[static_cast<std::size_t>(i)];
    }
    const double root_lambda = std::sqrt(config.ridge_lambda);
    for (Eigen::Index j = 0; j < aug; ++j) {
        design(rows + j, 2 + j) = root_lambda;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) {
        throw Error(ErrorCode::SingularDesign, "design matrix is rank deficient",
                    {{"rank", std::to_string(qr.rank())}, {"columns", std::to_string(p)}});
    }
    const Eigen::VectorXd beta = qr.solve(target);

    AdditiveModelFit fit;
    fit.config = config;
    fit.start = series.start();
    fit.length = n;
    fit.intercept = beta(0);
    fit.slope = beta(1);
    fit.changepoints = cps;
    for (Eigen::Index j = 0; j < n_cp; ++j) {
        fit.deltas.push_back(beta(2 + j));
    }
    for (Eigen::Index k = 0; k < order; ++k) {
        fit.cos_coefficients.push_back(beta(2 + n_cp + 2 * k));
        fit.sin_coefficients.push_back(beta(2 + n_cp + 2 * k + 1));
    }

    fit.fitted.resize(n);
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        fit.fitted[i] = fit.predict_at(static_cast<double>(i));
        const double r = series[i] - fit.fitted[i];
        sse += r * r;
    }
    fit.residual_sd = std::sqrt(sse / static_cast<double>(n));
    return fit;
}

Forecast predict_additive(const AdditiveModelFit& fit, int horizon, double level) {
    validate_horizon(horizon);
    const double z = interval_z(level);
    std::vector<double> mean(static_cast<std::size_t>(horizon));
    std::vector<double> width(static_cast<std::size_t>(horizon), z * fit.residual_sd);
    for (int h = 1; h <= horizon; ++h) {
        const double t = static_cast<double>(fit.length - 1 + static_cast<std::size_t>(h));
        mean[static_cast<std::size_t>(h - 1)] = fit.predict_at(t);
    }
    return make_forecast(fit.origin(), level, mean, width);
}

} // namespace stackindex
