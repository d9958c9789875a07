#include "stackindex/holt_winters.hpp"

#include "stackindex/error.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace stackindex {

namespace {

constexpr int kPeriod = HoltWintersFit::kPeriod;
constexpr std::size_t kMinLength = 2 * kPeriod;

struct State {
    double level;
    double trend;
    std::array<double, kPeriod> seasonal;
};

State initial_state(std::span<const double> y) {
    const double first = std::accumulate(y.begin(), y.begin() + kPeriod, 0.0) / kPeriod;
    const double second = std::accumulate(y.begin() + kPeriod, y.begin() + 2 * kPeriod, 0.0) / kPeriod;
    State s{first, (second - first) / kPeriod, {}};
    for (int i = 0; i < kPeriod; ++i) {
        s.seasonal[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] - first;
    }
    const double mean = std::accumulate(s.seasonal.begin(), s.seasonal.end(), 0.0) / kPeriod;
    for (auto& v : s.seasonal) {
        v -= mean;
    }
    return s;
}

// Runs the recursions over the whole series. Returns the one-step SSE and
// leaves the final state in `state`; writes predictions when `fitted` is given.
double run(std::span<const double> y, double alpha, double beta, double gamma, State& state,
           std::vector<double>* fitted) {
    double sse = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        auto& season = state.seasonal[t % kPeriod];
        const double prediction = state.level + state.trend + season;
        const double error = y[t] - prediction;
        sse += error * error;
        if (fitted) {
            (*fitted)[t] = prediction;
        }
        const double level = alpha * (y[t] - season) + (1.0 - alpha) * (state.level + state.trend);
        state.trend = beta * (level - state.level) + (1.0 - beta) * state.trend;
        season = gamma * (y[t] - level) + (1.0 - gamma) * season;
        state.level = level;
    }
    return sse;
}

} // namespace

HoltWintersFit fit_holt_winters(const TagSeries& series) {
    const auto y = series.values();
    if (y.size() < kMinLength) {
        throw Error(ErrorCode::SeriesTooShort, "Holt-Winters needs at least 24 months",
                    {{"length", std::to_string(y.size())}, {"minimum", std::to_string(kMinLength)}});
    }
    const State start = initial_state(y);

    double best = std::numeric_limits<double>::infinity();
    std::array<double, 3> best_params{0.05, 0.05, 0.05};
    for (int a = 1; a <= 19; ++a) {
        for (int b = 1; b <= 19; ++b) {
            for (int g = 1; g <= 19; ++g) {
                State state = start;
                const double sse = run(y, a * 0.05, b * 0.05, g * 0.05, state, nullptr);
                // strict comparison keeps the first minimum in grid order
                if (sse < best) {
                    best = sse;
                    best_params = {a * 0.05, b * 0.05, g * 0.05};
                }
            }
        }
    }

    HoltWintersFit fit;
    fit.alpha = best_params[0];
    fit.beta = best_params[1];
    fit.gamma = best_params[2];
    fit.start = series.start();
    fit.length = y.size();
    fit.fitted.resize(y.size());
    State state = start;
    fit.sse = run(y, fit.alpha, fit.beta, fit.gamma, state, &fit.fitted);
    fit.residual_sd = std::sqrt(fit.sse / static_cast<double>(y.size()));

    // Renormalize so the seasonal indices sum to zero; forecasts are unchanged.
    const double mean = std::accumulate(state.seasonal.begin(), state.seasonal.end(), 0.0) / kPeriod;
    fit.level = state.level + mean;
    fit.trend = state.trend;
    fit.seasonal.assign(state.seasonal.begin(), state.seasonal.end());
    for (auto& v : fit.seasonal) {
        v -= mean;
    }
    return fit;
}

Forecast predict_holt_winters(const HoltWintersFit& fit, int horizon, double level) {
    validate_horizon(horizon);
    const double z = interval_z(level);
    std::vector<double> mean(static_cast<std::size_t>(horizon));
    std::vector<double> width(static_cast<std::size_t>(horizon));

    // Error-correction form: the classical gamma acts on the error scaled by (1 - alpha).
    const double a = fit.alpha;
    const double b = fit.alpha * fit.beta;
    const double g = fit.gamma * (1.0 - fit.alpha);
    double variance_factor = 1.0;
    for (int h = 1; h <= horizon; ++h) {
        const auto slot = (fit.length + static_cast<std::size_t>(h) - 1) % kPeriod;
        mean[static_cast<std::size_t>(h - 1)] = fit.level + h * fit.trend + fit.seasonal[slot];
        width[static_cast<std::size_t>(h - 1)] = z * fit.residual_sd * std::sqrt(variance_factor);
        const double c = a + b * h + ((h % kPeriod == 0) ? g : 0.0);
        variance_factor += c * c;
    }
    return make_forecast(fit.origin(), level, mean, width);
}

} // namespace stackindex
