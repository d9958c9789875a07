#include "stackindex/sarima.hpp"

#include "stackindex/error.hpp"
#include "stackindex/nelder_mead.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace stackindex {

namespace {

constexpr int kSeason = SarimaOrder::kSeasonalPeriod;
constexpr int kMaxEvaluations = 2000;
constexpr double kTolerance = 1e-6;

using Poly = std::vector<double>; // coefficients of B^0, B^1, ...

Poly multiply(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

// 1 + sign * sum c_i B^{i * lag}
Poly lag_poly(const std::vector<double>& coefficients, int lag, double sign) {
    Poly out(coefficients.size() * static_cast<std::size_t>(lag) + 1, 0.0);
    out[0] = 1.0;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        out[(i + 1) * static_cast<std::size_t>(lag)] = sign * coefficients[i];
    }
    return out;
}

Poly differencing_poly(int d, int D) {
    Poly out{1.0};
    for (int i = 0; i < d; ++i) {
        out = multiply(out, Poly{1.0, -1.0});
    }
    for (int i = 0; i < D; ++i) {
        Poly seasonal(kSeason + 1, 0.0);
        seasonal[0] = 1.0;
        seasonal[kSeason] = -1.0;
        out = multiply(out, seasonal);
    }
    return out;
}

std::vector<double> difference(std::span<const double> y, int d, int D) {
    std::vector<double> w(y.begin(), y.end());
    for (int i = 0; i < d; ++i) {
        for (std::size_t t = w.size() - 1; t >= 1; --t) {
            w[t] -= w[t - 1];
        }
        w.erase(w.begin());
    }
    for (int i = 0; i < D; ++i) {
        for (std::size_t t = w.size() - 1; t >= kSeason; --t) {
            w[t] -= w[t - kSeason];
        }
        w.erase(w.begin(), w.begin() + kSeason);
    }
    return w;
}

struct Coefficients {
    std::vector<double> ar, ma, sar, sma;
};

Coefficients unpack(std::span<const double> x, const SarimaOrder& o) {
    Coefficients c;
    auto it = x.begin();
    c.ar.assign(it, it + o.p);
    it += o.p;
    c.ma.assign(it, it + o.q);
    it += o.q;
    c.sar.assign(it, it + o.P);
    it += o.P;
    c.sma.assign(it, it + o.Q);
    return c;
}

// Expanded polynomials written as x_t = sum ar[k] x_{t-k} + e_t + sum ma[k] e_{t-k},
// indexed from lag 1 (element 0 unused).
struct Expanded {
    Poly ar;
    Poly ma;
};

Expanded expand(const Coefficients& c) {
    Poly ar = multiply(lag_poly(c.ar, 1, -1.0), lag_poly(c.sar, kSeason, -1.0));
    for (auto& v : ar) {
        v = -v;
    }
    Poly ma = multiply(lag_poly(c.ma, 1, 1.0), lag_poly(c.sma, kSeason, 1.0));
    return {std::move(ar), std::move(ma)};
}

// e = L(x): one-step residuals of the ARMA filter conditioned on zero
// pre-sample errors, starting once all AR lags are available.
void filter(std::span<const double> x, const Expanded& poly, std::size_t start, std::vector<double>& e) {
    e.assign(x.size(), 0.0);
    for (std::size_t t = start; t < x.size(); ++t) {
        double v = x[t];
        for (std::size_t k = 1; k < poly.ar.size(); ++k) {
            v -= poly.ar[k] * x[t - k];
        }
        for (std::size_t k = 1; k < poly.ma.size() && k <= t; ++k) {
            v -= poly.ma[k] * e[t - k];
        }
        e[t] = v;
    }
}

struct Evaluation {
    double css;
    double mean;
};

class CssProblem {
public:
    CssProblem(std::vector<double> w, SarimaOrder order, bool has_mean)
        : w_(std::move(w)), ones_(w_.size(), 1.0), order_(order), has_mean_(has_mean),
          start_(static_cast<std::size_t>(order.p + kSeason * order.P)) {}

    std::size_t start() const { return start_; }

    // The residuals are affine in the mean: e(mu) = L(w) - mu * L(1), so the
    // CSS-optimal mean for fixed ARMA coefficients has a closed form.
    Evaluation evaluate(std::span<const double> x, std::vector<double>* residuals = nullptr) const {
        const auto poly = expand(unpack(x, order_));
        filter(w_, poly, start_, signal_);
        double mean = 0.0;
        if (has_mean_) {
            filter(ones_, poly, start_, unit_);
            double num = 0.0;
            double den = 0.0;
            for (std::size_t t = start_; t < w_.size(); ++t) {
                num += signal_[t] * unit_[t];
                den += unit_[t] * unit_[t];
            }
            if (den > 0.0 && std::isfinite(num / den)) {
                mean = num / den;
            } else {
                // AR side sums to one: the mean is not identified by the residuals
                mean = std::accumulate(w_.begin(), w_.end(), 0.0) / static_cast<double>(w_.size());
            }
        }
        double css = 0.0;
        for (std::size_t t = start_; t < w_.size(); ++t) {
            const double e = has_mean_ ? signal_[t] - mean * unit_[t] : signal_[t];
            signal_[t] = e;
            css += e * e;
        }
        if (residuals) {
            *residuals = signal_;
        }
        if (!std::isfinite(css)) {
            css = std::numeric_limits<double>::max();
        }
        return {css, mean};
    }

private:
    std::vector<double> w_;
    std::vector<double> ones_;
    SarimaOrder order_;
    bool has_mean_;
    std::size_t start_;
    mutable std::vector<double> signal_;
    mutable std::vector<double> unit_;
};

int parameter_count(const SarimaOrder& o) {
    return o.p + o.q + o.P + o.Q;
}

} // namespace

void SarimaOrder::validate() const {
    auto bad = [&](const std::string& why) {
        throw Error(ErrorCode::InvalidOrder, "invalid SARIMA order " + to_string() + ": " + why,
                    {{"order", to_string()}});
    };
    for (int v : {p, d, q, P, D, Q}) {
        if (v < 0) {
            bad("orders must be non-negative");
        }
    }
    if (p > 3 || q > 3 || P > 3 || Q > 3) {
        bad("p, q, P, Q must not exceed 3");
    }
    if (d + D > 3) {
        bad("d + D must not exceed 3");
    }
}

std::string SarimaOrder::to_string() const {
    return "(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")(" + std::to_string(P) +
           "," + std::to_string(D) + "," + std::to_string(Q) + ")12";
}

SarimaFit fit_sarima(const TagSeries& series, const SarimaOrder& order) {
    order.validate();
    const auto y = series.values();
    const std::size_t lost = static_cast<std::size_t>(order.d + kSeason * order.D);
    const std::size_t needed = static_cast<std::size_t>(10 + parameter_count(order));
    if (y.size() < lost + needed) {
        throw Error(ErrorCode::SeriesTooShort,
                    "SARIMA " + order.to_string() + " needs at least " + std::to_string(lost + needed) + " months",
                    {{"length", std::to_string(y.size())}, {"minimum", std::to_string(lost + needed)}});
    }
    auto w = difference(y, order.d, order.D);
    if (w.size() <= static_cast<std::size_t>(order.p + kSeason * order.P)) {
        throw Error(ErrorCode::SeriesTooShort, "differenced series is shorter than the AR lag span",
                    {{"length", std::to_string(y.size())}});
    }

    const double w_mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
    double w_scale = 0.0;
    for (double v : w) {
        w_scale = std::max(w_scale, std::abs(v));
    }
    const bool has_mean = (order.d + order.D == 0) || std::abs(w_mean) > 1e-12 * (1.0 + w_scale);

    CssProblem problem(w, order, has_mean);
    auto objective = [&](std::span<const double> x) { return problem.evaluate(x).css; };
    NelderMeadOptions options;
    options.max_evaluations = kMaxEvaluations;
    options.tolerance = kTolerance;
    auto best = nelder_mead(objective, std::vector<double>(static_cast<std::size_t>(parameter_count(order)), 0.0),
                            options);

    SarimaFit fit;
    fit.order = order;
    const auto coefficients = unpack(best.x, order);
    fit.ar = coefficients.ar;
    fit.ma = coefficients.ma;
    fit.seasonal_ar = coefficients.sar;
    fit.seasonal_ma = coefficients.sma;
    fit.has_mean = has_mean;
    const auto final_eval = problem.evaluate(best.x, &fit.residuals);
    fit.mean = final_eval.mean;
    fit.css = final_eval.css;
    fit.effective_n = w.size() - problem.start();
    const double sigma2 = fit.css / static_cast<double>(fit.effective_n);
    fit.residual_sd = std::sqrt(sigma2);
    const int k = parameter_count(order) + (has_mean ? 1 : 0) + 1;
    fit.aic = static_cast<double>(fit.effective_n) * std::log(std::max(sigma2, 1e-300)) + 2.0 * k;
    fit.converged = best.converged;
    fit.evaluations = best.evaluations;
    fit.start = series.start();
    fit.history.assign(y.begin(), y.end());
    return fit;
}

SarimaFit fit_sarima_auto(const TagSeries& series, int d, int D) {
    std::optional<SarimaFit> best;
    std::optional<Error> first_error;
    for (int p = 0; p <= 1; ++p) {
        for (int q = 0; q <= 1; ++q) {
            for (int P = 0; P <= 1; ++P) {
                for (int Q = 0; Q <= 1; ++Q) {
                    try {
                        auto fit = fit_sarima(series, SarimaOrder{p, d, q, P, D, Q});
                        if (!best || fit.aic < best->aic) {
                            best = std::move(fit);
                        }
                    } catch (const Error& e) {
                        if (!first_error) {
                            first_error = e;
                        }
                    }
                }
            }
        }
    }
    if (!best) {
        throw *first_error;
    }
    return std::move(*best);
}

std::vector<double> sarima_psi_weights(const SarimaFit& fit, std::size_t count) {
    const auto poly = expand({fit.ar, fit.ma, fit.seasonal_ar, fit.seasonal_ma});
    // Full AR side including differencing: phi(B) Phi(B^s) (1-B)^d (1-B^s)^D.
    Poly ar_side(poly.ar.size(), 0.0);
    ar_side[0] = 1.0;
    for (std::size_t k = 1; k < poly.ar.size(); ++k) {
        ar_side[k] = -poly.ar[k];
    }
    const Poly full = multiply(ar_side, differencing_poly(fit.order.d, fit.order.D));

    std::vector<double> psi(count, 0.0);
    for (std::size_t j = 0; j < count; ++j) {
        double v = (j == 0) ? 1.0 : (j < poly.ma.size() ? poly.ma[j] : 0.0);
        for (std::size_t k = 1; k <= j && k < full.size(); ++k) {
            v -= full[k] * psi[j - k];
        }
        psi[j] = v;
    }
    return psi;
}

Forecast predict_sarima(const SarimaFit& fit, int horizon, double level) {
    validate_horizon(horizon);
    const double z = interval_z(level);
    const auto H = static_cast<std::size_t>(horizon);
    const auto& o = fit.order;

    auto w = difference(fit.history, o.d, o.D);
    auto e = fit.residuals;
    const std::size_t nw = w.size();
    const auto poly = expand({fit.ar, fit.ma, fit.seasonal_ar, fit.seasonal_ma});
    w.resize(nw + H, 0.0);
    e.resize(nw + H, 0.0);
    for (std::size_t t = nw; t < nw + H; ++t) {
        double v = fit.mean;
        for (std::size_t k = 1; k < poly.ar.size(); ++k) {
            v += poly.ar[k] * (w[t - k] - fit.mean);
        }
        for (std::size_t k = 1; k < poly.ma.size(); ++k) {
            v += poly.ma[k] * e[t - k];
        }
        w[t] = v;
    }

    // Undo differencing: y_t = w_t - sum_{k>=1} delta_k y_{t-k}.
    const Poly delta = differencing_poly(o.d, o.D);
    std::vector<double> y = fit.history;
    const std::size_t n = y.size();
    const std::size_t lost = n - nw;
    y.resize(n + H, 0.0);
    for (std::size_t t = n; t < n + H; ++t) {
        double v = w[t - lost];
        for (std::size_t k = 1; k < delta.size(); ++k) {
            v -= delta[k] * y[t - k];
        }
        y[t] = v;
    }

    const auto psi = sarima_psi_weights(fit, H);
    std::vector<double> mean(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
    std::vector<double> width(H);
    double cumulative = 0.0;
    for (std::size_t h = 0; h < H; ++h) {
        cumulative += psi[h] * psi[h];
        width[h] = z * fit.residual_sd * std::sqrt(cumulative);
    }
    return make_forecast(fit.origin(), level, mean, width);
}

} // namespace stackindex
