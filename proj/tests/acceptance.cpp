// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.
//   stackindex_acceptance            synthetic and API criteria
//   stackindex_acceptance --corpus   corpus criteria; exit 77 when no corpus is cached

#include "golden_cases.hpp"

#include "stackindex/changepoint.hpp"
#include "stackindex/evaluation.hpp"
#include "stackindex/models.hpp"
#include "stackindex/service.hpp"
#include "stackindex/storage.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace stackindex;
using nlohmann::json;

namespace {

constexpr int kSkip = 77;

struct Failure {
    std::string what;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure{what};
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
}

bool criterion(const std::string& name, double limit_seconds, const std::function<std::string()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
        detail = body();
    } catch (const Failure& f) {
        ok = false;
        detail = f.what;
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && elapsed >= limit_seconds) {
        ok = false;
        detail += "; over time limit";
    }
    std::ostringstream line;
    line.precision(3);
    line << std::fixed << (ok ? "PASS " : "FAIL ") << name << " (" << elapsed << " s, limit " << limit_seconds
         << " s): " << detail;
    std::cout << line.str() << std::endl;
    return ok;
}

TagSeries series_of(std::vector<double> y, MonthStamp start = MonthStamp(2010, 1)) {
    return TagSeries("synthetic", start, std::move(y));
}

std::vector<double> trend_season_noise(std::size_t n, double level, double slope, double amplitude, double noise,
                                       std::mt19937_64& rng) {
    std::normal_distribution<double> eps(0.0, noise);
    std::vector<double> y(n);
    for (std::size_t t = 0; t < n; ++t) {
        y[t] = level + slope * static_cast<double>(t) +
               amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 12.0) + eps(rng);
    }
    return y;
}

// ------------------------------------------------------------------ criteria

std::string metric_identities() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> value(0, 2e6);
    std::lognormal_distribution<double> scale(0, 5);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng() % 132;
        std::vector<double> actual(n), predicted(n);
        const double s = scale(rng);
        for (std::size_t i = 0; i < n; ++i) {
            actual[i] = value(rng);
            predicted[i] = actual[i] + s * (value(rng) / 1e6 - 1.0);
        }
        const auto m = compute_metrics(actual, predicted);
        require(m.rmse * m.rmse == m.mse, "rmse^2 != mse at trial " + std::to_string(trial));
        require(m.mae <= m.rmse, "mae > rmse at trial " + std::to_string(trial));
    }
    const std::vector<double> actual{1767566}, predicted{1721483};
    const auto m = compute_metrics(actual, predicted);
    require(m.cumulative_abs_error == 46083, "cumulative_abs_error " + fmt(m.cumulative_abs_error));
    require(m.cumulative_rel_error && std::fabs(*m.cumulative_rel_error - 0.0261) <= 1e-4,
            "cumulative_rel_error " + (m.cumulative_rel_error ? fmt(*m.cumulative_rel_error) : "null"));
    return "1000 vectors; holdout pair abs 46083, rel " + fmt(*m.cumulative_rel_error);
}

std::string exactly_learnable() {
    std::vector<double> line(120);
    for (std::size_t t = 0; t < line.size(); ++t) line[t] = 2.0 * static_cast<double>(t) + 1.0;
    const auto additive = fit_additive(series_of(line));
    require(std::fabs(additive.slope - 2) <= 1e-6 && std::fabs(additive.intercept - 1) <= 1e-6,
            "additive slope " + fmt(additive.slope) + " intercept " + fmt(additive.intercept));

    const auto hw = predict_holt_winters(fit_holt_winters(series_of(std::vector<double>(60, 42.0))), 24, 0.8);
    for (const auto& p : hw.points()) require(std::fabs(p.yhat - 42.0) <= 1e-6, "holt-winters " + fmt(p.yhat));

    std::vector<double> ramp(60);
    for (std::size_t t = 0; t < ramp.size(); ++t) ramp[t] = static_cast<double>(t);
    const auto sarima = predict_sarima(fit_sarima(series_of(ramp), SarimaOrder{0, 1, 0, 0, 0, 0}), 24, 0.8);
    for (std::size_t h = 0; h < sarima.points().size(); ++h) {
        const double expected = 60.0 + static_cast<double>(h);
        require(std::fabs(sarima.points()[h].yhat - expected) <= 1e-9,
                "sarima step " + std::to_string(h + 1) + ": " + fmt(sarima.points()[h].yhat));
    }
    return "additive 2t+1, constant holt-winters, sarima(0,1,0) ramp";
}

// Normal equations for [1, t] solved in long double; shares nothing with the library's QR path.
std::pair<double, double> line_ols(const std::vector<double>& y) {
    long double n = 0, st = 0, stt = 0, sy = 0, sty = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const long double t = static_cast<long double>(i);
        n += 1;
        st += t;
        stt += t * t;
        sy += y[i];
        sty += t * y[i];
    }
    const long double det = n * stt - st * st;
    return {static_cast<double>((stt * sy - st * sty) / det), static_cast<double>((n * sty - st * sy) / det)};
}

double yule_walker_ar1(std::span<const double> x) {
    long double mean = 0;
    for (double v : x) mean += v;
    mean /= static_cast<long double>(x.size());
    long double c0 = 0, c1 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        c0 += (x[i] - mean) * (x[i] - mean);
        if (i > 0) c1 += (x[i] - mean) * (x[i - 1] - mean);
    }
    return static_cast<double>(c1 / c0);
}

std::string oracle_equivalence() {
    std::mt19937_64 rng(7001);
    std::uniform_real_distribution<double> level(0, 5000), slope(-20, 60), noise(0.1, 300);
    AdditiveModelConfig plain;
    plain.fourier_order = 0;
    plain.n_changepoints = 0;
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 24 + rng() % 109;
        std::normal_distribution<double> eps(0, noise(rng));
        const double a = level(rng), b = slope(rng);
        std::vector<double> y(n);
        for (std::size_t t = 0; t < n; ++t) y[t] = std::max(0.0, a + b * static_cast<double>(t) + eps(rng));
        const auto fit = fit_additive(series_of(y), plain);
        const auto [intercept, slope_hat] = line_ols(y);
        worst = std::max({worst, std::fabs(fit.intercept - intercept), std::fabs(fit.slope - slope_hat)});
        require(worst <= 1e-8, "series " + std::to_string(trial) + " differs from OLS by " + fmt(worst));
    }

    double worst_phi = 0;
    int fits = 0;
    for (double phi : {-0.6, -0.2, 0.3, 0.6, 0.85}) {
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            std::mt19937_64 g(seed * 131 + static_cast<std::uint64_t>((phi + 1) * 100));
            std::normal_distribution<double> eps(0, 10);
            std::vector<double> x(300 + 200);
            double prev = 0;
            for (auto& v : x) v = prev = phi * prev + eps(g);
            std::vector<double> y(x.begin() + 200, x.end());
            for (auto& v : y) v += 500;
            const auto fit = fit_sarima(series_of(y), SarimaOrder{1, 0, 0, 0, 0, 0});
            const double gap = std::fabs(fit.ar.at(0) - yule_walker_ar1(y));
            worst_phi = std::max(worst_phi, gap);
            ++fits;
            require(gap <= 0.1, "phi " + fmt(phi) + " seed " + std::to_string(seed) + ": css " + fmt(fit.ar[0]) +
                                    " vs yule-walker " + fmt(yule_walker_ar1(y)));
        }
    }
    return "max OLS gap " + fmt(worst) + " over 100 series; max |phi - yw| " + fmt(worst_phi) + " over " +
           std::to_string(fits) + " AR(1) fits";
}

std::string changepoint_correctness() {
    std::vector<double> step(48, 0.0);
    std::fill(step.begin() + 24, step.end(), 100.0);
    const auto start = MonthStamp(2015, 1);
    const auto found = detect_changepoints(series_of(step, start));
    require(!found.empty(), "no change point on the step series");
    const auto& best = strongest(found);
    const int offset = best.month.index() - start.plus(24).index();
    require(std::abs(offset) <= 1, "strongest at " + best.month.to_string());
    require(best.confidence >= 0.99, "confidence " + fmt(best.confidence));
    require(best.direction == Direction::Up, "direction down");

    require(detect_changepoints(series_of(std::vector<double>(48, 37.0))).empty(), "constant series has detections");

    std::mt19937_64 rng(404);
    std::normal_distribution<double> eps(0, 15);
    std::vector<double> noisy(96);
    for (std::size_t t = 0; t < noisy.size(); ++t) noisy[t] = (t < 50 ? 200 : 260) + eps(rng);
    const auto reference = detect_changepoints(series_of(noisy));
    for (int run = 1; run < 200; ++run) {
        const auto again = detect_changepoints(series_of(noisy));
        require(again.size() == reference.size(), "run " + std::to_string(run) + " changed the count");
        for (std::size_t i = 0; i < again.size(); ++i) {
            require(again[i].month == reference[i].month && again[i].confidence == reference[i].confidence,
                    "run " + std::to_string(run) + " changed point " + std::to_string(i));
        }
    }
    return "step found at " + best.month.to_string() + " confidence " + fmt(best.confidence) +
           "; constant none; 200 identical runs";
}

std::string backtest_dominance() {
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> level(200, 5000), slope(-2, 25), amplitude(20, 300), noise(5, 40);
        const double l = level(rng), s = slope(rng), a = amplitude(rng), e = noise(rng);
        const auto y = trend_season_noise(96 + rng() % 37, l, s, a, e, rng);
        const auto report = backtest(series_of(y), ModelSpec{}, 12);
        const std::size_t split = y.size() - 12;
        double naive = 0;
        for (std::size_t i = split; i < y.size(); ++i) naive += (y[i] - y[split - 1]) * (y[i] - y[split - 1]);
        if (report.metrics.rmse < std::sqrt(naive / 12)) ++wins;
    }
    require(wins >= 45, std::to_string(wins) + "/50 wins");
    return std::to_string(wins) + "/50 series beat the naive baseline";
}

std::filesystem::path source_path(const char* dir, const std::string& name) {
    return std::filesystem::path(dir) / name;
}

std::string api_contract() {
    const Api api(open_dataset(source_path(STACKINDEX_FIXTURES_DIR, "sample.csv")));
    int goldens = 0;
    for (const auto& c : testing::golden_cases()) {
        std::ifstream in(source_path(STACKINDEX_GOLDEN_DIR, c.name + ".json"));
        require(static_cast<bool>(in), "missing golden " + c.name);
        const auto response = api.handle(c.method, c.path, c.query, c.body);
        const json recorded{{"status", response.status}, {"body", response.body}};
        const auto mismatch = testing::json_mismatch(recorded, json::parse(in));
        require(mismatch.empty(), "golden " + c.name + " " + mismatch);
        ++goldens;
    }

    std::vector<json> targets;
    for (const auto& tag : api.dataset().tags()) targets.push_back({{"tags", {tag}}});
    targets.push_back({{"tags", {"keras", "tensorflow", "pytorch"}}, {"combine", true}});
    int responses = 0;
    for (auto request : targets) {
        for (const char* model : {"additive", "holt-winters", "sarima", "ensemble"}) {
            for (int horizon : {1, 2, 6, 12, 18, 24}) {
                for (double level : {0.5, 0.8, 0.95}) {
                    request["model"] = model;
                    request["horizon"] = horizon;
                    request["level"] = level;
                    const auto r = api.handle("POST", "/api/v1/forecast", {}, request.dump());
                    const auto where = request.dump();
                    require(r.status == 200, where + " -> " + r.body.dump());
                    for (const auto& result : r.body.at("results")) {
                        const auto& points = result.at("forecast").at("points");
                        require(points.size() == static_cast<std::size_t>(horizon), where + " wrong length");
                        for (const auto& p : points) {
                            const double lo = p.at("lower"), y = p.at("yhat"), hi = p.at("upper");
                            require(lo <= y && y <= hi, where + " interval order at " + p.at("month").dump());
                        }
                    }
                    ++responses;
                }
            }
        }
    }

    const auto too_far = api.handle("POST", "/api/v1/forecast", {}, R"({"tags":["python"],"horizon":36})");
    require(too_far.status == 422, "horizon 36 gave " + std::to_string(too_far.status));
    require(too_far.body.at("code") == "HorizonTooLarge", "horizon 36 code " + too_far.body.dump());
    return std::to_string(goldens) + " goldens match; " + std::to_string(responses) +
           " forecasts keep lower <= yhat <= upper and length; horizon 36 -> 422";
}

// ------------------------------------------------------------------ corpus

std::filesystem::path corpus_path() {
    for (const char* var : {"STACKINDEX_CORPUS", "STACKINDEX_CORPUS_DEFAULT"}) {
        if (const char* v = std::getenv(var); v && *v && std::filesystem::exists(v)) return v;
    }
    return {};
}

int corpus_mode() {
    const auto path = corpus_path();
    if (path.empty()) {
        std::cout << "SKIP corpus reproduction: no corpus (set STACKINDEX_CORPUS or fetch with `stackindex ingest`)"
                  << std::endl;
        return kSkip;
    }
    const auto ds = open_dataset(path);
    bool ok = true;

    ok &= criterion("corpus: top tag 2009-2019 is python", 60, [&] {
        const MonthStamp from(2009, 1), to(2019, 12);
        std::string best;
        double best_mean = -1;
        for (std::size_t c = 0; c < ds.tag_count(); ++c) {
            double sum = 0;
            int n = 0;
            for (std::size_t r = 0; r < ds.month_count(); ++r) {
                if (ds.month(r) < from || to < ds.month(r) || ds.is_missing(r, c)) continue;
                sum += ds.cell(r, c);
                ++n;
            }
            if (n > 0 && sum / n > best_mean) {
                best_mean = sum / n;
                best = ds.tags()[c];
            }
        }
        require(fold_case(best) == "python", "top tag " + best);
        return best + " mean " + fmt(best_mean);
    });

    ok &= criterion("corpus: keras+tensorflow+pytorch strongest change in 2016-07..2017-12", 60, [&] {
        const std::vector<std::string> tags{"keras", "tensorflow", "pytorch"};
        const auto found = detect_changepoints(combine(ds, tags));
        require(!found.empty(), "no change point");
        const auto month = strongest(found).month;
        require(!(month < MonthStamp(2016, 7)) && !(MonthStamp(2017, 12) < month), "strongest at " + month.to_string());
        return month.to_string();
    });

    ok &= criterion("corpus: 132 months", 1, [&] {
        require(ds.month_count() == 132, std::to_string(ds.month_count()) + " months");
        return std::to_string(ds.month_count()) + " months x " + std::to_string(ds.tag_count()) + " tags";
    });
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1 && std::string(argv[1]) == "--corpus") return corpus_mode();
    if (argc > 1) {
        std::cerr << "usage: stackindex_acceptance [--corpus]\n";
        return 2;
    }
    bool ok = true;
    ok &= criterion("metric identities", 1, metric_identities);
    ok &= criterion("exactly-learnable fixtures", 5, exactly_learnable);
    ok &= criterion("oracle equivalence", 30, oracle_equivalence);
    ok &= criterion("change-point correctness", 60, changepoint_correctness);
    ok &= criterion("backtest dominance", 120, backtest_dominance);
    ok &= criterion("api contract", 120, api_contract);
    return ok ? 0 : 1;
}
