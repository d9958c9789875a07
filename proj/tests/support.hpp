#pragma once

#include "stackindex/dataset.hpp"
#include "stackindex/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace stackindex::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
    return std::filesystem::path(STACKINDEX_FIXTURES_DIR) / name;
}

inline TagSeries make_series(std::vector<double> values, const std::string& tag = "t",
                             MonthStamp start = MonthStamp{2010, 1}) {
    return TagSeries(tag, start, std::move(values));
}

/// level + slope * t + amplitude * sin(2 pi t / 12) + N(0, noise)
inline std::vector<double> trend_season_noise(std::size_t n, double level, double slope, double amplitude,
                                              double noise, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> eps(0.0, noise);
    std::vector<double> y(n);
    for (std::size_t t = 0; t < n; ++t) {
        y[t] = level + slope * static_cast<double>(t) +
               amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 12.0) + eps(rng);
    }
    return y;
}

/// Dense least squares by normal equations in long double with Gauss-Jordan
/// elimination and partial pivoting. Independent of the library's QR path.
inline std::vector<double> ols(const std::vector<std::vector<double>>& rows, const std::vector<double>& y) {
    const std::size_t p = rows.front().size();
    std::vector<std::vector<long double>> a(p, std::vector<long double>(p + 1, 0.0L));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t r = 0; r < p; ++r) {
            for (std::size_t c = 0; c < p; ++c) {
                a[r][c] += static_cast<long double>(rows[i][r]) * rows[i][c];
            }
            a[r][p] += static_cast<long double>(rows[i][r]) * y[i];
        }
    }
    for (std::size_t col = 0; col < p; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < p; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        for (std::size_t r = 0; r < p; ++r) {
            if (r == col) continue;
            const long double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= p; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> beta(p);
    for (std::size_t r = 0; r < p; ++r) beta[r] = static_cast<double>(a[r][p] / a[r][r]);
    return beta;
}

/// Lag-1 Yule-Walker estimate of an AR(1) coefficient.
inline double yule_walker_ar1(const std::vector<double>& x) {
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

#define EXPECT_ERROR_CODE(stmt, expected)                                                                  \
    do {                                                                                                   \
        try {                                                                                              \
            stmt;                                                                                          \
            ADD_FAILURE() << "expected " << ::stackindex::to_string(expected) << ", nothing thrown";      \
        } catch (const ::stackindex::Error& e_) {                                                          \
            EXPECT_EQ(e_.code(), expected) << ::stackindex::to_string(e_.code()) << ": " << e_.what();      \
        }                                                                                                  \
    } while (0)

} // namespace stackindex::testing
