#pragma once

#include "stackindex/dataset.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace stackindex::bench {

inline TagSeries synthetic(std::size_t n, std::uint64_t seed = 1, std::string tag = "bench") {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> eps(0.0, 25.0);
    std::vector<double> y(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double step = t >= n / 2 ? 400.0 : 0.0;
        y[t] = std::max(0.0, 1000.0 + 6.0 * static_cast<double>(t) + step +
                                 80.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 12.0) + eps(rng));
    }
    return TagSeries(std::move(tag), MonthStamp(2009, 1), std::move(y));
}

} // namespace stackindex::bench
