#include "stackindex/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace stackindex {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

double safe(double v) {
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
}

} // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> start,
                             const NelderMeadOptions& options) {
    const std::size_t dim = start.size();
    NelderMeadResult result;
    int evaluations = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evaluations;
        return safe(objective(x));
    };

    if (dim == 0) {
        result.value = eval(start);
        result.evaluations = evaluations;
        result.converged = true;
        return result;
    }

    std::vector<std::vector<double>> simplex(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i) {
        simplex[i + 1][i] += options.initial_step;
    }
    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) {
        values[i] = eval(simplex[i]);
    }

    std::vector<std::size_t> order(dim + 1);
    auto spread = [&] {
        double s = 0.0;
        for (std::size_t i = 1; i <= dim; ++i) {
            for (std::size_t k = 0; k < dim; ++k) {
                s = std::max(s, std::abs(simplex[order[i]][k] - simplex[order[0]][k]));
            }
        }
        return s;
    };

    std::vector<double> centroid(dim), trial(dim), second(dim);
    auto along = [&](double coefficient, const std::vector<double>& worst, std::vector<double>& out) {
        for (std::size_t k = 0; k < dim; ++k) {
            out[k] = centroid[k] + coefficient * (centroid[k] - worst[k]);
        }
    };

    while (true) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
        result.spread = spread();
        if (result.spread <= options.tolerance) {
            result.converged = true;
            break;
        }
        if (evaluations >= options.max_evaluations) {
            break;
        }

        const auto best = order.front();
        const auto worst = order.back();
        const auto next_worst = order[dim - 1];
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t k = 0; k < dim; ++k) {
                centroid[k] += simplex[order[i]][k];
            }
        }
        for (auto& c : centroid) {
            c /= static_cast<double>(dim);
        }

        along(kReflect, simplex[worst], trial);
        const double reflected = eval(trial);
        if (reflected < values[best]) {
            along(kExpand, simplex[worst], second);
            const double expanded = eval(second);
            if (expanded < reflected) {
                simplex[worst] = second;
                values[worst] = expanded;
            } else {
                simplex[worst] = trial;
                values[worst] = reflected;
            }
            continue;
        }
        if (reflected < values[next_worst]) {
            simplex[worst] = trial;
            values[worst] = reflected;
            continue;
        }
        const bool outside = reflected < values[worst];
        along(outside ? kContract : -kContract, simplex[worst], second);
        const double contracted = eval(second);
        if (contracted < (outside ? reflected : values[worst])) {
            simplex[worst] = second;
            values[worst] = contracted;
            continue;
        }
        for (std::size_t i = 1; i <= dim; ++i) {
            auto& vertex = simplex[order[i]];
            for (std::size_t k = 0; k < dim; ++k) {
                vertex[k] = simplex[best][k] + kShrink * (vertex[k] - simplex[best][k]);
            }
            values[order[i]] = eval(vertex);
        }
    }

    result.x = simplex[order.front()];
    result.value = values[order.front()];
    result.evaluations = evaluations;
    return result;
}

} // namespace stackindex
