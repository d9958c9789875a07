#pragma once

#include <functional>
#include <span>
#include <vector>

namespace stackindex {

struct NelderMeadOptions {
    int max_evaluations = 2000;
    /// Converged once every vertex lies within this infinity-norm distance of the best one.
    double tolerance = 1e-6;
    double initial_step = 0.1;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
    double spread = 0.0;
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free simplex minimization. Deterministic: the initial simplex is
/// `start` plus `initial_step` along each coordinate axis.
NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> start,
                             const NelderMeadOptions& options = {});

} // namespace stackindex
