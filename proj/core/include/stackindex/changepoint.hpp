#pragma once

#include "stackindex/dataset.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace stackindex {

enum class Direction { Up, Down };

std::string_view to_string(Direction direction) noexcept;

/// A month where the series mean shifts: the first month of the new regime.
struct ChangePoint {
    MonthStamp month;
    /// Share of permutations of the segment whose CUSUM peak is below the observed one.
    double confidence;
    Direction direction;
    double pre_mean;
    double post_mean;
};

struct ChangePointOptions {
    double min_confidence = 0.95;
    int max_points = 3;
    int permutations = 1000;
    std::uint64_t seed = 42;
    /// No change point is placed within this many months of either series end.
    int guard_band = 6;
    /// Segments shorter than this are not split further.
    int min_segment = 12;
};

/// CUSUM level-shift detection with a permutation test, applied by binary
/// segmentation. Results are sorted by month.
///
/// Throws SeriesTooShort below 24 points and InvalidArgument when
/// min_confidence is outside [0.5, 1) or max_points < 1.
std::vector<ChangePoint> detect_changepoints(const TagSeries& series, const ChangePointOptions& options);

std::vector<ChangePoint> detect_changepoints(const TagSeries& series, double min_confidence = 0.95,
                                             int max_points = 3);

/// Highest-confidence point, ties going to the larger mean shift. Requires a nonempty list.
const ChangePoint& strongest(const std::vector<ChangePoint>& points);

} // namespace stackindex
