#include "stackindex/changepoint.hpp"

#include "stackindex/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

namespace stackindex {

namespace {

constexpr std::size_t kMinLength = 24;

struct Segment {
    std::size_t lo;
    std::size_t hi; // exclusive
};

struct Peak {
    double value = 0.0;
    std::size_t split = 0; // first index of the post-change regime
};

// Max |S_k| over admissible splits, S_k = sum_{i<=k} (x_i - mean), split = k + 1.
Peak cusum_peak(std::span<const double> x, std::size_t first_split, std::size_t last_split) {
    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= static_cast<double>(x.size());
    Peak peak;
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        s += x[k] - mean;
        const std::size_t split = k + 1;
        if (split < first_split || split > last_split) {
            continue;
        }
        if (std::abs(s) > peak.value || peak.split == 0) {
            peak.value = std::abs(s);
            peak.split = split;
        }
    }
    return peak;
}

// Fisher-Yates with a fixed engine so permutations do not depend on the
// standard library's distribution implementation.
void permute(std::vector<double>& values, std::mt19937_64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng() % i);
        std::swap(values[i - 1], values[j]);
    }
}

double mean_of(std::span<const double> x) {
    double sum = 0.0;
    for (double v : x) {
        sum += v;
    }
    return sum / static_cast<double>(x.size());
}

} // namespace

std::string_view to_string(Direction direction) noexcept {
    return direction == Direction::Up ? "up" : "down";
}

std::vector<ChangePoint> detect_changepoints(const TagSeries& series, const ChangePointOptions& options) {
    const auto x = series.values();
    const std::size_t n = x.size();
    if (n < kMinLength) {
        throw Error(ErrorCode::SeriesTooShort, "change-point detection needs at least 24 months",
                    {{"length", std::to_string(n)}, {"minimum", std::to_string(kMinLength)}});
    }
    if (!(options.min_confidence >= 0.5 && options.min_confidence < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "min_confidence must lie in [0.5, 1)",
                    {{"min_confidence", format_number(options.min_confidence)}});
    }
    if (options.max_points < 1) {
        throw Error(ErrorCode::InvalidArgument, "max_points must be at least 1",
                    {{"max_points", std::to_string(options.max_points)}});
    }
    if (options.permutations < 1 || options.guard_band < 1 || options.min_segment < 2) {
        throw Error(ErrorCode::InvalidArgument, "invalid change-point detector options");
    }

    const auto guard = static_cast<std::size_t>(options.guard_band);
    const auto min_segment = static_cast<std::size_t>(options.min_segment);
    std::vector<ChangePoint> found;
    std::deque<Segment> pending{{0, n}};
    std::vector<double> scratch;

    while (!pending.empty() && found.size() < static_cast<std::size_t>(options.max_points)) {
        const Segment seg = pending.front();
        pending.pop_front();
        const std::size_t len = seg.hi - seg.lo;
        // admissible splits in segment-local coordinates
        const std::size_t first = std::max<std::size_t>(1, guard > seg.lo ? guard - seg.lo : 0);
        const std::size_t global_last = n - guard;
        if (global_last <= seg.lo) {
            continue;
        }
        const std::size_t last = std::min(len - 1, global_last - seg.lo);
        if (first > last) {
            continue;
        }

        const auto values = x.subspan(seg.lo, len);
        const Peak observed = cusum_peak(values, first, last);
        if (observed.split == 0) {
            continue;
        }

        std::mt19937_64 rng(options.seed);
        scratch.assign(values.begin(), values.end());
        int below = 0;
        for (int i = 0; i < options.permutations; ++i) {
            permute(scratch, rng);
            if (cusum_peak(scratch, first, last).value < observed.value) {
                ++below;
            }
        }
        const double confidence = static_cast<double>(below) / options.permutations;
        if (confidence < options.min_confidence) {
            continue;
        }

        const double pre = mean_of(values.subspan(0, observed.split));
        const double post = mean_of(values.subspan(observed.split));
        const std::size_t split = seg.lo + observed.split;
        found.push_back({series.month_at(split), confidence, post > pre ? Direction::Up : Direction::Down, pre,
                         post});
        if (split - seg.lo >= min_segment) {
            pending.push_back({seg.lo, split});
        }
        if (seg.hi - split >= min_segment) {
            pending.push_back({split, seg.hi});
        }
    }

    std::sort(found.begin(), found.end(), [](const ChangePoint& a, const ChangePoint& b) { return a.month < b.month; });
    return found;
}

std::vector<ChangePoint> detect_changepoints(const TagSeries& series, double min_confidence, int max_points) {
    ChangePointOptions options;
    options.min_confidence = min_confidence;
    options.max_points = max_points;
    return detect_changepoints(series, options);
}

const ChangePoint& strongest(const std::vector<ChangePoint>& points) {
    if (points.empty()) {
        throw Error(ErrorCode::EmptyInput, "no change points to rank");
    }
    return *std::max_element(points.begin(), points.end(), [](const ChangePoint& a, const ChangePoint& b) {
        if (a.confidence != b.confidence) {
            return a.confidence < b.confidence;
        }
        return std::abs(a.post_mean - a.pre_mean) < std::abs(b.post_mean - b.pre_mean);
    });
}

} // namespace stackindex
