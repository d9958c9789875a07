#pragma once

#include "stackindex/month.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stackindex {

/// How missing cells were filled when a series was extracted from a Dataset.
enum class FillPolicy {
    None,                  ///< every month was observed
    LinearInteriorNearestEdge, ///< interior gaps interpolated, leading/trailing gaps copy the nearest observation
};

std::string_view to_string(FillPolicy policy) noexcept;

/// One technology's monthly question counts over consecutive months.
///
/// Values are finite and non-negative. Zero is an observation, never a
/// placeholder for missing data.
class TagSeries {
public:
    TagSeries(std::string tag, MonthStamp start, std::vector<double> values,
              FillPolicy fill = FillPolicy::None, std::vector<std::size_t> filled = {});

    const std::string& tag() const noexcept { return tag_; }
    MonthStamp start() const noexcept { return start_; }
    /// Last month; only meaningful when the series is nonempty.
    MonthStamp end() const { return start_.plus(static_cast<int>(values_.size()) - 1); }
    MonthStamp month_at(std::size_t i) const { return start_.plus(static_cast<int>(i)); }

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    FillPolicy fill_policy() const noexcept { return fill_; }
    /// Indices (into values()) that were filled rather than observed.
    std::span<const std::size_t> filled() const noexcept { return filled_; }

    /// First `count` points; fill bookkeeping is carried over.
    TagSeries head(std::size_t count) const;
    /// Points whose month lies in [from, to] (inclusive, clipped to the series).
    TagSeries slice(MonthStamp from, MonthStamp to) const;

private:
    std::string tag_;
    MonthStamp start_;
    std::vector<double> values_;
    FillPolicy fill_;
    std::vector<std::size_t> filled_;
};

/// Month x tag matrix of question counts with an explicit missing-cell mask.
///
/// Immutable once constructed; months are contiguous and ascending.
class Dataset {
public:
    /// `values` and `missing` are row-major (rows = months, columns = tags).
    /// Throws on shape mismatch, negative/non-finite counts, empty or duplicate tags.
    Dataset(MonthStamp first_month, std::vector<std::string> tags, std::vector<double> values,
            std::vector<bool> missing);

    std::size_t month_count() const noexcept { return rows_; }
    std::size_t tag_count() const noexcept { return tags_.size(); }
    MonthStamp first_month() const noexcept { return first_; }
    MonthStamp last_month() const { return first_.plus(static_cast<int>(rows_) - 1); }
    MonthStamp month(std::size_t row) const { return first_.plus(static_cast<int>(row)); }

    const std::vector<std::string>& tags() const noexcept { return tags_; }

    bool is_missing(std::size_t row, std::size_t col) const { return missing_[row * tags_.size() + col]; }
    /// Raw stored cell; 0 for missing cells (check is_missing first).
    double cell(std::size_t row, std::size_t col) const { return values_[row * tags_.size() + col]; }
    std::optional<double> value(std::size_t row, std::size_t col) const;

    /// Column index for `tag`, matched case-insensitively.
    /// Throws NotFound or AmbiguousTag.
    std::size_t find_tag(std::string_view tag) const;

    bool operator==(const Dataset& other) const;

private:
    MonthStamp first_;
    std::size_t rows_;
    std::vector<std::string> tags_;
    std::vector<double> values_;
    std::vector<bool> missing_;
};

/// Parses the month x tag CSV format. Rows may appear in any order; they are
/// sorted and must then cover a contiguous month range.
Dataset parse_dataset(std::string_view csv_text);

/// Canonical CSV: `YYYY-MM` dates, shortest round-trip decimals, empty cells
/// for missing values, `\n` line endings.
std::string serialize_dataset(const Dataset& dataset);

/// Extracts one column, interpolating missing cells.
TagSeries get_series(const Dataset& dataset, std::string_view tag);

/// As get_series, addressed by column index. Throws NoObservations for an
/// all-missing column.
TagSeries column_series(const Dataset& dataset, std::size_t column);

/// Pointwise sum of two or more distinct member series, named `a+b+...`.
TagSeries combine(const Dataset& dataset, std::span<const std::string> tags);

/// Lower-cases ASCII letters; tags are matched with this folding.
std::string fold_case(std::string_view text);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

} // namespace stackindex
