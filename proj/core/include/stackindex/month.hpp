#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace stackindex {

/// A calendar month in the range 2000-01 .. 2100-12.
///
/// Months are totally ordered and support exact integer offset arithmetic
/// through their linear index (year * 12 + month - 1).
class MonthStamp {
public:
    static constexpr int kMinYear = 2000;
    static constexpr int kMaxYear = 2100;

    /// 2000-01.
    constexpr MonthStamp() noexcept = default;
    /// Throws Error(InvalidArgument) when year or month is out of range.
    MonthStamp(int year, int month);

    /// Accepts `YYYY-MM` or `YYYY-MM-DD` (day validated then ignored).
    static std::optional<MonthStamp> parse(std::string_view text) noexcept;
    static MonthStamp from_index(int index);

    int year() const noexcept { return year_; }
    int month() const noexcept { return month_; }
    int index() const noexcept { return year_ * 12 + (month_ - 1); }

    MonthStamp next() const { return plus(1); }
    MonthStamp plus(int months) const { return from_index(index() + months); }

    /// Signed number of months from `other` to this.
    int minus(const MonthStamp& other) const noexcept { return index() - other.index(); }

    /// Canonical `YYYY-MM`.
    std::string to_string() const;

    /// Seconds since the Unix epoch at 00:00:00 UTC on the first day of the month.
    long long epoch_seconds() const;

    friend constexpr auto operator<=>(const MonthStamp&, const MonthStamp&) = default;
    friend constexpr bool operator==(const MonthStamp&, const MonthStamp&) = default;

private:
    int year_ = kMinYear;
    int month_ = 1;
};

} // namespace stackindex
