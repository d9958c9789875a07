#include "stackindex/month.hpp"

#include "stackindex/error.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace stackindex {

namespace {

bool valid(int year, int month) noexcept {
    return year >= MonthStamp::kMinYear && year <= MonthStamp::kMaxYear && month >= 1 && month <= 12;
}

std::optional<int> parse_digits(std::string_view text, std::size_t width) noexcept {
    if (text.size() != width) {
        return std::nullopt;
    }
    for (char c : text) {
        if (c < '0' || c > '9') {
            return std::nullopt;
        }
    }
    int value = 0;
    std::from_chars(text.data(), text.data() + text.size(), value);
    return value;
}

} // namespace

MonthStamp::MonthStamp(int year, int month) : year_(year), month_(month) {
    if (!valid(year, month)) {
        throw Error(ErrorCode::InvalidArgument,
                    "month out of range: " + std::to_string(year) + "-" + std::to_string(month));
    }
}

std::optional<MonthStamp> MonthStamp::parse(std::string_view text) noexcept {
    if (text.size() != 7 && text.size() != 10) {
        return std::nullopt;
    }
    if (text[4] != '-') {
        return std::nullopt;
    }
    auto year = parse_digits(text.substr(0, 4), 4);
    auto month = parse_digits(text.substr(5, 2), 2);
    if (!year || !month || !valid(*year, *month)) {
        return std::nullopt;
    }
    if (text.size() == 10) {
        if (text[7] != '-') {
            return std::nullopt;
        }
        auto day = parse_digits(text.substr(8, 2), 2);
        if (!day) {
            return std::nullopt;
        }
        using namespace std::chrono;
        year_month_day ymd{std::chrono::year{*year}, std::chrono::month{static_cast<unsigned>(*month)},
                           std::chrono::day{static_cast<unsigned>(*day)}};
        if (!ymd.ok()) {
            return std::nullopt;
        }
    }
    return MonthStamp(*year, *month);
}

MonthStamp MonthStamp::from_index(int index) {
    int year = index / 12;
    int month = index % 12 + 1;
    if (index < 0) {
        year = -1;
    }
    return MonthStamp(year, month);
}

std::string MonthStamp::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year_, month_);
    return buf;
}

long long MonthStamp::epoch_seconds() const {
    using namespace std::chrono;
    sys_days day{std::chrono::year{year_} / std::chrono::month{static_cast<unsigned>(month_)} / 1};
    return duration_cast<seconds>(day.time_since_epoch()).count();
}

} // namespace stackindex
