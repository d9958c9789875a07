#include "stackindex/dataset.hpp"

#include "stackindex/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace stackindex {

std::string_view to_string(FillPolicy policy) noexcept {
    switch (policy) {
    case FillPolicy::None: return "none";
    case FillPolicy::LinearInteriorNearestEdge: return "linear-interior-nearest-edge";
    }
    return "none";
}

std::string fold_case(std::string_view text) {
    std::string out(text);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return out;
}

std::string format_number(double value) {
    char buf[64];
    auto result = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, result.ptr);
}

// ---------------------------------------------------------------------------
// TagSeries

TagSeries::TagSeries(std::string tag, MonthStamp start, std::vector<double> values, FillPolicy fill,
                     std::vector<std::size_t> filled)
    : tag_(std::move(tag)), start_(start), values_(std::move(values)), fill_(fill), filled_(std::move(filled)) {
    if (tag_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "series tag must be nonempty");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw Error(ErrorCode::UnparseableCell, "series value is not finite",
                        {{"tag", tag_}, {"index", std::to_string(i)}});
        }
        if (values_[i] < 0.0) {
            throw Error(ErrorCode::NegativeCount, "series value is negative",
                        {{"tag", tag_}, {"index", std::to_string(i)}});
        }
    }
    if (!values_.empty()) {
        (void)end(); // validates the month range
    }
}

TagSeries TagSeries::head(std::size_t count) const {
    count = std::min(count, values_.size());
    std::vector<std::size_t> kept;
    for (auto i : filled_) {
        if (i < count) {
            kept.push_back(i);
        }
    }
    return TagSeries(tag_, start_, std::vector<double>(values_.begin(), values_.begin() + count), fill_,
                     std::move(kept));
}

TagSeries TagSeries::slice(MonthStamp from, MonthStamp to) const {
    int n = static_cast<int>(values_.size());
    int lo = std::clamp(from.minus(start_), 0, n);
    int hi = std::clamp(to.minus(start_) + 1, lo, n);
    std::vector<std::size_t> kept;
    for (auto i : filled_) {
        if (static_cast<int>(i) >= lo && static_cast<int>(i) < hi) {
            kept.push_back(i - lo);
        }
    }
    return TagSeries(tag_, start_.plus(lo), std::vector<double>(values_.begin() + lo, values_.begin() + hi),
                     fill_, std::move(kept));
}

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(MonthStamp first_month, std::vector<std::string> tags, std::vector<double> values,
                 std::vector<bool> missing)
    : first_(first_month), rows_(0), tags_(std::move(tags)), values_(std::move(values)), missing_(std::move(missing)) {
    if (tags_.empty()) {
        throw Error(ErrorCode::MalformedHeader, "dataset needs at least one tag column");
    }
    if (values_.size() % tags_.size() != 0 || missing_.size() != values_.size()) {
        throw Error(ErrorCode::InvalidArgument, "dataset value matrix does not match its shape");
    }
    rows_ = values_.size() / tags_.size();
    if (rows_ == 0) {
        throw Error(ErrorCode::EmptyDataset, "dataset has no month rows");
    }
    (void)last_month();
    std::set<std::string_view> seen;
    for (const auto& tag : tags_) {
        if (tag.empty()) {
            throw Error(ErrorCode::MalformedHeader, "empty tag name in header");
        }
        if (!seen.insert(tag).second) {
            throw Error(ErrorCode::DuplicateTag, "duplicate tag column '" + tag + "'", {{"tag", tag}});
        }
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (missing_[i]) {
            values_[i] = 0.0;
            continue;
        }
        auto row = std::to_string(i / tags_.size());
        auto col = tags_[i % tags_.size()];
        if (!std::isfinite(values_[i])) {
            throw Error(ErrorCode::UnparseableCell, "non-finite count", {{"row", row}, {"tag", col}});
        }
        if (values_[i] < 0.0) {
            throw Error(ErrorCode::NegativeCount, "negative count", {{"row", row}, {"tag", col}});
        }
    }
}

std::optional<double> Dataset::value(std::size_t row, std::size_t col) const {
    if (is_missing(row, col)) {
        return std::nullopt;
    }
    return cell(row, col);
}

std::size_t Dataset::find_tag(std::string_view tag) const {
    const auto wanted = fold_case(tag);
    std::optional<std::size_t> hit;
    for (std::size_t c = 0; c < tags_.size(); ++c) {
        if (fold_case(tags_[c]) != wanted) {
            continue;
        }
        if (hit) {
            throw Error(ErrorCode::AmbiguousTag, "tag '" + std::string(tag) + "' matches more than one column",
                        {{"tag", std::string(tag)}, {"first", tags_[*hit]}, {"second", tags_[c]}});
        }
        hit = c;
    }
    if (!hit) {
        throw Error(ErrorCode::NotFound, "unknown tag '" + std::string(tag) + "'", {{"tag", std::string(tag)}});
    }
    return *hit;
}

bool Dataset::operator==(const Dataset& other) const {
    if (first_ != other.first_ || rows_ != other.rows_ || tags_ != other.tags_ || missing_ != other.missing_) {
        return false;
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        // bitwise comparison so that -0.0 and 0.0 are distinguished
        if (std::signbit(values_[i]) != std::signbit(other.values_[i]) || values_[i] != other.values_[i]) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

struct CsvRow {
    std::size_t line;
    std::vector<std::string> cells;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

// RFC 4180 style splitting: quoted cells may contain commas, doubled quotes
// and newlines. Blank lines are skipped.
std::vector<CsvRow> split_csv(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) {
        text.remove_prefix(3);
    }
    std::vector<CsvRow> rows;
    CsvRow row{1, {}};
    std::string cell;
    bool in_quotes = false;
    bool row_has_content = false;
    bool cell_quoted = false;
    std::size_t line = 1;

    auto end_cell = [&] {
        row.cells.push_back(cell_quoted ? cell : std::string(trim(cell)));
        cell.clear();
        cell_quoted = false;
    };
    auto end_row = [&] {
        end_cell();
        if (row_has_content || row.cells.size() > 1 || !row.cells.front().empty()) {
            rows.push_back(std::move(row));
        }
        row = CsvRow{line + 1, {}};
        row_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') {
                    ++line;
                }
                cell.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            cell_quoted = true;
            row_has_content = true;
            break;
        case ',':
            end_cell();
            row_has_content = true;
            break;
        case '\r':
            break;
        case '\n':
            end_row();
            ++line;
            break;
        default:
            cell.push_back(c);
        }
    }
    if (!cell.empty() || !row.cells.empty() || row_has_content) {
        end_row();
    }
    return rows;
}

bool needs_quoting(std::string_view cell) {
    return cell.find_first_of(",\"\n\r") != std::string_view::npos || cell != trim(cell);
}

void append_cell(std::string& out, std::string_view cell) {
    if (!needs_quoting(cell)) {
        out.append(cell);
        return;
    }
    out.push_back('"');
    for (char c : cell) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
}

Error::Details at(std::size_t line, std::size_t column) {
    return {{"line", std::to_string(line)}, {"column", std::to_string(column + 1)}};
}

} // namespace

Dataset parse_dataset(std::string_view csv_text) {
    auto rows = split_csv(csv_text);
    if (rows.empty()) {
        throw Error(ErrorCode::MalformedHeader, "missing header row");
    }
    const auto& header = rows.front().cells;
    if (header.size() < 2) {
        throw Error(ErrorCode::MalformedHeader, "header needs a date column and at least one tag column");
    }
    if (header[0].empty()) {
        throw Error(ErrorCode::MalformedHeader, "header does not name the date column");
    }
    std::vector<std::string> tags(header.begin() + 1, header.end());
    {
        std::set<std::string_view> seen;
        for (std::size_t c = 0; c < tags.size(); ++c) {
            if (tags[c].empty()) {
                throw Error(ErrorCode::MalformedHeader, "empty tag name in header", at(1, c + 1));
            }
            if (!seen.insert(tags[c]).second) {
                throw Error(ErrorCode::DuplicateTag, "duplicate tag column '" + tags[c] + "'", {{"tag", tags[c]}});
            }
        }
    }
    if (rows.size() == 1) {
        throw Error(ErrorCode::EmptyDataset, "dataset has no month rows");
    }

    struct ParsedRow {
        MonthStamp month;
        std::size_t line;
        std::vector<double> values;
        std::vector<bool> missing;
    };
    std::vector<ParsedRow> parsed;
    parsed.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.cells.size() != header.size()) {
            throw Error(ErrorCode::UnparseableCell,
                        "row has " + std::to_string(row.cells.size()) + " cells, header has " +
                            std::to_string(header.size()),
                        at(row.line, std::min(row.cells.size(), header.size())));
        }
        auto month = MonthStamp::parse(row.cells[0]);
        if (!month) {
            throw Error(ErrorCode::UnparseableCell, "unparseable month '" + row.cells[0] + "'", at(row.line, 0));
        }
        ParsedRow out{*month, row.line, {}, {}};
        out.values.reserve(tags.size());
        out.missing.reserve(tags.size());
        for (std::size_t c = 1; c < row.cells.size(); ++c) {
            const auto& text = row.cells[c];
            if (text.empty()) {
                out.values.push_back(0.0);
                out.missing.push_back(true);
                continue;
            }
            double v = 0.0;
            auto res = std::from_chars(text.data(), text.data() + text.size(), v);
            if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
                throw Error(ErrorCode::UnparseableCell, "unparseable count '" + text + "'", at(row.line, c));
            }
            if (v < 0.0) {
                throw Error(ErrorCode::NegativeCount, "negative count '" + text + "'", at(row.line, c));
            }
            out.values.push_back(v);
            out.missing.push_back(false);
        }
        parsed.push_back(std::move(out));
    }

    std::stable_sort(parsed.begin(), parsed.end(),
                     [](const ParsedRow& a, const ParsedRow& b) { return a.month < b.month; });
    for (std::size_t i = 1; i < parsed.size(); ++i) {
        const auto& prev = parsed[i - 1].month;
        const auto& cur = parsed[i].month;
        if (cur == prev) {
            throw Error(ErrorCode::DuplicateMonth, "duplicate month " + cur.to_string(),
                        {{"month", cur.to_string()}, {"line", std::to_string(parsed[i].line)}});
        }
        if (cur != prev.next()) {
            throw Error(ErrorCode::NonContiguousMonths, "months are not contiguous; first gap at " +
                                                            prev.next().to_string(),
                        {{"gap", prev.next().to_string()}});
        }
    }

    std::vector<double> values;
    std::vector<bool> missing;
    values.reserve(parsed.size() * tags.size());
    missing.reserve(parsed.size() * tags.size());
    for (auto& row : parsed) {
        values.insert(values.end(), row.values.begin(), row.values.end());
        missing.insert(missing.end(), row.missing.begin(), row.missing.end());
    }
    return Dataset(parsed.front().month, std::move(tags), std::move(values), std::move(missing));
}

std::string serialize_dataset(const Dataset& dataset) {
    std::string out;
    out.append("month");
    for (const auto& tag : dataset.tags()) {
        out.push_back(',');
        append_cell(out, tag);
    }
    out.push_back('\n');
    for (std::size_t r = 0; r < dataset.month_count(); ++r) {
        out.append(dataset.month(r).to_string());
        for (std::size_t c = 0; c < dataset.tag_count(); ++c) {
            out.push_back(',');
            if (!dataset.is_missing(r, c)) {
                out.append(format_number(dataset.cell(r, c)));
            }
        }
        out.push_back('\n');
    }
    return out;
}

// ---------------------------------------------------------------------------
// Series extraction

TagSeries column_series(const Dataset& dataset, std::size_t col) {
    const std::size_t n = dataset.month_count();
    std::vector<double> values(n, 0.0);
    std::vector<std::size_t> observed;
    for (std::size_t r = 0; r < n; ++r) {
        if (!dataset.is_missing(r, col)) {
            values[r] = dataset.cell(r, col);
            observed.push_back(r);
        }
    }
    const auto& tag = dataset.tags()[col];
    if (observed.empty()) {
        throw Error(ErrorCode::NoObservations, "tag '" + tag + "' has no observed months", {{"tag", tag}});
    }
    if (observed.size() == n) {
        return TagSeries(tag, dataset.first_month(), std::move(values));
    }

    std::vector<std::size_t> filled;
    for (std::size_t r = 0; r < observed.front(); ++r) {
        values[r] = values[observed.front()];
        filled.push_back(r);
    }
    for (std::size_t k = 1; k < observed.size(); ++k) {
        const std::size_t lo = observed[k - 1];
        const std::size_t hi = observed[k];
        const double span = static_cast<double>(hi - lo);
        for (std::size_t r = lo + 1; r < hi; ++r) {
            const double w = static_cast<double>(r - lo) / span;
            values[r] = (1.0 - w) * values[lo] + w * values[hi];
            filled.push_back(r);
        }
    }
    for (std::size_t r = observed.back() + 1; r < n; ++r) {
        values[r] = values[observed.back()];
        filled.push_back(r);
    }
    std::sort(filled.begin(), filled.end());
    return TagSeries(tag, dataset.first_month(), std::move(values), FillPolicy::LinearInteriorNearestEdge,
                     std::move(filled));
}

TagSeries get_series(const Dataset& dataset, std::string_view tag) {
    return column_series(dataset, dataset.find_tag(tag));
}

TagSeries combine(const Dataset& dataset, std::span<const std::string> tags) {
    if (tags.size() < 2) {
        throw Error(ErrorCode::TooFewMembers, "combine needs at least two distinct tags",
                    {{"count", std::to_string(tags.size())}});
    }
    std::vector<std::size_t> columns;
    for (const auto& tag : tags) {
        auto col = dataset.find_tag(tag);
        if (std::find(columns.begin(), columns.end(), col) != columns.end()) {
            throw Error(ErrorCode::DuplicateMember, "tag '" + tag + "' listed more than once", {{"tag", tag}});
        }
        columns.push_back(col);
    }

    std::vector<double> sum(dataset.month_count(), 0.0);
    std::vector<std::size_t> filled;
    std::string name;
    FillPolicy fill = FillPolicy::None;
    for (auto col : columns) {
        if (!name.empty()) {
            name.push_back('+');
        }
        name += dataset.tags()[col];
    }
    // Summation runs in column order so member order cannot change rounding.
    auto ordered = columns;
    std::sort(ordered.begin(), ordered.end());
    for (auto col : ordered) {
        auto member = column_series(dataset, col);
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += member[i];
        }
        if (member.fill_policy() != FillPolicy::None) {
            fill = member.fill_policy();
            filled.insert(filled.end(), member.filled().begin(), member.filled().end());
        }
    }
    std::sort(filled.begin(), filled.end());
    filled.erase(std::unique(filled.begin(), filled.end()), filled.end());
    return TagSeries(std::move(name), dataset.first_month(), std::move(sum), fill, std::move(filled));
}

} // namespace stackindex
