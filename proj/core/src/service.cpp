#include "stackindex/service.hpp"

#include "stackindex/changepoint.hpp"
#include "stackindex/evaluation.hpp"
#include "stackindex/json_codec.hpp"
#include "stackindex/storage.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

namespace stackindex {

namespace {

using nlohmann::json;

Error invalid(const std::string& field, const std::string& why) {
    return Error(ErrorCode::InvalidRequest, "invalid '" + field + "': " + why, {{"field", field}});
}

std::optional<std::string> param(const QueryParams& query, const std::string& name) {
    auto it = query.find(name);
    if (it == query.end()) {
        return std::nullopt;
    }
    return it->second;
}

int int_param(const QueryParams& query, const std::string& name, int fallback) {
    auto text = param(query, name);
    if (!text) {
        return fallback;
    }
    int value = 0;
    auto res = std::from_chars(text->data(), text->data() + text->size(), value);
    if (res.ec != std::errc{} || res.ptr != text->data() + text->size()) {
        throw invalid(name, "expected an integer, got '" + *text + "'");
    }
    return value;
}

double real_param(const QueryParams& query, const std::string& name, double fallback) {
    auto text = param(query, name);
    if (!text) {
        return fallback;
    }
    double value = 0.0;
    auto res = std::from_chars(text->data(), text->data() + text->size(), value);
    if (res.ec != std::errc{} || res.ptr != text->data() + text->size()) {
        throw invalid(name, "expected a number, got '" + *text + "'");
    }
    return value;
}

std::optional<MonthStamp> month_param(const QueryParams& query, const std::string& name) {
    auto text = param(query, name);
    if (!text || text->empty()) {
        return std::nullopt;
    }
    auto month = MonthStamp::parse(*text);
    if (!month) {
        throw invalid(name, "expected YYYY-MM, got '" + *text + "'");
    }
    return month;
}

json parse_body(const std::string& body) {
    json parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
        throw Error(ErrorCode::InvalidRequest, "request body must be a JSON object");
    }
    return parsed;
}

std::vector<std::string> read_tags(const json& body) {
    std::vector<std::string> tags;
    if (body.contains("tags")) {
        const auto& list = body["tags"];
        if (!list.is_array()) {
            throw invalid("tags", "expected an array of tag names");
        }
        for (const auto& t : list) {
            if (!t.is_string() || t.get<std::string>().empty()) {
                throw invalid("tags", "tag names must be nonempty strings");
            }
            tags.push_back(t.get<std::string>());
        }
    } else if (body.contains("tag")) {
        if (!body["tag"].is_string()) {
            throw invalid("tag", "expected a string");
        }
        tags.push_back(body["tag"].get<std::string>());
    }
    if (tags.empty()) {
        throw invalid("tags", "at least one tag is required");
    }
    if (tags.size() > kMaxRequestTags) {
        throw invalid("tags", "at most " + std::to_string(kMaxRequestTags) + " tags per request");
    }
    return tags;
}

bool read_combine(const json& body, std::size_t tag_count) {
    if (!body.contains("combine")) {
        return false;
    }
    if (!body["combine"].is_boolean()) {
        throw invalid("combine", "expected a boolean");
    }
    const bool combine = body["combine"].get<bool>();
    if (combine && tag_count < 2) {
        throw invalid("combine", "combining needs at least two tags");
    }
    return combine;
}

ModelSpec read_model(const json& body) {
    ModelSpec spec;
    if (body.contains("model")) {
        if (!body["model"].is_string()) {
            throw invalid("model", "expected one of additive, holt-winters, sarima, ensemble");
        }
        const auto name = body["model"].get<std::string>();
        auto kind = parse_model_kind(name);
        if (!kind) {
            throw Error(ErrorCode::UnknownModel,
                        "unknown model '" + name + "'; expected additive, holt-winters, sarima or ensemble",
                        {{"field", "model"}, {"model", name}});
        }
        spec.kind = *kind;
    }
    if (body.contains("config")) {
        json_codec::apply_model_config(body["config"], spec);
    }
    return spec;
}

int read_int_field(const json& body, const char* field, int fallback) {
    if (!body.contains(field)) {
        return fallback;
    }
    if (!body[field].is_number_integer()) {
        throw invalid(field, "expected an integer");
    }
    return body[field].get<int>();
}

ApiResponse error_response(const Error& error) {
    return {Api::status_for(error), json_codec::error_body(error)};
}

ApiResponse guarded(const std::function<ApiResponse()>& handler) {
    try {
        return handler();
    } catch (const Error& e) {
        return error_response(e);
    } catch (const json::exception& e) {
        return error_response(Error(ErrorCode::InvalidRequest, std::string("malformed request: ") + e.what()));
    }
}

std::string canonical_query(const QueryParams& query) {
    std::string out;
    for (const auto& [k, v] : query) {
        out += k + "=" + v + "&";
    }
    return out;
}

} // namespace

ForecastRequest ForecastRequest::from_json(const json& body) {
    ForecastRequest r;
    r.tags = read_tags(body);
    r.combine = read_combine(body, r.tags.size());
    r.model = read_model(body);
    r.horizon = read_int_field(body, "horizon", r.horizon);
    if (body.contains("level")) {
        if (!body["level"].is_number()) {
            throw invalid("level", "expected a number");
        }
        r.level = body["level"].get<double>();
    }
    validate_horizon(r.horizon);
    validate_level(r.level);
    return r;
}

BacktestRequest BacktestRequest::from_json(const json& body) {
    BacktestRequest r;
    r.tags = read_tags(body);
    r.combine = read_combine(body, r.tags.size());
    if (!r.combine && r.tags.size() != 1) {
        throw invalid("tags", "backtest takes one tag, or several with combine=true");
    }
    r.model = read_model(body);
    r.holdout = read_int_field(body, "holdout", r.holdout);
    return r;
}

// ---------------------------------------------------------------------------
// Api

Api::Api(Dataset dataset, std::size_t cache_entries)
    : dataset_(std::move(dataset)), checksum_(dataset_checksum(dataset_)), cache_capacity_(cache_entries) {}

int Api::status_for(const Error& error) noexcept {
    switch (error.kind()) {
    case ErrorKind::NotFound: return 404;
    case ErrorKind::InvalidInput: return 422;
    case ErrorKind::ModelFailure: return 500;
    case ErrorKind::Io: return 500;
    }
    return 500;
}

std::vector<TagSeries> Api::resolve(const std::vector<std::string>& tags, bool combine) const {
    if (combine) {
        return {stackindex::combine(dataset_, tags)};
    }
    std::vector<TagSeries> out;
    for (const auto& tag : tags) {
        out.push_back(get_series(dataset_, tag));
    }
    return out;
}

ApiResponse Api::cached(const std::string& key, const std::function<ApiResponse()>& compute) const {
    const auto full_key = checksum_ + "\n" + key;
    if (cache_capacity_ > 0) {
        std::lock_guard lock(cache_mutex_);
        if (auto it = cache_index_.find(full_key); it != cache_index_.end()) {
            cache_order_.splice(cache_order_.begin(), cache_order_, it->second);
            return it->second->second;
        }
    }
    auto response = compute();
    if (cache_capacity_ > 0) {
        std::lock_guard lock(cache_mutex_);
        if (!cache_index_.contains(full_key)) {
            cache_order_.emplace_front(full_key, response);
            cache_index_[full_key] = cache_order_.begin();
            while (cache_order_.size() > cache_capacity_) {
                cache_index_.erase(cache_order_.back().first);
                cache_order_.pop_back();
            }
        }
    }
    return response;
}

ApiResponse Api::tags() const {
    auto body = json_codec::tags(dataset_);
    body["dataset_checksum"] = checksum_;
    return {200, body};
}

ApiResponse Api::series(const std::string& tag, const QueryParams& query) const {
    return guarded([&] {
        auto s = get_series(dataset_, tag);
        const auto from = month_param(query, "from").value_or(s.start());
        const auto to = month_param(query, "to").value_or(s.end());
        if (to < from) {
            throw invalid("to", "range end precedes its start");
        }
        auto body = json_codec::series_body(s.slice(from, to));
        body["dataset_checksum"] = checksum_;
        return ApiResponse{200, body};
    });
}

ApiResponse Api::forecast(const std::string& request_body) const {
    return guarded([&] {
        const auto parsed = parse_body(request_body);
        return cached("POST /forecast\n" + parsed.dump(), [&] {
            return guarded([&] {
                const auto request = ForecastRequest::from_json(parsed);
                json results = json::array();
                for (const auto& s : resolve(request.tags, request.combine)) {
                    auto run = run_model(s, request.model, request.horizon, request.level);
                    results.push_back(json_codec::forecast_result(s, run, kHistoryMonths));
                }
                json body{{"model", std::string(to_string(request.model.kind))},
                          {"model_config", request.model.describe()},
                          {"horizon", request.horizon},
                          {"level", request.level},
                          {"combine", request.combine},
                          {"results", results},
                          {"dataset_checksum", checksum_}};
                return ApiResponse{200, body};
            });
        });
    });
}

ApiResponse Api::changepoints(const std::string& tag, const QueryParams& query) const {
    return guarded([&] {
        const double min_confidence = real_param(query, "min_confidence", 0.95);
        const int max_points = int_param(query, "max_points", 3);
        return cached("GET /changepoints/" + tag + "?" + canonical_query(query), [&] {
            return guarded([&] {
                auto s = get_series(dataset_, tag);
                auto points = detect_changepoints(s, min_confidence, max_points);
                auto body = json_codec::changepoints(s, points, min_confidence);
                body["dataset_checksum"] = checksum_;
                return ApiResponse{200, body};
            });
        });
    });
}

ApiResponse Api::trending(const QueryParams& query) const {
    return guarded([&] {
        const int window = int_param(query, "window", static_cast<int>(dataset_.month_count()));
        const int top = int_param(query, "top", 10);
        auto body = json_codec::ranking(trend_ranking(dataset_, window, top));
        body["dataset_checksum"] = checksum_;
        return ApiResponse{200, body};
    });
}

ApiResponse Api::backtest(const std::string& request_body) const {
    return guarded([&] {
        const auto parsed = parse_body(request_body);
        return cached("POST /backtest\n" + parsed.dump(), [&] {
            return guarded([&] {
                const auto request = BacktestRequest::from_json(parsed);
                const auto s = resolve(request.tags, request.combine).front();
                auto body = json_codec::backtest(stackindex::backtest(s, request.model, request.holdout));
                body["dataset_checksum"] = checksum_;
                return ApiResponse{200, body};
            });
        });
    });
}

ApiResponse Api::health() const {
    return {200, json{{"status", "ok"}, {"dataset_checksum", checksum_}}};
}

ApiResponse Api::handle(const std::string& method, const std::string& path, const QueryParams& query,
                        const std::string& body) const {
    static const std::string kPrefix = "/api/v1/";
    auto not_found = [&] {
        return error_response(Error(ErrorCode::NotFound, "no route for " + method + " " + path,
                                    {{"method", method}, {"path", path}}));
    };
    if (!path.starts_with(kPrefix)) {
        return not_found();
    }
    const std::string rest = path.substr(kPrefix.size());
    auto tail = [&](const std::string& head) -> std::optional<std::string> {
        if (rest.size() > head.size() && rest.starts_with(head)) {
            return rest.substr(head.size());
        }
        return std::nullopt;
    };
    if (method == "GET") {
        if (rest == "tags") return tags();
        if (rest == "health") return health();
        if (rest == "trending") return trending(query);
        if (auto tag = tail("series/")) return series(*tag, query);
        if (auto tag = tail("changepoints/")) return changepoints(*tag, query);
    } else if (method == "POST") {
        if (rest == "forecast") return forecast(body);
        if (rest == "backtest") return backtest(body);
    }
    return not_found();
}

// ---------------------------------------------------------------------------

ServiceConfig ServiceConfig::from_env() {
    ServiceConfig config;
    if (const char* v = std::getenv("STACKINDEX_STORE")) config.store = v;
    if (const char* v = std::getenv("STACKINDEX_BIND")) config.bind = v;
    if (const char* v = std::getenv("STACKINDEX_CORS_ORIGIN")) config.cors_origin = v;
    return config;
}

Dataset load_store(const std::filesystem::path& store) {
    namespace fs = std::filesystem;
    if (fs::is_directory(store)) {
        if (fs::exists(store / "dataset.csv")) {
            return open_dataset(store / "dataset.csv");
        }
        std::vector<fs::path> candidates;
        for (const auto& entry : fs::directory_iterator(store)) {
            if (entry.is_regular_file() && entry.path().extension() == ".csv") {
                candidates.push_back(entry.path());
            }
        }
        if (candidates.empty()) {
            throw Error(ErrorCode::IoError, "store " + store.string() + " contains no dataset",
                        {{"store", store.string()}});
        }
        std::sort(candidates.begin(), candidates.end());
        return open_dataset(candidates.front());
    }
    return open_dataset(store);
}

} // namespace stackindex
