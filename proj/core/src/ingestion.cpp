#include "stackindex/ingestion.hpp"

#include <nlohmann/json.hpp>

#include <set>
#include <thread>

namespace stackindex {

namespace {

using nlohmann::json;

constexpr const char* kApiVersion = "/2.3";
constexpr std::size_t kTagsPerInfoRequest = 20;

bool throttled(const HttpResponse& response, const json& body) {
    if (response.status == 429 || response.status == 503) {
        return true;
    }
    return body.is_object() && body.value("error_name", std::string{}) == "throttle_violation" &&
           body.value("error_message", std::string{}).find("quota") == std::string::npos;
}

bool quota_violation(const json& body) {
    if (!body.is_object()) {
        return false;
    }
    const auto name = body.value("error_name", std::string{});
    const auto message = body.value("error_message", std::string{});
    return (name == "throttle_violation" && message.find("quota") != std::string::npos) ||
           name == "quota_exhausted";
}

class Fetcher {
public:
    Fetcher(const FetchSpec& spec, HttpTransport& transport, const FetchOptions& options)
        : spec_(spec), transport_(transport), options_(options),
          months_(static_cast<std::size_t>(spec.to.minus(spec.from) + 1)),
          values_(months_ * spec.tags.size(), 0.0), missing_(months_ * spec.tags.size(), true) {
        if (!options_.sleep) {
            options_.sleep = [](std::chrono::seconds s) { std::this_thread::sleep_for(s); };
        }
    }

    FetchResult run() {
        check_tags();
        for (std::size_t c = 0; c < spec_.tags.size(); ++c) {
            for (std::size_t m = 0; m < months_; ++m) {
                const auto month = spec_.from.plus(static_cast<int>(m));
                const auto body = request(count_target(spec_.tags[c], month));
                if (!body.contains("total") || !body["total"].is_number()) {
                    throw Error(ErrorCode::TransportError, "response has no 'total' field",
                                {{"tag", spec_.tags[c]}, {"month", month.to_string()}});
                }
                values_[m * spec_.tags.size() + c] = body["total"].get<double>();
                missing_[m * spec_.tags.size() + c] = false;
            }
        }
        return {dataset(), std::move(backoffs_), quota_remaining_, requests_};
    }

private:
    std::string common_query() const {
        std::string q = "site=" + percent_encode(spec_.site);
        if (!spec_.key.empty()) {
            q += "&key=" + percent_encode(spec_.key);
        }
        return q;
    }

    std::string count_target(const std::string& tag, MonthStamp month) const {
        return std::string(kApiVersion) + "/questions?" + common_query() + "&tagged=" + percent_encode(tag) +
               "&fromdate=" + std::to_string(month.epoch_seconds()) +
               "&todate=" + std::to_string(month.next().epoch_seconds() - 1) + "&filter=total";
    }

    void check_tags() {
        std::set<std::string> known;
        for (std::size_t first = 0; first < spec_.tags.size(); first += kTagsPerInfoRequest) {
            std::string joined;
            for (std::size_t i = first; i < std::min(spec_.tags.size(), first + kTagsPerInfoRequest); ++i) {
                if (!joined.empty()) {
                    joined += "%3B";
                }
                joined += percent_encode(spec_.tags[i]);
            }
            for (int page = 1;; ++page) {
                const auto body = request(std::string(kApiVersion) + "/tags/" + joined + "/info?" + common_query() +
                                          "&pagesize=100&page=" + std::to_string(page));
                for (const auto& item : body.value("items", json::array())) {
                    known.insert(fold_case(item.value("name", std::string{})));
                }
                if (!body.value("has_more", false)) {
                    break;
                }
            }
        }
        for (const auto& tag : spec_.tags) {
            if (!known.contains(fold_case(tag))) {
                throw Error(ErrorCode::UnknownTag, "the API has no tag '" + tag + "' on " + spec_.site,
                            {{"tag", tag}, {"site", spec_.site}});
            }
        }
    }

    json request(const std::string& target) {
        if (pending_backoff_.count() > 0) {
            backoffs_.push_back({target, 200, 0, pending_backoff_});
            options_.sleep(pending_backoff_);
            pending_backoff_ = std::chrono::seconds{0};
        }
        if (quota_remaining_ && *quota_remaining_ <= 0) {
            exhausted("API quota is exhausted");
        }
        for (int attempt = 0;; ++attempt) {
            ++requests_;
            const auto response = transport_.get(target);
            json body = json::parse(response.body, nullptr, false);
            if (body.is_object() && body.contains("quota_remaining")) {
                quota_remaining_ = body["quota_remaining"].get<int>();
            }
            if (response.status == 200 && body.is_object()) {
                if (body.contains("backoff")) {
                    pending_backoff_ = std::chrono::seconds{body["backoff"].get<int>()};
                }
                return body;
            }
            if (quota_violation(body) || (quota_remaining_ && *quota_remaining_ <= 0)) {
                exhausted(body.value("error_message", std::string{"quota exhausted"}));
            }
            if (!throttled(response, body)) {
                throw Error(ErrorCode::TransportError,
                            "request failed with HTTP " + std::to_string(response.status),
                            {{"target", target}, {"status", std::to_string(response.status)}});
            }
            if (attempt >= options_.max_retries) {
                exhausted("still throttled after " + std::to_string(options_.max_retries) + " retries");
            }
            auto wait = options_.default_retry_wait;
            if (body.is_object() && body.contains("backoff")) {
                wait = std::chrono::seconds{body["backoff"].get<int>()};
            } else if (auto it = response.headers.find("retry-after"); it != response.headers.end()) {
                try {
                    wait = std::chrono::seconds{std::stoi(it->second)};
                } catch (const std::exception&) {
                }
            }
            backoffs_.push_back({target, response.status, attempt + 1, wait});
            options_.sleep(wait);
        }
    }

    [[noreturn]] void exhausted(const std::string& why) {
        throw QuotaExhaustedError("quota exhausted: " + why + "; partial dataset attached", dataset(),
                                  {{"requests", std::to_string(requests_)}});
    }

    Dataset dataset() const {
        return Dataset(spec_.from, spec_.tags, values_, missing_);
    }

    const FetchSpec& spec_;
    HttpTransport& transport_;
    FetchOptions options_;
    std::size_t months_;
    std::vector<double> values_;
    std::vector<bool> missing_;
    std::vector<BackoffEvent> backoffs_;
    std::optional<int> quota_remaining_;
    std::chrono::seconds pending_backoff_{0};
    int requests_ = 0;
};

} // namespace

void FetchSpec::validate() const {
    if (tags.empty()) {
        throw Error(ErrorCode::InvalidArgument, "fetch needs at least one tag");
    }
    std::set<std::string> seen;
    for (const auto& tag : tags) {
        if (tag.empty()) {
            throw Error(ErrorCode::InvalidArgument, "empty tag in fetch list");
        }
        for (unsigned char c : tag) {
            if (c < 0x20 || c == 0x7F || c == ';' || c == ' ') {
                throw Error(ErrorCode::InvalidArgument, "tag '" + tag + "' contains a reserved character",
                            {{"tag", tag}});
            }
        }
        if (!seen.insert(fold_case(tag)).second) {
            throw Error(ErrorCode::InvalidArgument, "tag '" + tag + "' listed twice", {{"tag", tag}});
        }
    }
    if (to < from) {
        throw Error(ErrorCode::RangeEmpty, "fetch range " + from.to_string() + ".." + to.to_string() + " is empty",
                    {{"from", from.to_string()}, {"to", to.to_string()}});
    }
    if (site.empty()) {
        throw Error(ErrorCode::InvalidArgument, "site must be nonempty");
    }
}

std::string percent_encode(std::string_view text) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : text) {
        const bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                                c == '-' || c == '_' || c == '.' || c == '~';
        if (unreserved) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0xF]);
        }
    }
    return out;
}

FetchResult fetch_tag_counts(const FetchSpec& spec, HttpTransport& transport, const FetchOptions& options) {
    spec.validate();
    return Fetcher(spec, transport, options).run();
}

} // namespace stackindex
