#pragma once

#include "stackindex/dataset.hpp"
#include "stackindex/error.hpp"
#include "stackindex/month.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace stackindex {

struct HttpResponse {
    int status = 0;
    std::string body;
    std::map<std::string, std::string> headers; ///< lower-cased names
};

/// Minimal GET-only transport so the fetcher can run against a mock.
/// Implementations throw Error(TransportError) on connection failures.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    /// `target` is an origin-relative path with query, e.g. `/2.3/info?site=stackoverflow`.
    virtual HttpResponse get(const std::string& target) = 0;
};

/// HTTPS transport to api.stackexchange.com (gzip accepted).
std::unique_ptr<HttpTransport> make_stack_exchange_transport(std::string host = "api.stackexchange.com");

struct FetchSpec {
    std::vector<std::string> tags;
    MonthStamp from{2009, 1};
    MonthStamp to{2019, 12};
    std::string site = "stackoverflow";
    /// Optional application key for a higher daily quota.
    std::string key;

    /// Throws RangeEmpty when from > to, InvalidArgument for an empty or invalid tag list.
    void validate() const;
};

struct BackoffEvent {
    std::string target;
    int status = 0;
    int attempt = 0;
    std::chrono::seconds wait{0};
};

struct FetchOptions {
    /// Retries of one request after throttling responses before giving up.
    int max_retries = 5;
    /// Wait used for a throttled response that names no backoff.
    std::chrono::seconds default_retry_wait{1};
    /// Injected so tests do not sleep.
    std::function<void(std::chrono::seconds)> sleep;
};

struct FetchResult {
    Dataset dataset;
    std::vector<BackoffEvent> backoffs;
    std::optional<int> quota_remaining;
    int requests = 0;
};

/// Raised when the API quota runs out; carries what was fetched so far, with
/// unfetched cells marked missing.
class QuotaExhaustedError : public Error {
public:
    QuotaExhaustedError(const std::string& message, Dataset partial, Details details = {})
        : Error(ErrorCode::QuotaExhausted, message, std::move(details)), partial_(std::move(partial)) {}
    const Dataset& partial() const noexcept { return partial_; }

private:
    Dataset partial_;
};

/// Monthly question-creation counts per tag, one `filter=total` query per
/// tag-month, after checking every tag exists. Requests are issued strictly
/// sequentially in (tag, month) order.
FetchResult fetch_tag_counts(const FetchSpec& spec, HttpTransport& transport, const FetchOptions& options = {});

/// RFC 3986 percent-encoding of everything except unreserved characters.
std::string percent_encode(std::string_view text);

} // namespace stackindex
