#pragma once

#include "stackindex/dataset.hpp"
#include "stackindex/error.hpp"
#include "stackindex/models.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace stackindex {

/// Forecast responses carry this many trailing history months.
inline constexpr std::size_t kHistoryMonths = 24;
/// Most series one request may name.
inline constexpr std::size_t kMaxRequestTags = 5;

struct ForecastRequest {
    std::vector<std::string> tags;
    bool combine = false;
    ModelSpec model;
    int horizon = 12;
    double level = 0.8;

    /// Validates every field; throws Error naming the violated invariant.
    static ForecastRequest from_json(const nlohmann::json& body);
};

struct BacktestRequest {
    std::vector<std::string> tags;
    bool combine = false;
    ModelSpec model;
    int holdout = 12;

    static BacktestRequest from_json(const nlohmann::json& body);
};

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

using QueryParams = std::multimap<std::string, std::string>;

/// Transport-independent implementation of the /api/v1 endpoints. Each
/// handler maps its inputs onto one module operation; errors become
/// `{code, message, details}` bodies. Safe for concurrent use.
class Api {
public:
    explicit Api(Dataset dataset, std::size_t cache_entries = 256);

    const Dataset& dataset() const noexcept { return dataset_; }
    const std::string& checksum() const noexcept { return checksum_; }

    ApiResponse tags() const;
    ApiResponse series(const std::string& tag, const QueryParams& query) const;
    ApiResponse forecast(const std::string& body) const;
    ApiResponse changepoints(const std::string& tag, const QueryParams& query) const;
    ApiResponse trending(const QueryParams& query) const;
    ApiResponse backtest(const std::string& body) const;
    ApiResponse health() const;

    /// Routes `method path` to a handler; unknown routes yield 404.
    ApiResponse handle(const std::string& method, const std::string& path, const QueryParams& query,
                       const std::string& body) const;

    /// Builds the series a request addresses: one per tag, or a single combined one.
    std::vector<TagSeries> resolve(const std::vector<std::string>& tags, bool combine) const;

    static int status_for(const Error& error) noexcept;

private:
    ApiResponse cached(const std::string& key, const std::function<ApiResponse()>& compute) const;

    Dataset dataset_;
    std::string checksum_;

    std::size_t cache_capacity_;
    mutable std::mutex cache_mutex_;
    mutable std::list<std::pair<std::string, ApiResponse>> cache_order_;
    mutable std::unordered_map<std::string, std::list<std::pair<std::string, ApiResponse>>::iterator> cache_index_;
};

struct ServiceConfig {
    std::filesystem::path store;
    std::string bind = "127.0.0.1:8080";
    /// Allowed browser origin for CORS; empty disables the headers.
    std::string cors_origin;
    std::size_t cache_entries = 256;

    /// STACKINDEX_STORE, STACKINDEX_BIND, STACKINDEX_CORS_ORIGIN override the defaults.
    static ServiceConfig from_env();
};

/// A dataset file, or a directory holding `dataset.csv` (or else the
/// lexicographically first `*.csv`).
Dataset load_store(const std::filesystem::path& store);

/// HTTP/1.1 front end for an Api.
class Server {
public:
    Server(std::shared_ptr<const Api> api, ServiceConfig config);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds `config.bind` (port 0 picks a free port) and returns the bound port.
    int bind();
    /// Serves until stop(); call after bind().
    void run();
    void stop();
    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Loads the store and serves until the process is stopped. Returns a process exit code.
int serve(const ServiceConfig& config);

} // namespace stackindex
