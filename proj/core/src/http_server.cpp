#include "stackindex/service.hpp"

#include <httplib.h>

#include <atomic>
#include <csignal>
#include <iostream>

namespace stackindex {

namespace {

std::pair<std::string, int> split_bind(const std::string& bind) {
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos) {
        throw Error(ErrorCode::InvalidArgument, "bind address must be host:port, got '" + bind + "'",
                    {{"bind", bind}});
    }
    const std::string host = bind.substr(0, colon);
    const std::string port_text = bind.substr(colon + 1);
    int port = -1;
    try {
        std::size_t used = 0;
        port = std::stoi(port_text, &used);
        if (used != port_text.size()) {
            port = -1;
        }
    } catch (const std::exception&) {
        port = -1;
    }
    if (host.empty() || port < 0 || port > 65535) {
        throw Error(ErrorCode::InvalidArgument, "bind address must be host:port, got '" + bind + "'",
                    {{"bind", bind}});
    }
    return {host, port};
}

} // namespace

struct Server::Impl {
    std::shared_ptr<const Api> api;
    ServiceConfig config;
    httplib::Server http;
    bool bound = false;

    void install_routes() {
        if (!config.cors_origin.empty()) {
            http.set_default_headers({{"Access-Control-Allow-Origin", config.cors_origin},
                                      {"Vary", "Origin"}});
        }
        auto forward = [this](const httplib::Request& req, httplib::Response& res) {
            const auto out = api->handle(req.method, req.path, req.params, req.body);
            res.status = out.status;
            res.set_content(out.body.dump(), "application/json");
        };
        http.Get(R"(/.*)", forward);
        http.Post(R"(/.*)", forward);
        http.Options(R"(/.*)", [this](const httplib::Request&, httplib::Response& res) {
            if (!config.cors_origin.empty()) {
                res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
                res.set_header("Access-Control-Allow-Headers", "Content-Type");
                res.set_header("Access-Control-Max-Age", "600");
            }
            res.status = 204;
        });
    }
};

Server::Server(std::shared_ptr<const Api> api, ServiceConfig config) : impl_(std::make_unique<Impl>()) {
    impl_->api = std::move(api);
    impl_->config = std::move(config);
    impl_->install_routes();
}

Server::~Server() {
    stop();
}

int Server::bind() {
    const auto [host, port] = split_bind(impl_->config.bind);
    int bound_port = port;
    if (port == 0) {
        bound_port = impl_->http.bind_to_any_port(host);
    } else if (!impl_->http.bind_to_port(host, port)) {
        bound_port = -1;
    }
    if (bound_port <= 0) {
        throw Error(ErrorCode::IoError, "cannot bind " + impl_->config.bind, {{"bind", impl_->config.bind}});
    }
    impl_->bound = true;
    return bound_port;
}

void Server::run() {
    if (!impl_->bound) {
        bind();
    }
    impl_->http.listen_after_bind();
}

void Server::stop() {
    if (impl_ && impl_->http.is_running()) {
        impl_->http.stop();
    }
}

bool Server::running() const {
    return impl_->http.is_running();
}

namespace {
std::atomic<Server*> g_active{nullptr};

extern "C" void on_signal(int) {
    if (auto* s = g_active.load()) {
        s->stop();
    }
}
} // namespace

int serve(const ServiceConfig& config) {
    try {
        if (config.store.empty()) {
            throw Error(ErrorCode::InvalidArgument, "no dataset store given (set STACKINDEX_STORE or --store)");
        }
        auto api = std::make_shared<const Api>(load_store(config.store), config.cache_entries);
        Server server(api, config);
        const int port = server.bind();
        std::cerr << "serving " << api->dataset().tag_count() << " tags on port " << port << "\n";
        g_active = &server;
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        server.run();
        g_active = nullptr;
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return 1;
    }
}

} // namespace stackindex
