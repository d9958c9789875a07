#include "stackindex/ingestion.hpp"

#include <httplib.h>

namespace stackindex {

namespace {

class HttpsTransport final : public HttpTransport {
public:
    explicit HttpsTransport(std::string host) : host_(std::move(host)), client_(host_) {
        client_.set_connection_timeout(10);
        client_.set_read_timeout(30);
        client_.set_decompress(true);
        client_.enable_server_certificate_verification(true);
    }

    HttpResponse get(const std::string& target) override {
        httplib::Headers headers{{"Accept-Encoding", "gzip"}, {"User-Agent", "stackindex/0.1"}};
        auto result = client_.Get(target, headers);
        if (!result) {
            throw Error(ErrorCode::TransportError,
                        "request to " + host_ + " failed: " + httplib::to_string(result.error()),
                        {{"host", host_}, {"target", target}});
        }
        HttpResponse response;
        response.status = result->status;
        response.body = result->body;
        for (const auto& [name, value] : result->headers) {
            response.headers[fold_case(name)] = value;
        }
        return response;
    }

private:
    std::string host_;
    httplib::SSLClient client_;
};

} // namespace

std::unique_ptr<HttpTransport> make_stack_exchange_transport(std::string host) {
    return std::make_unique<HttpsTransport>(std::move(host));
}

} // namespace stackindex
