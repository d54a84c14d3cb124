#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

#include "httplib.h"

#include "konnect/answer.hpp"
#include "konnect/service.hpp"

namespace konnect {

/// POSTs the question as text/plain to a fixed URL and takes a 200 response
/// body as the answer. Any other status, a network error or a timeout
/// yields nullopt.
class HttpTextGenerator final : public TextGeneratorClient {
public:
    /// `url` is scheme://host[:port][/path].
    explicit HttpTextGenerator(std::string url)
    {
        const auto scheme_end = url.find("://");
        const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
        origin_ = url.substr(0, path_start);
        path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
    }

    std::optional<std::string> generate(std::string_view question,
                                        std::chrono::milliseconds timeout) const noexcept override
    {
        try {
            httplib::Client client(origin_);
            client.set_connection_timeout(timeout);
            client.set_read_timeout(timeout);
            client.set_write_timeout(timeout);
            auto res = client.Post(path_, std::string(question), "text/plain; charset=utf-8");
            if (!res || res->status != 200) return std::nullopt;
            return res->body;
        } catch (...) {
            return std::nullopt;
        }
    }

    const std::string& origin() const noexcept { return origin_; }
    const std::string& path() const noexcept { return path_; }

private:
    std::string origin_;
    std::string path_;
};

/// Registers the API routes on `server`. `service` must outlive it.
inline void mount(httplib::Server& server, const Service& service, const std::string& cors_origin = "*")
{
    auto send = [cors_origin](httplib::Response& res, const HttpReply& reply) {
        res.status = reply.status;
        res.set_content(reply.body, reply.content_type);
        if (!cors_origin.empty()) res.set_header("Access-Control-Allow-Origin", cors_origin);
    };

    server.Post("/api/query", [&service, send](const httplib::Request& req, httplib::Response& res) {
        send(res, service.query(req.body));
    });
    server.Get(R"(/api/entity/([^/]+))", [&service, send](const httplib::Request& req, httplib::Response& res) {
        send(res, service.entity(req.matches[1].str()));
    });
    server.Get("/api/health", [&service, send](const httplib::Request&, httplib::Response& res) {
        send(res, service.health());
    });
    server.Options(R"(/api/.*)", [cors_origin](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
        if (!cors_origin.empty()) {
            res.set_header("Access-Control-Allow-Origin", cors_origin);
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
        }
    });
    server.set_exception_handler([cors_origin](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
        res.status = 500;
        res.set_content(R"({"error":"internal_error","message":"internal server error"})", "application/json");
        if (!cors_origin.empty()) res.set_header("Access-Control-Allow-Origin", cors_origin);
    });
}

}  // namespace konnect
