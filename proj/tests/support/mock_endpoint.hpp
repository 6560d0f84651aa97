#pragma once

// In-process chat-completions server for tests. The handler receives the
// user message (the resume text) and returns the assistant content, or an
// HTTP status to fail with.

#include <atomic>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <variant>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace testsupport {

struct Reply {
    int status = 200;
    std::string content;  // assistant message content when status == 200
    std::string body;     // raw body override (used for malformed replies)
};

class MockEndpoint {
public:
    using Handler = std::function<Reply(const std::string& user_text)>;

    explicit MockEndpoint(Handler handler) : handler_(std::move(handler)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            ++requests_;
            auto body = nlohmann::json::parse(req.body);
            {
                std::lock_guard lock(mutex_);
                last_request_ = body;
                last_authorization_ = req.get_header_value("Authorization");
            }
            std::string user;
            for (const auto& m : body.at("messages"))
                if (m.at("role") == "user") user = m.at("content").get<std::string>();
            Reply r = handler_(user);
            res.status = r.status;
            if (!r.body.empty()) {
                res.set_content(r.body, "application/json");
            } else if (r.status == 200) {
                nlohmann::json out = {
                    {"id", "mock"},
                    {"object", "chat.completion"},
                    {"choices",
                     {{{"index", 0},
                       {"message", {{"role", "assistant"}, {"content", r.content}}},
                       {"finish_reason", "stop"}}}}};
                res.set_content(out.dump(), "application/json");
            } else {
                res.set_content(R"({"error":"mock failure"})", "application/json");
            }
        });
        server_.Post("/v1/embeddings", [this](const httplib::Request& req, httplib::Response& res) {
            ++requests_;
            auto body = nlohmann::json::parse(req.body);
            std::vector<double> v(embedding_dim_, 0.0);
            v[body.at("input").get<std::string>().size() % embedding_dim_] = 1.0;
            nlohmann::json out = {{"data", {{{"embedding", v}, {"index", 0}}}}};
            res.set_content(out.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~MockEndpoint() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
    int requests() const { return requests_.load(); }
    nlohmann::json last_request() const {
        std::lock_guard lock(mutex_);
        return last_request_;
    }
    std::string last_authorization() const {
        std::lock_guard lock(mutex_);
        return last_authorization_;
    }
    void set_embedding_dim(std::size_t d) { embedding_dim_ = d; }

private:
    Handler handler_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    std::atomic<int> requests_{0};
    mutable std::mutex mutex_;
    nlohmann::json last_request_;
    std::string last_authorization_;
    std::size_t embedding_dim_ = 8;
};

}  // namespace testsupport
