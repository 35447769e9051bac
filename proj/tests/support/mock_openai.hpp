#pragma once

// In-process OpenAI-compatible server for tests. Answers are derived from a
// hash of the request so they are stable across runs.

#include <atomic>
#include <optional>
#include <functional>
#include <string>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "psg/core/rng.hpp"

namespace psg::testing {

class MockOpenAi {
public:
    // Optional override: return a body string to send instead of the default.
    using ChatHook = std::function<std::optional<std::string>(const std::string& system, const std::string& user)>;

    MockOpenAi() {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            ++requests_;
            if (fail_next_ > 0) {
                --fail_next_;
                res.status = 503;
                res.set_content("busy", "text/plain");
                return;
            }
            const auto body = nlohmann::json::parse(req.body);
            const std::string system = body["messages"][0]["content"];
            const std::string user = body["messages"][1]["content"];
            std::string content;
            if (hook_) {
                if (auto c = hook_(system, user)) content = *c;
            }
            if (content.empty()) content = answer(system, user);
            nlohmann::json out = {
                {"id", "mock"},
                {"object", "chat.completion"},
                {"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}}}}};
            res.set_content(out.dump(), "application/json");
        });
        server_.Post("/v1/embeddings", [this](const httplib::Request& req, httplib::Response& res) {
            ++requests_;
            const auto body = nlohmann::json::parse(req.body);
            nlohmann::json data = nlohmann::json::array();
            int i = 0;
            for (const auto& t : body["input"]) {
                Rng rng(fnv1a64(t.get<std::string>()));
                std::vector<double> v;
                for (int k = 0; k < 8; ++k) v.push_back(uniform01(rng));
                data.push_back({{"index", i++}, {"embedding", v}});
            }
            res.set_content(nlohmann::json{{"data", data}}.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~MockOpenAi() {
        server_.stop();
        thread_.join();
    }

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
    int requests() const { return requests_.load(); }
    void fail_next(int n) { fail_next_ = n; }
    void set_hook(ChatHook h) { hook_ = std::move(h); }

    static std::string answer(const std::string& system, const std::string& user) {
        const auto h = fnv1a64(system + "\n" + user);
        if (system.find("'category'") != std::string::npos) {
            int c = 4;
            if (user.find("points") != std::string::npos || user.find("return") != std::string::npos) c = 2;
            else if (user.find("Why") != std::string::npos || user.find("why") != std::string::npos) c = 3;
            else if (user.find("your") != std::string::npos || user.find("you") != std::string::npos) c = 1;
            return nlohmann::json{{"category", c}}.dump();
        }
        if (system.find("'promise_a'") != std::string::npos) {
            return nlohmann::json{{"promise_a", static_cast<int>(h % 31)}, {"promise_b", -1}}.dump();
        }
        if (system.find("'return'") != std::string::npos) {
            return nlohmann::json{{"return", 12 + static_cast<int>(h % 13)}}.dump();
        }
        if (system.find("'message'") != std::string::npos) {
            return nlohmann::json{{"message", "Hello! I value fairness and I will return " + std::to_string(12 + h % 13) +
                                                  " points to you if you pick me. I always keep my word."}}
                .dump();
        }
        return "{}";
    }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> requests_{0};
    std::atomic<int> fail_next_{0};
    ChatHook hook_;
};

}  // namespace psg::testing
