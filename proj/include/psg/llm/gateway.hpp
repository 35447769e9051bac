#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace psg::llm {

using Json = nlohmann::json;

enum class GatewayMode { Live, Record, Replay };

std::string_view to_string(GatewayMode m) noexcept;
GatewayMode gateway_mode_from_string(std::string_view s);

struct EndpointProfile {
    std::string id = "default";
    std::string base_url = "https://api.openai.com/v1";
    std::string model = "gpt-4o";
    double temperature = 0.0;
    int max_tokens = 200;
    double top_p = 1.0;
    bool json_object = true;
    std::string auth_env = "OPENAI_API_KEY";
    double requests_per_second = 5.0;
    int timeout_seconds = 60;
};

// Text-analysis parameters: gpt-4o, 200 tokens, temperature 0, top_p 1,
// JSON-object responses.
EndpointProfile classification_profile();

// Bot generation. The generation temperature is not published alongside
// the prompts, so this profile keeps the classification decoding values.
EndpointProfile bot_profile();

EndpointProfile embedding_profile();

EndpointProfile profile_from_json(const Json& j, EndpointProfile base);

struct HttpResponse {
    int status = 0;
    std::string body;
};

// Thrown by transports for connection-level failures (retryable).
class TransportFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse post(const std::string& base_url, const std::string& path, const std::string& body,
                              const std::vector<std::pair<std::string, std::string>>& headers,
                              int timeout_seconds) = 0;
};

// cpp-httplib backed transport (HTTP and HTTPS).
class HttpTransport final : public Transport {
public:
    HttpResponse post(const std::string& base_url, const std::string& path, const std::string& body,
                      const std::vector<std::pair<std::string, std::string>>& headers,
                      int timeout_seconds) override;
};

struct Exchange {
    std::string hash;
    std::string kind;  // "chat" or "embedding"
    std::string profile_id;
    std::string model;
    std::string system;
    std::string user;
    std::string response;
    std::vector<double> vector;
    double latency_ms = 0.0;
    int attempts = 0;
};

Json to_json(const Exchange& e);
Exchange exchange_from_json(const Json& j);

// Newline-delimited Exchange records keyed by request hash. Appends are
// serialised; lookups may run concurrently.
class FixtureStore {
public:
    FixtureStore() = default;
    explicit FixtureStore(std::string path);

    void load(const std::string& path);
    std::optional<Exchange> find(const std::string& hash) const;
    void append(const Exchange& e);
    std::size_t size() const;
    const std::string& path() const noexcept { return path_; }

private:
    mutable std::mutex mutex_;
    std::string path_;
    std::unordered_map<std::string, Exchange> by_hash_;
};

// Hex SHA-256 over the canonical (sorted-key, compact) JSON serialisation.
std::string sha256_hex(std::string_view data);
std::string chat_request_hash(const EndpointProfile& p, const std::string& system, const std::string& user);
std::string embedding_request_hash(const EndpointProfile& p, const std::string& text);

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds base_backoff{250};
};

class Gateway {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    Gateway(GatewayMode mode, std::shared_ptr<FixtureStore> store, std::shared_ptr<Transport> transport = nullptr,
            RetryPolicy retry = {});

    // Offline gateway that fails every request with FixtureMiss.
    static std::shared_ptr<Gateway> replay_only(std::shared_ptr<FixtureStore> store);

    std::string chat(const EndpointProfile& profile, const std::string& system, const std::string& user);

    // Chat whose reply must be one JSON object carrying every required key
    // (and passing `accept`, when given). A malformed reply triggers one
    // reprompt; a second failure throws MalformedOutput.
    Json chat_json(const EndpointProfile& profile, const std::string& system, const std::string& user,
                   const std::vector<std::string>& required_keys,
                   const std::function<bool(const Json&)>& accept = {});

    std::vector<std::vector<double>> embed(const EndpointProfile& profile, const std::vector<std::string>& texts);

    GatewayMode mode() const noexcept { return mode_; }
    std::size_t network_calls() const;
    std::vector<std::chrono::steady_clock::time_point> request_times() const;
    void set_sleeper(Sleeper s) { sleeper_ = std::move(s); }

    // Sends every request to this base URL instead of the profile's. Not part
    // of the request hash, so recordings replay regardless of endpoint.
    void set_base_url(std::string url) { base_url_ = std::move(url); }

private:
    HttpResponse send(const EndpointProfile& profile, const std::string& path, const Json& body, int& attempts);
    void throttle(const EndpointProfile& profile);

    GatewayMode mode_;
    std::shared_ptr<FixtureStore> store_;
    std::shared_ptr<Transport> transport_;
    RetryPolicy retry_;
    Sleeper sleeper_;
    std::string base_url_;

    mutable std::mutex mutex_;
    std::size_t network_calls_ = 0;
    std::vector<std::chrono::steady_clock::time_point> request_times_;
    std::chrono::steady_clock::time_point last_request_{};
};

}  // namespace psg::llm
