#include "psg/llm/gateway.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include <httplib.h>

#include "psg/core/errors.hpp"

namespace psg::llm {

std::string_view to_string(GatewayMode m) noexcept {
    switch (m) {
        case GatewayMode::Live: return "live";
        case GatewayMode::Record: return "record";
        case GatewayMode::Replay: return "replay";
    }
    return "replay";
}

GatewayMode gateway_mode_from_string(std::string_view s) {
    if (s == "live") return GatewayMode::Live;
    if (s == "record") return GatewayMode::Record;
    if (s == "replay") return GatewayMode::Replay;
    throw InvalidValue("unknown gateway mode: " + std::string(s));
}

EndpointProfile classification_profile() {
    EndpointProfile p;
    p.id = "classification";
    p.model = "gpt-4o";
    p.temperature = 0.0;
    p.max_tokens = 200;
    p.top_p = 1.0;
    p.json_object = true;
    return p;
}

EndpointProfile bot_profile() {
    EndpointProfile p = classification_profile();
    p.id = "bot";
    p.model = "gpt-4o-2024-05-13";
    return p;
}

EndpointProfile embedding_profile() {
    EndpointProfile p;
    p.id = "embedding";
    p.model = "text-embedding-3-small";
    p.json_object = false;
    return p;
}

EndpointProfile profile_from_json(const Json& j, EndpointProfile base) {
    if (j.contains("id")) base.id = j.at("id").get<std::string>();
    if (j.contains("base_url")) base.base_url = j.at("base_url").get<std::string>();
    if (j.contains("model")) base.model = j.at("model").get<std::string>();
    if (j.contains("temperature")) base.temperature = j.at("temperature").get<double>();
    if (j.contains("max_tokens")) base.max_tokens = j.at("max_tokens").get<int>();
    if (j.contains("top_p")) base.top_p = j.at("top_p").get<double>();
    if (j.contains("json_object")) base.json_object = j.at("json_object").get<bool>();
    if (j.contains("auth_env")) base.auth_env = j.at("auth_env").get<std::string>();
    if (j.contains("requests_per_second")) base.requests_per_second = j.at("requests_per_second").get<double>();
    if (j.contains("timeout_seconds")) base.timeout_seconds = j.at("timeout_seconds").get<int>();
    if (base.temperature < 0.0) throw ConfigError("profile temperature must be >= 0");
    return base;
}

HttpResponse HttpTransport::post(const std::string& base_url, const std::string& path, const std::string& body,
                                 const std::vector<std::pair<std::string, std::string>>& headers,
                                 int timeout_seconds) {
    // Split "scheme://host[:port]/prefix" into client origin and path prefix.
    const auto scheme_end = base_url.find("://");
    const auto path_start = base_url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    const std::string origin = base_url.substr(0, path_start);
    const std::string prefix = path_start == std::string::npos ? "" : base_url.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto res = client.Post(prefix + path, h, body, "application/json");
    if (!res) throw TransportFailure("transport error: " + httplib::to_string(res.error()));
    return {res->status, res->body};
}

Json to_json(const Exchange& e) {
    Json j = {{"hash", e.hash},       {"kind", e.kind},   {"profile", e.profile_id},
              {"model", e.model},     {"system", e.system}, {"user", e.user},
              {"response", e.response}, {"latency_ms", e.latency_ms}, {"attempts", e.attempts}};
    if (!e.vector.empty()) j["vector"] = e.vector;
    return j;
}

Exchange exchange_from_json(const Json& j) {
    Exchange e;
    e.hash = j.at("hash").get<std::string>();
    e.kind = j.value("kind", "chat");
    e.profile_id = j.value("profile", "");
    e.model = j.value("model", "");
    e.system = j.value("system", "");
    e.user = j.value("user", "");
    e.response = j.value("response", "");
    if (j.contains("vector")) e.vector = j.at("vector").get<std::vector<double>>();
    e.latency_ms = j.value("latency_ms", 0.0);
    e.attempts = j.value("attempts", 0);
    return e;
}

FixtureStore::FixtureStore(std::string path) {
    load(path);
}

void FixtureStore::load(const std::string& path) {
    std::lock_guard lock(mutex_);
    path_ = path;
    std::ifstream in(path);
    if (!in) return;  // a missing file is an empty store (record mode creates it)
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            Exchange e = exchange_from_json(Json::parse(line));
            by_hash_.emplace(e.hash, std::move(e));
        } catch (const std::exception& ex) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": bad fixture record: " + ex.what());
        }
    }
}

std::optional<Exchange> FixtureStore::find(const std::string& hash) const {
    std::lock_guard lock(mutex_);
    const auto it = by_hash_.find(hash);
    if (it == by_hash_.end()) return std::nullopt;
    return it->second;
}

void FixtureStore::append(const Exchange& e) {
    std::lock_guard lock(mutex_);
    if (!by_hash_.emplace(e.hash, e).second) return;
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::app);
    out << to_json(e).dump() << '\n';
}

std::size_t FixtureStore::size() const {
    std::lock_guard lock(mutex_);
    return by_hash_.size();
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 failed");
    }
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return os.str();
}

std::string chat_request_hash(const EndpointProfile& p, const std::string& system, const std::string& user) {
    // nlohmann::json objects keep keys sorted, so dump() is canonical.
    const Json canonical = {{"kind", "chat"},           {"profile", p.id},         {"model", p.model},
                            {"temperature", p.temperature}, {"max_tokens", p.max_tokens}, {"top_p", p.top_p},
                            {"json_object", p.json_object}, {"system", system},      {"user", user}};
    return sha256_hex(canonical.dump());
}

std::string embedding_request_hash(const EndpointProfile& p, const std::string& text) {
    const Json canonical = {{"kind", "embedding"}, {"profile", p.id}, {"model", p.model}, {"text", text}};
    return sha256_hex(canonical.dump());
}

Gateway::Gateway(GatewayMode mode, std::shared_ptr<FixtureStore> store, std::shared_ptr<Transport> transport,
                 RetryPolicy retry)
    : mode_(mode), store_(std::move(store)), transport_(std::move(transport)), retry_(retry),
      sleeper_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {
    if (!store_) store_ = std::make_shared<FixtureStore>();
    if (mode_ != GatewayMode::Replay && !transport_) transport_ = std::make_shared<HttpTransport>();
}

std::shared_ptr<Gateway> Gateway::replay_only(std::shared_ptr<FixtureStore> store) {
    return std::make_shared<Gateway>(GatewayMode::Replay, std::move(store));
}

std::size_t Gateway::network_calls() const {
    std::lock_guard lock(mutex_);
    return network_calls_;
}

std::vector<std::chrono::steady_clock::time_point> Gateway::request_times() const {
    std::lock_guard lock(mutex_);
    return request_times_;
}

void Gateway::throttle(const EndpointProfile& profile) {
    std::unique_lock lock(mutex_);
    if (profile.requests_per_second > 0.0) {
        const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(1.0 / profile.requests_per_second));
        const auto now = std::chrono::steady_clock::now();
        if (!request_times_.empty() && now < last_request_ + interval) {
            const auto wait = last_request_ + interval - now;
            last_request_ += interval;
            lock.unlock();
            std::this_thread::sleep_for(wait);
            lock.lock();
        } else {
            last_request_ = now;
        }
    } else {
        last_request_ = std::chrono::steady_clock::now();
    }
    ++network_calls_;
    request_times_.push_back(std::chrono::steady_clock::now());
}

HttpResponse Gateway::send(const EndpointProfile& profile, const std::string& path, const Json& body,
                           int& attempts) {
    std::vector<std::pair<std::string, std::string>> headers;
    if (const char* token = std::getenv(profile.auth_env.c_str()); token != nullptr && *token != '\0') {
        headers.emplace_back("Authorization", std::string("Bearer ") + token);
    }
    std::string last_error;
    for (attempts = 1; attempts <= retry_.max_attempts; ++attempts) {
        throttle(profile);
        try {
            HttpResponse res = transport_->post(base_url_.empty() ? profile.base_url : base_url_, path, body.dump(), headers, profile.timeout_seconds);
            if (res.status >= 200 && res.status < 300) return res;
            last_error = "HTTP " + std::to_string(res.status) + ": " + res.body.substr(0, 200);
            const bool retryable = res.status == 429 || res.status >= 500;
            if (!retryable) break;
        } catch (const TransportFailure& e) {
            last_error = e.what();
        }
        if (attempts < retry_.max_attempts) sleeper_(retry_.base_backoff * (1 << (attempts - 1)));
    }
    attempts = std::min(attempts, retry_.max_attempts);
    throw GatewayError("request to " + profile.base_url + path + " failed after " + std::to_string(attempts) +
                       " attempt(s): " + last_error);
}

std::string Gateway::chat(const EndpointProfile& profile, const std::string& system, const std::string& user) {
    const std::string hash = chat_request_hash(profile, system, user);
    if (mode_ != GatewayMode::Live) {
        if (auto hit = store_->find(hash)) return hit->response;
        if (mode_ == GatewayMode::Replay) {
            throw FixtureMiss("no recorded exchange for request " + hash.substr(0, 12) + " (profile " + profile.id +
                              ")");
        }
    }
    Json body = {{"model", profile.model},
                 {"temperature", profile.temperature},
                 {"max_tokens", profile.max_tokens},
                 {"top_p", profile.top_p},
                 {"messages", Json::array({{{"role", "system"}, {"content", system}},
                                           {{"role", "user"}, {"content", user}}})}};
    if (profile.json_object) body["response_format"] = {{"type", "json_object"}};

    const auto t0 = std::chrono::steady_clock::now();
    int attempts = 0;
    const HttpResponse res = send(profile, "/chat/completions", body, attempts);
    const double latency =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::string content;
    try {
        const Json parsed = Json::parse(res.body);
        content = parsed.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const std::exception& e) {
        throw GatewayError(std::string("unexpected chat response body: ") + e.what());
    }
    if (mode_ == GatewayMode::Record) {
        store_->append({hash, "chat", profile.id, profile.model, system, user, content, {}, latency, attempts});
    }
    return content;
}

namespace {

std::optional<Json> parse_object(const std::string& text, const std::vector<std::string>& keys) {
    try {
        Json j = Json::parse(text);
        if (!j.is_object()) return std::nullopt;
        for (const auto& k : keys) {
            if (!j.contains(k)) return std::nullopt;
        }
        return j;
    } catch (const Json::parse_error&) {
        return std::nullopt;
    }
}

}  // namespace

Json Gateway::chat_json(const EndpointProfile& profile, const std::string& system, const std::string& user,
                        const std::vector<std::string>& required_keys,
                        const std::function<bool(const Json&)>& accept) {
    const auto usable = [&](const std::optional<Json>& j) { return j && (!accept || accept(*j)); };
    if (auto j = parse_object(chat(profile, system, user), required_keys); usable(j)) return *j;
    std::string keys;
    for (const auto& k : required_keys) keys += (keys.empty() ? "'" : ", '") + k + "'";
    const std::string reprompt =
        user + "\n\nYour previous answer was not valid. Respond with a single JSON object with the key(s): " + keys + ".";
    if (auto j = parse_object(chat(profile, system, reprompt), required_keys); usable(j)) return *j;
    throw MalformedOutput("model output is not a JSON object with keys " + keys);
}

std::vector<std::vector<double>> Gateway::embed(const EndpointProfile& profile, const std::vector<std::string>& texts) {
    std::vector<std::vector<double>> out(texts.size());
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (mode_ != GatewayMode::Live) {
            if (auto hit = store_->find(embedding_request_hash(profile, texts[i]))) {
                out[i] = hit->vector;
                continue;
            }
            if (mode_ == GatewayMode::Replay) {
                throw FixtureMiss("no recorded embedding for text #" + std::to_string(i));
            }
        }
        missing.push_back(i);
    }
    if (!missing.empty()) {
        Json input = Json::array();
        for (std::size_t i : missing) input.push_back(texts[i]);
        const Json body = {{"model", profile.model}, {"input", input}};
        const auto t0 = std::chrono::steady_clock::now();
        int attempts = 0;
        const HttpResponse res = send(profile, "/embeddings", body, attempts);
        const double latency =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        try {
            const Json parsed = Json::parse(res.body);
            const auto& data = parsed.at("data");
            if (data.size() != missing.size()) throw GatewayError("embedding count mismatch");
            for (const auto& item : data) {
                const auto idx = item.value("index", std::size_t{0});
                if (idx >= missing.size()) throw GatewayError("embedding index out of range");
                out[missing[idx]] = item.at("embedding").get<std::vector<double>>();
            }
        } catch (const GatewayError&) {
            throw;
        } catch (const std::exception& e) {
            throw GatewayError(std::string("unexpected embedding response body: ") + e.what());
        }
        if (mode_ == GatewayMode::Record) {
            for (std::size_t i : missing) {
                store_->append({embedding_request_hash(profile, texts[i]), "embedding", profile.id, profile.model, "",
                                texts[i], "", out[i], latency, attempts});
            }
        }
    }
    if (!out.empty()) {
        const auto dim = out.front().size();
        for (const auto& v : out) {
            if (v.size() != dim || dim == 0) throw GatewayError("embedding dimension differs within batch");
        }
    }
    return out;
}

}  // namespace psg::llm
