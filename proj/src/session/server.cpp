#include "psg/session/server.hpp"

#include <filesystem>

#include <httplib.h>

#include "psg/core/errors.hpp"

namespace psg::session {

using nlohmann::json;

namespace {

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void fail(httplib::Response& res, int status, const std::string& kind, const std::string& message) {
    reply(res, status, {{"type", "error"}, {"error", kind}, {"message", message}});
}

// Maps library errors onto HTTP statuses.
template <typename F>
void guarded(httplib::Response& res, F&& f) {
    try {
        f();
    } catch (const json::exception& e) {
        fail(res, 400, "BadRequest", e.what());
    } catch (const AuthError& e) {
        fail(res, 403, "AuthError", e.what());
    } catch (const IllegalEvent& e) {
        fail(res, 409, "IllegalEvent", e.what());
    } catch (const InvalidValue& e) {
        fail(res, 400, "InvalidValue", e.what());
    } catch (const ConfigError& e) {
        fail(res, 400, "ConfigError", e.what());
    } catch (const Infeasible& e) {
        fail(res, 400, "Infeasible", e.what());
    } catch (const Error& e) {
        fail(res, 500, "Error", e.what());
    }
}

json body_of(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    auto j = json::parse(req.body);
    if (!j.is_object()) throw InvalidValue("request body must be a JSON object");
    return j;
}

}  // namespace

SessionServer::SessionServer(ServerOptions options) : options_(std::move(options)), http_(std::make_unique<httplib::Server>()) {
    routes();
}

SessionServer::~SessionServer() { stop(); }

std::shared_ptr<LiveSession> SessionServer::session(const std::string& id) const {
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return nullptr;
    return it->second;
}

std::size_t SessionServer::session_count() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

void SessionServer::routes() {
    auto& s = *http_;

    s.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
        reply(res, 200, {{"type", "health"}, {"version", PSG_VERSION}, {"sessions", session_count()}});
    });

    s.Post("/api/sessions", [this](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const json body = body_of(req);
            SessionConfig cfg = options_.base_config;
            if (body.contains("config")) {
                cfg = config_from_json(body["config"]);
            } else if (body.contains("preset")) {
                cfg = preset(body["preset"].get<std::string>());
            }
            LiveOptions lo;
            if (body.contains("human_seats")) lo.human_seats = body["human_seats"].get<std::vector<std::string>>();
            lo.gateway = options_.gateway;
            std::string id;
            {
                std::lock_guard lock(mutex_);
                id = cfg.id + "-" + std::to_string(++next_id_);
            }
            cfg.id = id;
            cfg.n_groups = 1;
            cfg.sync = matching::SyncMode::Barrier;
            if (!options_.data_dir.empty()) lo.log_path = (std::filesystem::path(options_.data_dir) / (id + ".ndjson")).string();
            auto session = std::make_shared<LiveSession>(cfg, lo);
            {
                std::lock_guard lock(mutex_);
                sessions_[id] = session;
            }
            reply(res, 201, {{"type", "session_created"}, {"session", id}, {"human_seats", lo.human_seats}});
        });
    });

    const auto with_session = [this](const httplib::Request& req, httplib::Response& res, auto&& f) {
        guarded(res, [&] {
            auto session = this->session(req.matches[1]);
            if (!session) {
                fail(res, 404, "NotFound", "no session " + std::string(req.matches[1]));
                return;
            }
            f(*session);
        });
    };

    s.Post(R"(/api/sessions/([^/]+)/join)", [with_session](const httplib::Request& req, httplib::Response& res) {
        with_session(req, res, [&](LiveSession& session) {
            const json body = body_of(req);
            const auto [token, seat] = session.join(body.value("seat", ""));
            reply(res, 200, {{"type", "joined"}, {"token", token}, {"seat", seat}, {"state", session.state(token)}});
        });
    });

    s.Get(R"(/api/sessions/([^/]+)/state)", [with_session](const httplib::Request& req, httplib::Response& res) {
        with_session(req, res, [&](LiveSession& session) { reply(res, 200, session.state(req.get_param_value("token"))); });
    });

    s.Post(R"(/api/sessions/([^/]+)/submit-(\w+))", [with_session](const httplib::Request& req, httplib::Response& res) {
        with_session(req, res, [&](LiveSession& session) {
            const json body = body_of(req);
            const auto state = session.submit(body.value("token", ""), req.matches[2], body);
            reply(res, 200, {{"type", "ack"}, {"action", std::string(req.matches[2])}, {"state", state}});
        });
    });

    s.Post(R"(/api/sessions/([^/]+)/leave)", [with_session](const httplib::Request& req, httplib::Response& res) {
        with_session(req, res, [&](LiveSession& session) {
            session.leave(body_of(req).value("token", ""));
            reply(res, 200, {{"type", "left"}});
        });
    });

    s.Get(R"(/api/sessions/([^/]+)/stream)", [this, with_session](const httplib::Request& req, httplib::Response& res) {
        with_session(req, res, [&](LiveSession& session) {
            const std::string token = req.get_param_value("token");
            const json first = session.state(token);  // validates the token
            auto keep = this->session(req.matches[1]);
            res.set_header("Cache-Control", "no-cache");
            res.set_chunked_content_provider(
                "text/event-stream", [this, keep, token, first, sent = false](size_t, httplib::DataSink& sink) mutable {
                    if (!running_) return false;
                    std::vector<json> batch;
                    if (!sent) {
                        batch.push_back(first);
                        sent = true;
                    }
                    try {
                        for (auto& m : keep->drain(token, std::chrono::milliseconds(500))) batch.push_back(std::move(m));
                    } catch (const Error&) {
                        return false;
                    }
                    for (const auto& m : batch) {
                        const std::string frame = "data: " + m.dump() + "\n\n";
                        if (!sink.write(frame.data(), frame.size())) return false;
                    }
                    if (batch.empty()) {
                        static const std::string ping = ": ping\n\n";
                        if (!sink.write(ping.data(), ping.size())) return false;
                    }
                    return true;
                });
        });
    });

    if (!options_.static_dir.empty()) s.set_mount_point("/", options_.static_dir);
}

void SessionServer::start() {
    if (running_) return;
    if (!options_.data_dir.empty()) std::filesystem::create_directories(options_.data_dir);
    if (options_.port == 0) {
        port_ = http_->bind_to_any_port(options_.host);
    } else {
        port_ = http_->bind_to_port(options_.host, options_.port) ? options_.port : -1;
    }
    if (port_ <= 0) throw Error("cannot bind " + options_.host + ":" + std::to_string(options_.port));
    running_ = true;
    thread_ = std::thread([this] { http_->listen_after_bind(); });
    ticker_ = std::thread([this] {
        while (running_) {
            std::this_thread::sleep_for(options_.tick_interval);
            std::vector<std::shared_ptr<LiveSession>> all;
            {
                std::lock_guard lock(mutex_);
                for (auto& [_, s] : sessions_) all.push_back(s);
            }
            for (auto& s : all) s->tick();
        }
    });
    http_->wait_until_ready();
}

void SessionServer::wait() {
    if (thread_.joinable()) thread_.join();
}

void SessionServer::stop() {
    if (!running_.exchange(false)) return;
    http_->stop();
    if (thread_.joinable()) thread_.join();
    if (ticker_.joinable()) ticker_.join();
}

}  // namespace psg::session
