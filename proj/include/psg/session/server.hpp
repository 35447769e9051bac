#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "psg/session/live.hpp"

namespace httplib {
class Server;
}

namespace psg::session {

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    std::string data_dir;    // session logs land here when set
    std::string static_dir;  // web client bundle, served at / when set
    std::shared_ptr<llm::Gateway> gateway;
    SessionConfig base_config = preset("study3-transparent");
    std::chrono::milliseconds tick_interval{250};
};

// HTTP front end for live sessions. All payloads are JSON objects with a
// "type" field. Seat updates are pushed as server-sent events on
// GET /api/sessions/{id}/stream; submissions go through POST.
//
//   GET  /health
//   POST /api/sessions                        {"preset"?, "config"?, "human_seats"?}
//   POST /api/sessions/{id}/join              {"seat"?}
//   GET  /api/sessions/{id}/state?token=
//   POST /api/sessions/{id}/submit-{action}   {"token", ...}
//   POST /api/sessions/{id}/leave             {"token"}
//   GET  /api/sessions/{id}/stream?token=
class SessionServer {
public:
    explicit SessionServer(ServerOptions options);
    ~SessionServer();

    // Binds and starts serving on a background thread. Throws Error when
    // the address cannot be bound.
    void start();
    void stop();
    int port() const noexcept { return port_; }

    // Blocks until stop() is called from another thread.
    void wait();

    std::shared_ptr<LiveSession> session(const std::string& id) const;
    std::size_t session_count() const;

private:
    void routes();

    ServerOptions options_;
    std::unique_ptr<httplib::Server> http_;
    std::thread thread_;
    std::thread ticker_;
    std::atomic<bool> running_{false};
    int port_ = 0;

    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<LiveSession>> sessions_;
    int next_id_ = 0;
};

}  // namespace psg::session
