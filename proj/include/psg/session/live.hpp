#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "psg/core/errors.hpp"
#include "psg/core/phase.hpp"
#include "psg/session/simulation.hpp"

namespace psg::session {

class AuthError : public Error {
public:
    using Error::Error;
};

using Clock = std::chrono::steady_clock;

struct LiveOptions {
    // Seat labels ("g0.s0", "g0.c3") reserved for people; every other seat
    // is played by an agent.
    std::vector<std::string> human_seats{"g0.s0"};
    std::shared_ptr<llm::Gateway> gateway;
    PolicyFactory factory;
    std::function<Clock::time_point()> clock;  // defaults to steady_clock::now
    std::string log_path;                      // events are appended here as they happen
};

// One live session: a single group played in barrier mode. All mutations
// go through one mutex, so every session has a total event order.
class LiveSession {
public:
    LiveSession(SessionConfig config, LiveOptions options);

    const std::string& id() const noexcept { return config_.id; }
    const SessionConfig& config() const noexcept { return config_; }

    // Claims a free human seat (the first one when `seat` is empty) and
    // returns its token. Throws AuthError when none is free.
    std::pair<std::string, std::string> join(const std::string& seat = "");

    nlohmann::json state(const std::string& token) const;

    // action is one of question, reply, return, choice, beliefs, guess.
    // Throws AuthError, IllegalEvent (wrong role or phase) or InvalidValue.
    // A payload "idempotency_key" already accepted from this seat is
    // acknowledged again without being applied.
    nlohmann::json submit(const std::string& token, const std::string& action, const nlohmann::json& payload);

    // The seat is handed to a scripted agent for the rest of the session.
    void leave(const std::string& token);

    // Applies default actions for every human submission past its deadline.
    void tick();

    // Messages queued for a seat since the last call; waits up to `wait`
    // when none are pending.
    std::vector<nlohmann::json> drain(const std::string& token, std::chrono::milliseconds wait = std::chrono::milliseconds(0));

    bool finished() const;
    std::optional<std::string> error() const;
    EventLog log() const;

private:
    struct Seat {
        PlayerId id;
        std::string label;
        bool human = false;
        std::string token;
        std::deque<nlohmann::json> outbox;
        std::set<std::string> accepted_keys;
    };

    struct Pending {
        RoundEvent event;
        Clock::time_point deadline;
    };

    struct TriadRound {
        int selector = 0, cand_a = 0, cand_b = 0;
        RoundProgress progress;
        RoundRecord rec;
        int slider_a = 0, slider_b = 0;
        Rng sel_rng, rng_a, rng_b;
        std::optional<Clock::time_point> deadline;  // for the current phase
        bool done = false;
    };

    Seat& seat_by_token(const std::string& token);
    const Seat& seat_by_token(const std::string& token) const;
    Seat& seat_of(const PlayerId& p);
    bool is_human(const PlayerId& p) const;
    TriadRound* triad_of(const PlayerId& p);
    const TriadRound* triad_of(const PlayerId& p) const;
    static std::optional<Slot> slot_of(const TriadRound& t, const PlayerId& p);

    const nlohmann::json& emit(const std::string& type, Audience audience, const TriadRound* t, nlohmann::json fields);
    void start_round();
    void apply(TriadRound& t, RoundEvent e, const nlohmann::json& payload, bool timed_out);
    void enter_phase(TriadRound& t);
    void pump();
    void finish_round();
    void persist();
    int timeout_for(RoundPhase p) const;
    Clock::time_point now() const;
    nlohmann::json view(const Seat& s) const;

    SessionConfig config_;
    LiveOptions options_;
    matching::Schedule schedule_;
    GroupPolicies policies_;
    Seed root_;
    std::vector<Seat> seats_;

    mutable std::mutex mutex_;
    std::condition_variable changed_;
    EventLog log_;
    std::size_t persisted_ = 0;
    int round_ = -1;
    std::vector<TriadRound> triads_;
    std::vector<RoundRecord> records_;
    bool finished_ = false;
    std::optional<std::string> error_;
};

// Default action used when a live submission times out: empty question or
// reply, the slider start value for a return, Keep for the choice, 10/10
// beliefs and a Keep guess.
nlohmann::json timeout_default(RoundEvent e, int slider_value, const GameRules& rules = kDefaultRules);

}  // namespace psg::session
