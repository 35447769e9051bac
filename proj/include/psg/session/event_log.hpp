#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "psg/core/rules.hpp"
#include "psg/model/fitting.hpp"

namespace psg::session {

inline constexpr const char* kEventLogSchema = "psg.eventlog/1";

// Who an event is delivered to. "server" events are audit records that no
// seat ever receives.
enum class Audience { Server, Selector, CandidateA, CandidateB, Candidates, Triad };

std::string_view to_string(Audience a) noexcept;

// Append-only sequence of typed events. Every event carries a logical
// timestamp ("seq"), the session id and its audience; nothing is mutated
// after append.
class EventLog {
public:
    EventLog() = default;
    explicit EventLog(std::string session_id);

    const nlohmann::json& append(const std::string& type, Audience audience, nlohmann::json fields = nlohmann::json::object());

    const std::vector<nlohmann::json>& events() const noexcept { return events_; }
    const std::string& session() const noexcept { return session_; }
    std::size_t size() const noexcept { return events_.size(); }

    // One compact JSON object per line.
    void write(std::ostream& out) const;
    std::string str() const;

    // Throws InvalidValue for unreadable lines or a schema mismatch.
    static EventLog parse(std::istream& in);
    static EventLog load(const std::string& path);

private:
    std::string session_;
    std::vector<nlohmann::json> events_;
};

nlohmann::json player_json(const PlayerId& p);
PlayerId player_from_json(const nlohmann::json& j);
nlohmann::json record_json(const RoundRecord& r);
RoundRecord record_from_json(const nlohmann::json& j);

// Round records from the "round_complete" events, in log order.
std::vector<RoundRecord> import_records(const EventLog& log);

// Pooled fitting dataset: one group per (session, group), one selector
// series per selector in round order.
model::FitDataset fit_dataset_from_records(const std::vector<RoundRecord>& records, const std::string& prefix);
model::FitDataset fit_dataset_from_logs(const std::vector<EventLog>& logs);

// Replays every round through the phase machine and the payoff rules;
// returns one message per discrepancy (empty when the log is consistent).
std::vector<std::string> verify_log(const EventLog& log, const GameRules& rules = kDefaultRules);

// In opaque sessions no seat-facing event may mention a candidate kind; in
// transparent sessions every reveal must carry both kinds.
std::vector<std::string> disclosure_violations(const EventLog& log);

struct Bonus {
    std::vector<int> rounds;  // sampled round indices
    int points = 0;
    double amount = 0.0;
};

// Sum of the player's points in three distinct uniformly drawn rounds at
// 0.10 per point, capped to [0, 9]. Throws InsufficientRounds below three.
Bonus compute_bonus(const std::vector<RoundRecord>& records, const PlayerId& player, Rng& rng);

}  // namespace psg::session
