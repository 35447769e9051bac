#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "psg/agents/scripted.hpp"
#include "psg/llm/gateway.hpp"
#include "psg/matching/schedule.hpp"

namespace psg::session {

enum class Composition { HumanOnly, Hybrid };
enum class Disclosure { Opaque, Transparent };
enum class BotBackend { Scripted, Llm };
enum class SelectorAgent { Learning, RuleBased };

std::string_view to_string(Composition c) noexcept;
std::string_view to_string(Disclosure d) noexcept;
std::string_view to_string(BotBackend b) noexcept;
std::string_view to_string(SelectorAgent s) noexcept;

// Seconds a live seat may take before the default action is applied.
struct TimeoutPolicy {
    int question = 120;
    int reply = 120;
    int decision = 120;
    int beliefs = 120;
    int guess = 120;
};

struct SessionConfig {
    std::string id = "session";
    std::string preset;
    Composition composition = Composition::Hybrid;
    Disclosure disclosure = Disclosure::Opaque;
    matching::SyncMode sync = matching::SyncMode::Barrier;
    int n_groups = 1;
    int n_rounds = 18;
    int n_selectors = 5;
    int n_human_candidates = 5;
    int n_bot_candidates = 5;
    std::uint64_t seed = 1;
    int round_retries = 2;  // extra attempts for a round that hits a gateway failure

    BotBackend bot_backend = BotBackend::Scripted;
    SelectorAgent selector_agent = SelectorAgent::Learning;
    std::string bot_roster;     // path; empty means the built-in roster
    std::string template_pack;  // path; empty means the built-in pack
    agents::ScriptedCandidateParams human_candidates = agents::human_candidate_defaults();
    agents::ScriptedCandidateParams bot_candidates = agents::bot_candidate_defaults();
    agents::LearningSelectorParams selectors;
    llm::EndpointProfile bot_profile = llm::bot_profile();
    TimeoutPolicy timeouts;
    GameRules rules;

    bool transparent() const noexcept { return disclosure == Disclosure::Transparent; }
    int n_candidates() const noexcept { return n_human_candidates + n_bot_candidates; }
};

const std::vector<std::string>& preset_names();

// Throws ConfigError for an unknown name.
SessionConfig preset(const std::string& name);

// Keys absent from the object keep the values of the named "preset" (if
// any) or of the defaults. Unknown keys and inconsistent values throw
// ConfigError.
SessionConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SessionConfig& c);

// Parses a config file; syntax errors report the line number.
SessionConfig load_config(const std::string& path);

void validate(const SessionConfig& c);

// Hex SHA-256 of the canonical config serialisation.
std::string config_hash(const SessionConfig& c);

}  // namespace psg::session
