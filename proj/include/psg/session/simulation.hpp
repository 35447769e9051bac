#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "psg/agents/bot.hpp"
#include "psg/agents/policies.hpp"
#include "psg/session/config.hpp"
#include "psg/session/event_log.hpp"

namespace psg::session {

// Every seat of one group. Candidate index c has kind candidate_kinds[c];
// bot_names is parallel to the candidates (empty for humans).
struct GroupPolicies {
    std::vector<std::unique_ptr<agents::SelectorPolicy>> selectors;
    std::vector<std::unique_ptr<agents::CandidatePolicy>> candidates;
    std::vector<Kind> candidate_kinds;
    std::vector<std::string> bot_names;
};

using PolicyFactory = std::function<GroupPolicies(const SessionConfig&, int group, const Seed& group_seed)>;

struct SimulationOptions {
    std::shared_ptr<llm::Gateway> gateway;  // required for the llm bot backend
    PolicyFactory factory;                  // defaults to default_policies
};

// Kinds are shuffled over candidate indices so an index reveals nothing.
// Humans are scripted stand-ins; bots are scripted or gateway-backed per
// the config.
GroupPolicies default_policies(const SessionConfig& config, int group, const Seed& group_seed,
                               std::shared_ptr<llm::Gateway> gateway);

// Runs every group headlessly. Schedules are built (barrier) or the pool
// budget checked before the first round, so Infeasible never leaves a
// partial log. A round that hits GatewayError is logged as aborted and
// rerun up to config.round_retries times.
EventLog run_simulation(const SessionConfig& config, const SimulationOptions& options = {});

}  // namespace psg::session
