#pragma once

#include <memory>
#include <string>
#include <vector>

#include "psg/agents/policies.hpp"
#include "psg/llm/gateway.hpp"
#include "psg/llm/prompts.hpp"

namespace psg::agents {

struct BotSpec {
    std::string name;
    std::string persona;
    std::string profile = "bot";
};

std::vector<BotSpec> default_bot_roster();
std::vector<BotSpec> load_bot_roster(const std::string& path);
std::vector<BotSpec> bot_roster_from_json(const nlohmann::json& j);

// Draws `count` distinct bots from the roster.
std::vector<BotSpec> sample_bots(const std::vector<BotSpec>& roster, int count, Rng& rng);

std::string bot_reply(llm::Gateway& gateway, const llm::EndpointProfile& profile, const BotSpec& spec,
                      const std::string& question, const GameRules& rules = kDefaultRules);

ReturnDecision bot_return(llm::Gateway& gateway, const llm::EndpointProfile& profile, const BotSpec& spec,
                          const std::string& question, const std::string& own_reply,
                          const GameRules& rules = kDefaultRules);

// Parses a model's return answer: a JSON object with key "return", or a bare
// integer. Returns nullopt for anything non-integral or outside the range.
std::optional<int> parse_return_output(const std::string& text, const GameRules& rules = kDefaultRules);

// Candidate backed by the LLM gateway. Stateless across rounds: each prompt
// is built from the persona and the current question only.
class LlmBotCandidate final : public CandidatePolicy {
public:
    LlmBotCandidate(BotSpec spec, std::shared_ptr<llm::Gateway> gateway, llm::EndpointProfile profile,
                    GameRules rules = kDefaultRules);

    std::string reply(const std::string& question, const CandidateContext& ctx, Rng& rng) override;
    ReturnDecision decide_return(const std::string& question, const std::string& own_reply,
                                 const CandidateContext& ctx, Rng& rng) override;

    const BotSpec& spec() const noexcept { return spec_; }

private:
    BotSpec spec_;
    std::shared_ptr<llm::Gateway> gateway_;
    llm::EndpointProfile profile_;
    GameRules rules_;
};

}  // namespace psg::agents
