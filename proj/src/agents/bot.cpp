#include "psg/agents/bot.hpp"

#include <cmath>
#include <fstream>

#include "psg/core/errors.hpp"

namespace psg::agents {

namespace {

const char* kRepromptReply =
    "\n\nYour previous answer was not usable. Respond with a single JSON object with the key 'message' holding a "
    "non-empty reply.";

std::string reprompt_return(const GameRules& rules) {
    return "\n\nYour previous answer was not usable. Respond with a single JSON object with the key 'return' holding "
           "an integer between 0 and " +
           std::to_string(rules.max_return()) + ".";
}

std::optional<std::string> parse_reply_output(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.is_object() && j.contains("message") && j.at("message").is_string()) {
            auto msg = j.at("message").get<std::string>();
            if (!msg.empty()) return msg;
        }
        return std::nullopt;
    } catch (const nlohmann::json::parse_error&) {
        // Plain-text endpoints without JSON mode: accept the raw text.
        if (!text.empty() && text.front() != '{') return text;
        return std::nullopt;
    }
}

}  // namespace

std::vector<BotSpec> default_bot_roster() {
    return {
        {"Maya", "Maya is a 34-year-old nurse from Leeds. She is warm, practical and writes in short friendly sentences."},
        {"Daniel", "Daniel is a retired engineer who loves chess. He is precise, calm and explains his reasoning."},
        {"Priya", "Priya is a graduate student in economics. She is analytical, upbeat and likes fairness."},
        {"Tom", "Tom runs a small bakery. He is cheerful, chatty and uses casual language."},
        {"Elena", "Elena is a high-school teacher. She is patient, encouraging and values honesty."},
        {"Samuel", "Samuel is a software developer and amateur runner. He is direct and concise."},
        {"Aisha", "Aisha is a social worker. She is empathetic and talks about community and trust."},
        {"Lukas", "Lukas is a music student. He is relaxed, humorous and a little poetic."},
        {"Grace", "Grace is an accountant. She is careful, organised and straightforward about numbers."},
        {"Omar", "Omar is a taxi driver and father of three. He is friendly, honest and down to earth."},
    };
}

std::vector<BotSpec> bot_roster_from_json(const nlohmann::json& j) {
    std::vector<BotSpec> out;
    for (const auto& item : j) {
        BotSpec b{item.at("name").get<std::string>(), item.at("persona").get<std::string>(),
                  item.value("profile", "bot")};
        if (b.persona.empty()) throw ConfigError("bot '" + b.name + "' has an empty persona");
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<BotSpec> load_bot_roster(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open bot roster: " + path);
    try {
        return bot_roster_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::vector<BotSpec> sample_bots(const std::vector<BotSpec>& roster, int count, Rng& rng) {
    if (count < 0 || static_cast<std::size_t>(count) > roster.size()) {
        throw ConfigError("bot roster has " + std::to_string(roster.size()) + " entries, need " + std::to_string(count));
    }
    std::vector<BotSpec> pool = roster;
    std::vector<BotSpec> out;
    for (int i = 0; i < count; ++i) {
        const auto j = static_cast<std::size_t>(uniform_int(rng, i, static_cast<int>(pool.size()) - 1));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        out.push_back(pool[static_cast<std::size_t>(i)]);
    }
    return out;
}

std::optional<int> parse_return_output(const std::string& text, const GameRules& rules) {
    std::optional<double> value;
    try {
        const auto j = nlohmann::json::parse(text);
        const nlohmann::json* v = &j;
        if (j.is_object()) {
            if (!j.contains("return")) return std::nullopt;
            v = &j.at("return");
        }
        if (v->is_number()) {
            value = v->get<double>();
        } else if (v->is_string()) {
            value = std::stod(v->get<std::string>());
        }
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (!value || std::floor(*value) != *value) return std::nullopt;
    if (*value < 0 || *value > rules.max_return()) return std::nullopt;
    return static_cast<int>(*value);
}

std::string bot_reply(llm::Gateway& gateway, const llm::EndpointProfile& profile, const BotSpec& spec,
                      const std::string& question, const GameRules& rules) {
    const auto prompt = llm::bot_reply_prompt({spec.name, spec.persona}, question, rules);
    if (auto r = parse_reply_output(gateway.chat(profile, prompt.system, prompt.user))) {
        return clamp_message(*r, rules.max_message_chars);
    }
    if (auto r = parse_reply_output(gateway.chat(profile, prompt.system, prompt.user + kRepromptReply))) {
        return clamp_message(*r, rules.max_message_chars);
    }
    throw MalformedOutput("bot " + spec.name + " produced no usable reply");
}

ReturnDecision bot_return(llm::Gateway& gateway, const llm::EndpointProfile& profile, const BotSpec& spec,
                          const std::string& question, const std::string& own_reply, const GameRules& rules) {
    const auto prompt = llm::bot_return_prompt({spec.name, spec.persona}, question, own_reply, rules);
    if (auto v = parse_return_output(gateway.chat(profile, prompt.system, prompt.user), rules)) {
        return ReturnDecision(*v, rules);
    }
    if (auto v = parse_return_output(gateway.chat(profile, prompt.system, prompt.user + reprompt_return(rules)), rules)) {
        return ReturnDecision(*v, rules);
    }
    throw MalformedOutput("bot " + spec.name + " produced no valid return in [0," +
                          std::to_string(rules.max_return()) + "]");
}

LlmBotCandidate::LlmBotCandidate(BotSpec spec, std::shared_ptr<llm::Gateway> gateway, llm::EndpointProfile profile,
                                 GameRules rules)
    : spec_(std::move(spec)), gateway_(std::move(gateway)), profile_(std::move(profile)), rules_(rules) {
    if (!gateway_) throw InvalidValue("LLM bot needs a gateway");
    if (spec_.persona.empty()) throw InvalidValue("bot persona must be non-empty");
}

std::string LlmBotCandidate::reply(const std::string& question, const CandidateContext&, Rng&) {
    return bot_reply(*gateway_, profile_, spec_, question, rules_);
}

ReturnDecision LlmBotCandidate::decide_return(const std::string& question, const std::string& own_reply,
                                              const CandidateContext&, Rng&) {
    return bot_return(*gateway_, profile_, spec_, question, own_reply, rules_);
}

}  // namespace psg::agents
