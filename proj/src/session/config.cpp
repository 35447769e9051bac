#include "psg/session/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "psg/core/errors.hpp"

namespace psg::session {

std::string_view to_string(Composition c) noexcept { return c == Composition::Hybrid ? "hybrid" : "human-only"; }
std::string_view to_string(Disclosure d) noexcept { return d == Disclosure::Transparent ? "transparent" : "opaque"; }
std::string_view to_string(BotBackend b) noexcept { return b == BotBackend::Llm ? "llm" : "scripted"; }
std::string_view to_string(SelectorAgent s) noexcept { return s == SelectorAgent::RuleBased ? "rule-based" : "learning"; }

namespace {

template <typename E>
E parse_enum(const nlohmann::json& j, const char* key, std::initializer_list<E> values) {
    const auto s = j.at(key).get<std::string>();
    for (E v : values) {
        if (to_string(v) == s) return v;
    }
    throw ConfigError(std::string("bad value for ") + key + ": " + s);
}

nlohmann::json profile_to_json(const llm::EndpointProfile& p) {
    return {{"id", p.id},
            {"base_url", p.base_url},
            {"model", p.model},
            {"temperature", p.temperature},
            {"max_tokens", p.max_tokens},
            {"top_p", p.top_p},
            {"json_object", p.json_object},
            {"auth_env", p.auth_env},
            {"requests_per_second", p.requests_per_second},
            {"timeout_seconds", p.timeout_seconds}};
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"study1-human-only", "study1-opaque",      "study2-opaque",
                                                "study2-transparent", "study3-opaque", "study3-transparent"};
    return names;
}

SessionConfig preset(const std::string& name) {
    SessionConfig c;
    c.preset = name;
    c.id = name;
    c.n_groups = 15;
    if (name == "study1-human-only") {
        c.composition = Composition::HumanOnly;
        c.sync = matching::SyncMode::Pool;
        c.n_human_candidates = 10;
        c.n_bot_candidates = 0;
        c.n_rounds = 9;
    } else if (name == "study1-opaque") {
        c.sync = matching::SyncMode::Pool;
        c.n_rounds = 9;
    } else if (name == "study2-opaque" || name == "study2-transparent") {
        c.n_rounds = 10;
        if (name == "study2-transparent") c.disclosure = Disclosure::Transparent;
    } else if (name == "study3-opaque" || name == "study3-transparent") {
        c.n_rounds = 18;
        if (name == "study3-transparent") c.disclosure = Disclosure::Transparent;
    } else {
        throw ConfigError("unknown preset: " + name);
    }
    return c;
}

void validate(const SessionConfig& c) {
    if (c.id.empty()) throw ConfigError("id must be nonempty");
    if (c.n_groups < 1) throw ConfigError("n_groups must be >= 1");
    if (c.n_rounds < 1) throw ConfigError("n_rounds must be >= 1");
    if (c.n_selectors < 1) throw ConfigError("n_selectors must be >= 1");
    if (c.n_human_candidates < 0 || c.n_bot_candidates < 0) throw ConfigError("candidate counts must be >= 0");
    if (c.n_candidates() < 2) throw ConfigError("at least two candidates are needed");
    if (c.composition == Composition::HumanOnly && c.n_bot_candidates != 0) {
        throw ConfigError("human-only composition cannot include bot candidates");
    }
    if (c.composition == Composition::Hybrid && c.n_bot_candidates == 0) {
        throw ConfigError("hybrid composition needs bot candidates");
    }
    if (c.round_retries < 0) throw ConfigError("round_retries must be >= 0");
    for (int t : {c.timeouts.question, c.timeouts.reply, c.timeouts.decision, c.timeouts.beliefs, c.timeouts.guess}) {
        if (t <= 0) throw ConfigError("timeouts must be positive");
    }
    if (c.rules.max_message_chars == 0) throw ConfigError("max_message_chars must be positive");
}

SessionConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known{
        "id",           "preset",           "composition",     "disclosure",     "sync",
        "n_groups",     "n_rounds",         "n_selectors",     "n_human_candidates", "n_bot_candidates",
        "seed",         "round_retries",    "bot_backend",     "selector_agent", "bot_roster",
        "template_pack", "human_candidates", "bot_candidates", "selectors",      "bot_profile",
        "timeouts",     "max_message_chars"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw ConfigError("unknown config key: " + key);
    }
    try {
        const std::string base = j.value("preset", std::string());
        SessionConfig c = base.empty() ? SessionConfig{} : preset(base);
        c.id = j.value("id", c.id);
        if (j.contains("composition")) {
            c.composition = parse_enum(j, "composition", {Composition::HumanOnly, Composition::Hybrid});
        }
        if (j.contains("disclosure")) {
            c.disclosure = parse_enum(j, "disclosure", {Disclosure::Opaque, Disclosure::Transparent});
        }
        if (j.contains("sync")) c.sync = matching::sync_mode_from_string(j.at("sync").get<std::string>());
        c.n_groups = j.value("n_groups", c.n_groups);
        c.n_rounds = j.value("n_rounds", c.n_rounds);
        c.n_selectors = j.value("n_selectors", c.n_selectors);
        c.n_human_candidates = j.value("n_human_candidates", c.n_human_candidates);
        c.n_bot_candidates = j.value("n_bot_candidates", c.n_bot_candidates);
        c.seed = j.value("seed", c.seed);
        c.round_retries = j.value("round_retries", c.round_retries);
        if (j.contains("bot_backend")) c.bot_backend = parse_enum(j, "bot_backend", {BotBackend::Scripted, BotBackend::Llm});
        if (j.contains("selector_agent")) {
            c.selector_agent = parse_enum(j, "selector_agent", {SelectorAgent::Learning, SelectorAgent::RuleBased});
        }
        c.bot_roster = j.value("bot_roster", c.bot_roster);
        c.template_pack = j.value("template_pack", c.template_pack);
        if (j.contains("human_candidates")) {
            c.human_candidates = agents::scripted_params_from_json(j.at("human_candidates"), c.human_candidates);
        }
        if (j.contains("bot_candidates")) {
            c.bot_candidates = agents::scripted_params_from_json(j.at("bot_candidates"), c.bot_candidates);
        }
        if (j.contains("selectors")) c.selectors = agents::learning_params_from_json(j.at("selectors"), c.selectors);
        if (j.contains("bot_profile")) c.bot_profile = llm::profile_from_json(j.at("bot_profile"), c.bot_profile);
        if (j.contains("timeouts")) {
            const auto& t = j.at("timeouts");
            c.timeouts.question = t.value("question", c.timeouts.question);
            c.timeouts.reply = t.value("reply", c.timeouts.reply);
            c.timeouts.decision = t.value("decision", c.timeouts.decision);
            c.timeouts.beliefs = t.value("beliefs", c.timeouts.beliefs);
            c.timeouts.guess = t.value("guess", c.timeouts.guess);
        }
        c.rules.max_message_chars = j.value("max_message_chars", c.rules.max_message_chars);
        validate(c);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const InvalidValue& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

nlohmann::json to_json(const SessionConfig& c) {
    return {{"id", c.id},
            {"preset", c.preset},
            {"composition", to_string(c.composition)},
            {"disclosure", to_string(c.disclosure)},
            {"sync", matching::to_string(c.sync)},
            {"n_groups", c.n_groups},
            {"n_rounds", c.n_rounds},
            {"n_selectors", c.n_selectors},
            {"n_human_candidates", c.n_human_candidates},
            {"n_bot_candidates", c.n_bot_candidates},
            {"seed", c.seed},
            {"round_retries", c.round_retries},
            {"bot_backend", to_string(c.bot_backend)},
            {"selector_agent", to_string(c.selector_agent)},
            {"bot_roster", c.bot_roster},
            {"template_pack", c.template_pack},
            {"human_candidates", agents::to_json(c.human_candidates)},
            {"bot_candidates", agents::to_json(c.bot_candidates)},
            {"selectors", agents::to_json(c.selectors)},
            {"bot_profile", profile_to_json(c.bot_profile)},
            {"timeouts",
             {{"question", c.timeouts.question},
              {"reply", c.timeouts.reply},
              {"decision", c.timeouts.decision},
              {"beliefs", c.timeouts.beliefs},
              {"guess", c.timeouts.guess}}},
            {"max_message_chars", c.rules.max_message_chars}};
}

SessionConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto upto = std::min(text.size(), e.byte == 0 ? std::size_t{0} : e.byte - 1);
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw ConfigError(path + ":" + std::to_string(line) + ": " + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string config_hash(const SessionConfig& c) { return llm::sha256_hex(to_json(c).dump()); }

}  // namespace psg::session
