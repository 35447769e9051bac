#include "psg/analysis/text.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <regex>
#include <vector>

#include "psg/core/errors.hpp"
#include "psg/llm/prompts.hpp"

namespace psg::analysis {

namespace {

const std::map<std::string, int>& number_words() {
    static const std::map<std::string, int> words{
        {"zero", 0},      {"two", 2},        {"three", 3},     {"four", 4},
        {"five", 5},      {"six", 6},       {"seven", 7},      {"eight", 8},     {"nine", 9},
        {"ten", 10},      {"eleven", 11},   {"twelve", 12},    {"thirteen", 13}, {"fourteen", 14},
        {"fifteen", 15},  {"sixteen", 16},  {"seventeen", 17}, {"eighteen", 18}, {"nineteen", 19},
        {"twenty", 20},   {"thirty", 30}};
    return words;
}

bool is_keyword(const std::string& w) {
    static const std::vector<std::string> stems{"return", "give", "giving", "gave", "send", "sent", "back"};
    return std::any_of(stems.begin(), stems.end(), [&](const std::string& s) { return w.rfind(s, 0) == 0; });
}

struct Token {
    std::size_t pos;
    std::string text;
};

std::optional<int> number_at(const std::vector<Token>& tokens, std::size_t i) {
    const auto& t = tokens[i].text;
    if (std::isdigit(static_cast<unsigned char>(t[0]))) {
        if (t.size() > 2) return std::nullopt;
        return std::stoi(t);
    }
    const auto it = number_words().find(t);
    if (it == number_words().end()) return std::nullopt;
    int v = it->second;
    // "twenty five" / "twenty-five"
    if (v == 20 && i + 1 < tokens.size()) {
        const auto unit = number_words().find(tokens[i + 1].text);
        if (unit != number_words().end() && unit->second >= 1 && unit->second <= 9) v += unit->second;
    }
    return v;
}

}  // namespace

PromiseParse extract_promise_regex(const std::string& reply) {
    std::string text = reply;
    std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });

    std::optional<std::pair<std::size_t, int>> best;
    const auto offer = [&](std::size_t pos, int value) {
        if (!best || pos < best->first) best = {pos, value};
    };

    static const std::regex halves(R"(\bhalf\b|\b50\s*[/-]\s*50\b|\b50\s*(%|percent\b))");
    for (auto it = std::sregex_iterator(text.begin(), text.end(), halves); it != std::sregex_iterator(); ++it) {
        offer(static_cast<std::size_t>(it->position()), 15);
        break;
    }

    static const std::regex word(R"([a-z]+|\d+)");
    std::vector<Token> tokens;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), word); it != std::sregex_iterator(); ++it) {
        tokens.push_back({static_cast<std::size_t>(it->position()), it->str()});
    }
    constexpr std::size_t kWindow = 3;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto value = number_at(tokens, i);
        if (!value || *value > 30) continue;
        const std::size_t lo = i >= kWindow ? i - kWindow : 0;
        const std::size_t hi = std::min(tokens.size() - 1, i + kWindow);
        bool near = false;
        for (std::size_t j = lo; j <= hi && !near; ++j) near = j != i && is_keyword(tokens[j].text);
        if (near) {
            offer(tokens[i].pos, *value);
            break;
        }
    }
    if (!best) return {};
    return {true, best->second};
}

namespace {

std::optional<int> as_int(const llm::Json& v) {
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d == static_cast<int>(d)) return static_cast<int>(d);
        return std::nullopt;
    }
    if (v.is_string()) {
        try {
            std::size_t used = 0;
            const int i = std::stoi(v.get<std::string>(), &used);
            if (used == v.get<std::string>().size()) return i;
        } catch (const std::exception&) {
        }
    }
    return std::nullopt;
}

PromiseParse to_parse(int v) {
    if (v == -1) return {};
    return {true, v};
}

}  // namespace

std::pair<PromiseParse, PromiseParse> extract_promises_llm(llm::Gateway& gateway, const llm::EndpointProfile& profile,
                                                           const std::string& question, const std::string& reply_a,
                                                           const std::string& reply_b) {
    const auto prompt = llm::promise_prompt(question, reply_a, reply_b);
    const auto in_range = [](const llm::Json& v) {
        const auto i = as_int(v);
        return i && *i >= -1 && *i <= 30;
    };
    const auto j = gateway.chat_json(profile, prompt.system, prompt.user, {"promise_a", "promise_b"},
                                     [&](const llm::Json& o) { return in_range(o.at("promise_a")) && in_range(o.at("promise_b")); });
    return {to_parse(*as_int(j["promise_a"])), to_parse(*as_int(j["promise_b"]))};
}

QuestionCategory category_from_index(int index) {
    switch (index) {
        case 1: return QuestionCategory::Traits;
        case 2: return QuestionCategory::Points;
        case 3: return QuestionCategory::Reasons;
        case 4: return QuestionCategory::Other;
        default: throw MalformedOutput("question category must be 1..4, got " + std::to_string(index));
    }
}

QuestionCategory classify_question(llm::Gateway& gateway, const llm::EndpointProfile& profile,
                                   const std::string& question) {
    const auto prompt = llm::question_category_prompt(question);
    const auto j = gateway.chat_json(profile, prompt.system, prompt.user, {"category"}, [](const llm::Json& o) {
        const auto i = as_int(o.at("category"));
        return i && *i >= 1 && *i <= 4;
    });
    return category_from_index(*as_int(j["category"]));
}

}  // namespace psg::analysis
