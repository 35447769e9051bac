#include "psg/llm/prompts.hpp"

namespace psg::llm {

namespace {

constexpr const char* kQuestionSystem =
    "Your task is to categorize messages from an experiment on partner selection games. The game rules are as "
    "follows: There is one selector and two candidates in one game. The selector is endowed with 10 points and can "
    "decide whether to select one of the candidates to be an investment partner or to keep all the points for "
    "themself. If the selector selects one of the candidates as the partner, the 10 points will all be transferred "
    "to the selected candidate and tripled. The selected candidate can decide how many points out of 30 they want "
    "to return to the selector. The unselected candidate will receive no points. Before making their decision, the "
    "selector can send a question to both candidates to probe their trustworthiness, and the candidates can reply "
    "to convince the selector.\n"
    "The user will provide the selector's question. Your task is to categorize the message into one of the "
    "following 4 categories:\n"
    "1. general questions about candidates' personal traits, including values, preferences, personalities, and "
    "capabilities. These may be related to personal opinions, experiences, or habits. Examples: What is your "
    "favorite color; What do you think of green energy; Do you take risks?\n"
    "2. questions or proposals about the points candidates will return. Examples: How many points will you return; "
    "Will you split the points equally; 50/50?\n"
    "3. asking candidates to prove their trustworthiness or provide reasons to select them. Examples: Convince me "
    "that you are trustworthy; Why should I choose you?\n"
    "4. other categories or cannot be categorized into the above categories.\n"
    "You respond in the JSON format with the key: 'category'. The values should be integers between 1 and 4, "
    "corresponding to the question category.";

constexpr const char* kPromiseSystem =
    "Two players are playing partner selection games. There is one selector and two candidates in one game. The "
    "selector is endowed with 10 points and can decide whether to select one of the candidates to be an investment "
    "partner or to keep all the points for themself. If the selector selects one of the candidates as the partner, "
    "the 10 points will all be transferred to the selected candidate and tripled. The selected candidate can decide "
    "how many points out of 30 they want to return to the selector. The unselected candidate will get no points. "
    "Before the selector decides, they can send a question to both candidates to probe their trustworthiness, and "
    "the candidates can reply to convince the selector.\n"
    "The user will provide the selector's question together with the replies from the two candidates. You "
    "determine for each of the candidate, how many points did they promise to return to the selector. You respond "
    "in the JSON format with two keys: 'promise_a' and 'promise_b', corresponding to the promise made by candidate A "
    "and candidate B, respectively. The values should be integers between -1 and 30, where -1 means the candidate "
    "did not make a specific promise.";

std::string game_rules_text(const GameRules& r) {
    const auto e = std::to_string(r.endowment);
    const auto pot = std::to_string(r.pot());
    return "You are playing a partner selection game as a candidate. In each game there is one selector and two "
           "candidates. The selector is endowed with " +
           e +
           " points and can choose one of the two candidates as an investment partner or keep all the points. If "
           "you are selected, the " +
           e + " points are tripled and you receive " + pot + " points; you then decide how many of the " + pot +
           " points to return to the selector. If you are not selected, you receive no points. Before deciding, the "
           "selector sends one question to both candidates, and each candidate replies to convince the selector to "
           "choose them.";
}

std::string persona_text(const BotPersona& bot) {
    return "Your name is " + bot.name + ". " + bot.persona;
}

std::string question_line(const std::string& question) {
    if (question.empty()) return "The selector sent an empty question (no text).";
    return "The selector's question: \"" + question + "\"";
}

}  // namespace

PromptPair question_category_prompt(const std::string& selector_message) {
    return {kQuestionSystem, "Selector's question: " + selector_message};
}

PromptPair promise_prompt(const std::string& selector_message, const std::string& reply_a,
                          const std::string& reply_b) {
    return {kPromiseSystem,
            "Selector: " + selector_message + "\nCandidate A: " + reply_a + "\nCandidate B: " + reply_b};
}

PromptPair bot_reply_prompt(const BotPersona& bot, const std::string& question, const GameRules& rules) {
    const std::string system = persona_text(bot) + "\n\n" + game_rules_text(rules) +
                               "\n\nRespond in JSON format with the key 'message', whose value is your reply to "
                               "the selector written in your own voice.";
    return {system, question_line(question) + "\nWrite your reply to the selector."};
}

PromptPair bot_return_prompt(const BotPersona& bot, const std::string& question, const std::string& own_reply,
                             const GameRules& rules) {
    const std::string system = persona_text(bot) + "\n\n" + game_rules_text(rules) +
                               "\n\nRespond in JSON format with the key 'return', whose value is an integer between "
                               "0 and " +
                               std::to_string(rules.max_return()) +
                               ": the points you will return to the selector if you are selected.";
    return {system, question_line(question) + "\nYour reply: \"" + own_reply +
                        "\"\nHow many points will you return to the selector if you are selected?"};
}

}  // namespace psg::llm
