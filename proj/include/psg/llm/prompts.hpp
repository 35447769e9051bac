#pragma once

#include <string>

#include "psg/core/rules.hpp"

namespace psg::llm {

struct PromptPair {
    std::string system;
    std::string user;
};

// Selector-question categorisation (four categories, JSON key 'category').
PromptPair question_category_prompt(const std::string& selector_message);

// Promise encoding for both replies (JSON keys 'promise_a', 'promise_b').
PromptPair promise_prompt(const std::string& selector_message, const std::string& reply_a,
                          const std::string& reply_b);

struct BotPersona {
    std::string name;
    std::string persona;
};

// Bot prompts carry the persona, the game rules and the output format.
// They never include the competing candidate's reply, other rounds, or the
// identity-disclosure condition.
PromptPair bot_reply_prompt(const BotPersona& bot, const std::string& question, const GameRules& rules = kDefaultRules);
PromptPair bot_return_prompt(const BotPersona& bot, const std::string& question, const std::string& own_reply,
                             const GameRules& rules = kDefaultRules);

}  // namespace psg::llm
