#pragma once

#include <string>
#include <utility>

#include "psg/core/rules.hpp"
#include "psg/llm/gateway.hpp"

namespace psg::analysis {

struct PromiseParse {
    bool made = false;
    int amount = -1;  // -1 when no specific promise

    friend bool operator==(const PromiseParse&, const PromiseParse&) = default;
};

// Offline promise reading: the earliest integer 0..30 (digits or English
// number words) within three words of return/give/send/back, or a "half",
// "50/50", "50-50" or "50%" phrase, which maps to 15.
PromiseParse extract_promise_regex(const std::string& reply);

// Both candidates' promises from the text-analysis model. Values outside
// [-1, 30] count as malformed.
std::pair<PromiseParse, PromiseParse> extract_promises_llm(llm::Gateway& gateway, const llm::EndpointProfile& profile,
                                                           const std::string& question, const std::string& reply_a,
                                                           const std::string& reply_b);

QuestionCategory category_from_index(int index);

QuestionCategory classify_question(llm::Gateway& gateway, const llm::EndpointProfile& profile,
                                   const std::string& question);

}  // namespace psg::analysis
