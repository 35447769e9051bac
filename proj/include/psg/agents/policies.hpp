#pragma once

#include <optional>
#include <string>

#include "psg/core/rng.hpp"
#include "psg/core/rules.hpp"

namespace psg::agents {

// What a candidate sees while composing its reply and return. The
// competitor's reply is deliberately not part of it.
struct CandidateContext {
    int round = 0;
    Slot slot = Slot::A;
};

// After the simultaneous reveal candidates guess the selector's choice.
struct GuessContext {
    int round = 0;
    Slot slot = Slot::A;
    std::string question;
    std::string reply_a;
    std::string reply_b;
};

class CandidatePolicy {
public:
    virtual ~CandidatePolicy() = default;

    virtual std::string reply(const std::string& question, const CandidateContext& ctx, Rng& rng) = 0;
    virtual ReturnDecision decide_return(const std::string& question, const std::string& own_reply,
                                         const CandidateContext& ctx, Rng& rng) = 0;
    virtual SelectorChoice guess_choice(const GuessContext& ctx, Rng& rng);
};

// The selector's view of a round. shown_* is set only when identities are
// disclosed. true_* is simulator-side ground truth consumed by learning
// selectors for their model updates and reports; live clients never see it.
struct SelectorView {
    int round = 0;
    std::string question;
    std::string reply_a;
    std::string reply_b;
    std::optional<Kind> shown_a;
    std::optional<Kind> shown_b;
    Kind true_a = Kind::Human;
    Kind true_b = Kind::Human;
};

struct RoundFeedback {
    SelectorChoice choice = SelectorChoice::Keep;
    int return_a = 0;
    int return_b = 0;
    Kind true_a = Kind::Human;
    Kind true_b = Kind::Human;
};

class SelectorPolicy {
public:
    virtual ~SelectorPolicy() = default;

    virtual std::string ask(int round, Rng& rng) = 0;
    virtual SelectorChoice choose(const SelectorView& view, Rng& rng) = 0;
    virtual BeliefReport report_beliefs(const SelectorView& view, Rng& rng) = 0;
    virtual void observe(const RoundFeedback&) {}
};

// P(option) proportional to exp(beta * value); beta = +inf is argmax with
// uniform tie-breaking.
SelectorChoice softmax_choose(double value_a, double value_b, double keep_value, double beta, Rng& rng);

// Invests in the strictly longer reply (characters); ties split uniformly.
// Never keeps.
SelectorChoice rule_based_choose(const std::string& reply_a, const std::string& reply_b, Rng& rng);

}  // namespace psg::agents
