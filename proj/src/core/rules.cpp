#include "psg/core/rules.hpp"

#include "psg/core/errors.hpp"

namespace psg {

std::string_view to_string(Role r) noexcept {
    return r == Role::Selector ? "selector" : "candidate";
}

std::string_view to_string(Kind k) noexcept {
    return k == Kind::Human ? "human" : "bot";
}

std::string_view to_string(SelectorChoice c) noexcept {
    switch (c) {
        case SelectorChoice::InvestA: return "invest_a";
        case SelectorChoice::InvestB: return "invest_b";
        case SelectorChoice::Keep: return "keep";
    }
    return "keep";
}

std::string_view to_string(Slot s) noexcept {
    return s == Slot::A ? "A" : "B";
}

std::string_view to_string(QuestionCategory q) noexcept {
    switch (q) {
        case QuestionCategory::Traits: return "traits";
        case QuestionCategory::Points: return "points";
        case QuestionCategory::Reasons: return "reasons";
        case QuestionCategory::Other: return "other";
    }
    return "other";
}

QuestionCategory question_category_from_string(std::string_view s) {
    if (s == "traits") return QuestionCategory::Traits;
    if (s == "points") return QuestionCategory::Points;
    if (s == "reasons") return QuestionCategory::Reasons;
    if (s == "other") return QuestionCategory::Other;
    throw InvalidValue("unknown question category: " + std::string(s));
}

Role role_from_string(std::string_view s) {
    if (s == "selector") return Role::Selector;
    if (s == "candidate") return Role::Candidate;
    throw InvalidValue("unknown role: " + std::string(s));
}

Kind kind_from_string(std::string_view s) {
    if (s == "human") return Kind::Human;
    if (s == "bot") return Kind::Bot;
    throw InvalidValue("unknown kind: " + std::string(s));
}

SelectorChoice choice_from_string(std::string_view s) {
    if (s == "invest_a") return SelectorChoice::InvestA;
    if (s == "invest_b") return SelectorChoice::InvestB;
    if (s == "keep") return SelectorChoice::Keep;
    throw InvalidValue("unknown choice: " + std::string(s));
}

std::string PlayerId::label() const {
    return "g" + std::to_string(group) + (role == Role::Selector ? ".s" : ".c") + std::to_string(index);
}

void validate(const PlayerId& id) {
    if (id.role == Role::Selector && id.kind != Kind::Human) {
        throw InvalidValue("selectors are always human: " + id.label());
    }
    if (id.index < 0 || id.group < 0) throw InvalidValue("negative player index: " + id.label());
}

Triad make_triad(const PlayerId& selector, const PlayerId& a, const PlayerId& b) {
    validate(selector);
    validate(a);
    validate(b);
    if (selector.role != Role::Selector) throw InvalidValue("triad selector has candidate role");
    if (a.role != Role::Candidate || b.role != Role::Candidate) {
        throw InvalidValue("triad candidates must have candidate role");
    }
    if (a == b || a.index == b.index) throw InvalidValue("triad candidates must differ");
    if (a.group != selector.group || b.group != selector.group) {
        throw InvalidValue("triad members must share one group");
    }
    return Triad{selector, a, b};
}

ReturnDecision::ReturnDecision(int amount, const GameRules& rules) : amount_(amount) {
    if (amount < 0 || amount > rules.max_return()) {
        throw InvalidValue("return " + std::to_string(amount) + " outside [0," +
                           std::to_string(rules.max_return()) + "]");
    }
}

BeliefReport make_belief_report(int a, int b, const GameRules& rules) {
    const auto check = [&](int v) {
        if (v < 0 || v > rules.max_return()) {
            throw InvalidValue("belief " + std::to_string(v) + " outside [0," +
                               std::to_string(rules.max_return()) + "]");
        }
    };
    check(a);
    check(b);
    return BeliefReport{a, b};
}

Payoffs settle_round(SelectorChoice choice, ReturnDecision return_a, ReturnDecision return_b,
                     const GameRules& rules) {
    const int pot = rules.pot();
    switch (choice) {
        case SelectorChoice::Keep:
            return {rules.endowment, 0, 0};
        case SelectorChoice::InvestA:
            return {return_a.amount(), pot - return_a.amount(), 0};
        case SelectorChoice::InvestB:
            return {return_b.amount(), 0, pot - return_b.amount()};
    }
    return {rules.endowment, 0, 0};
}

int random_slider_init(Rng& rng, const GameRules& rules) {
    return uniform_int(rng, 0, rules.max_return());
}

std::size_t message_length(std::string_view text) noexcept {
    std::size_t n = 0;
    for (unsigned char c : text) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

std::string clamp_message(std::string_view text, std::size_t max_chars) {
    std::size_t chars = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto c = static_cast<unsigned char>(text[i]);
        if ((c & 0xC0) != 0x80) {
            if (chars == max_chars) return std::string(text.substr(0, i));
            ++chars;
        }
    }
    return std::string(text);
}

}  // namespace psg
