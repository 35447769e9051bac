#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "psg/core/rng.hpp"

namespace psg {

// Game constants live in one place so variants can be configured.
struct GameRules {
    int endowment = 10;
    int multiplier = 3;
    std::size_t max_message_chars = 280;

    int pot() const noexcept { return endowment * multiplier; }
    int max_return() const noexcept { return pot(); }
};

inline constexpr GameRules kDefaultRules{};

enum class Role { Selector, Candidate };
enum class Kind { Human, Bot };
enum class SelectorChoice { InvestA, InvestB, Keep };
enum class Slot { A, B };
enum class QuestionCategory { Traits, Points, Reasons, Other };

std::string_view to_string(Role r) noexcept;
std::string_view to_string(Kind k) noexcept;
std::string_view to_string(SelectorChoice c) noexcept;
std::string_view to_string(Slot s) noexcept;
std::string_view to_string(QuestionCategory q) noexcept;
QuestionCategory question_category_from_string(std::string_view s);
Role role_from_string(std::string_view s);
Kind kind_from_string(std::string_view s);
SelectorChoice choice_from_string(std::string_view s);

struct PlayerId {
    int group = 0;
    Role role = Role::Selector;
    int index = 0;
    Kind kind = Kind::Human;

    // Short stable label such as "g0.s3" or "g2.c7".
    std::string label() const;

    friend bool operator==(const PlayerId&, const PlayerId&) = default;
};

// Throws InvalidValue when a selector is marked as a bot.
void validate(const PlayerId& id);

struct Triad {
    PlayerId selector;
    PlayerId candidate_a;
    PlayerId candidate_b;

    const PlayerId& candidate(Slot s) const noexcept { return s == Slot::A ? candidate_a : candidate_b; }
};

Triad make_triad(const PlayerId& selector, const PlayerId& a, const PlayerId& b);

// Points a candidate commits to return if selected.
class ReturnDecision {
public:
    explicit ReturnDecision(int amount, const GameRules& rules = kDefaultRules);
    int amount() const noexcept { return amount_; }
    friend bool operator==(const ReturnDecision&, const ReturnDecision&) = default;

private:
    int amount_;
};

struct BeliefReport {
    int expected_return_a = 0;
    int expected_return_b = 0;
};

BeliefReport make_belief_report(int a, int b, const GameRules& rules = kDefaultRules);

struct CandidateGuess {
    SelectorChoice guessed_choice = SelectorChoice::Keep;
};

struct Payoffs {
    int selector = 0;
    int candidate_a = 0;
    int candidate_b = 0;
    friend bool operator==(const Payoffs&, const Payoffs&) = default;
};

Payoffs settle_round(SelectorChoice choice, ReturnDecision return_a, ReturnDecision return_b,
                     const GameRules& rules = kDefaultRules);

// Uniform slider start position over 0..max_return.
int random_slider_init(Rng& rng, const GameRules& rules = kDefaultRules);

struct RoundRecord {
    Triad triad;
    int round_index = 0;
    std::string question;
    std::string reply_a;
    std::string reply_b;
    SelectorChoice choice = SelectorChoice::Keep;
    int return_a = 0;
    int return_b = 0;
    BeliefReport beliefs;
    std::array<CandidateGuess, 2> guesses{};
    Payoffs payoffs;
    bool identity_shown = false;

    const std::string& reply(Slot s) const noexcept { return s == Slot::A ? reply_a : reply_b; }
    int returned(Slot s) const noexcept { return s == Slot::A ? return_a : return_b; }
    int belief(Slot s) const noexcept {
        return s == Slot::A ? beliefs.expected_return_a : beliefs.expected_return_b;
    }
};

// Message length in characters (UTF-8 code points).
std::size_t message_length(std::string_view text) noexcept;

// Truncates to at most max_chars code points.
std::string clamp_message(std::string_view text, std::size_t max_chars);

}  // namespace psg
