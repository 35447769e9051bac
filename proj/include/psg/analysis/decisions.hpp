#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "psg/core/rules.hpp"

namespace psg::analysis {

enum class DecisionCategory { OptimallyInvest, OptimallyKeep, ShouldHaveInvested, ShouldHaveKept, WrongCandidate };

inline constexpr std::array<DecisionCategory, 5> kAllCategories{
    DecisionCategory::OptimallyInvest, DecisionCategory::OptimallyKeep, DecisionCategory::ShouldHaveInvested,
    DecisionCategory::ShouldHaveKept, DecisionCategory::WrongCandidate};

std::string_view to_string(DecisionCategory c) noexcept;

// Investing is optimal when the selected candidate returns at least 10 and
// no less than the other; keeping is optimal when neither returns more than
// 10. Investing in the lower of two returns when the other exceeds 10 is a
// wrong-candidate error. Every remaining invest (selected below 10, other at
// most 10) counts as should-have-kept, since keeping would have paid at
// least as much.
DecisionCategory classify_decision(SelectorChoice choice, int return_a, int return_b,
                                   const GameRules& rules = kDefaultRules);

bool is_optimal(SelectorChoice choice, int return_a, int return_b, const GameRules& rules = kDefaultRules);

// Number of the three options that are optimal for these returns (1..3).
int optimal_option_count(int return_a, int return_b, const GameRules& rules = kDefaultRules);

// Mean over rounds of optimal_option_count / 3; 0 for no rounds.
double chance_optimal_rate(const std::vector<std::pair<int, int>>& rounds, const GameRules& rules = kDefaultRules);

struct Decomposition {
    std::array<int, 5> counts{};
    int total = 0;

    double frequency(DecisionCategory c) const;
};

// Per group id, in group order.
std::map<int, Decomposition> decompose(const std::vector<RoundRecord>& records, const GameRules& rules = kDefaultRules);

struct PayoffBounds {
    double lower = 0.0;     // expected payoff of a uniform random choice
    double achieved = 0.0;
    double upper = 0.0;     // best available option
    double rule_based = 0.0;  // longer-reply rule, ties split evenly
    int rounds = 0;
};

PayoffBounds round_payoff_bounds(const RoundRecord& r, const GameRules& rules = kDefaultRules);

// Sums per group.
std::map<int, PayoffBounds> selector_payoff_bounds(const std::vector<RoundRecord>& records,
                                                   const GameRules& rules = kDefaultRules);

struct BeliefErrorCell {
    int n = 0;
    double mean_error = 0.0;      // believed - actual
    double mean_abs_error = 0.0;
    double sd_error = 0.0;
};

struct BeliefErrorStats {
    // Keyed by (round index, candidate kind).
    std::map<std::pair<int, Kind>, BeliefErrorCell> by_round;
    std::map<Kind, BeliefErrorCell> overall;
};

// Signed and absolute differences between each reported belief and the
// return that candidate actually committed, split by candidate kind.
BeliefErrorStats belief_error_stats(const std::vector<RoundRecord>& records);

}  // namespace psg::analysis
