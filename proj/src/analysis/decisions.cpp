#include "psg/analysis/decisions.hpp"

#include <algorithm>
#include <cmath>

namespace psg::analysis {

std::string_view to_string(DecisionCategory c) noexcept {
    switch (c) {
        case DecisionCategory::OptimallyInvest: return "optimally_invest";
        case DecisionCategory::OptimallyKeep: return "optimally_keep";
        case DecisionCategory::ShouldHaveInvested: return "should_have_invested";
        case DecisionCategory::ShouldHaveKept: return "should_have_kept";
        case DecisionCategory::WrongCandidate: return "wrong_candidate";
    }
    return "?";
}

DecisionCategory classify_decision(SelectorChoice choice, int return_a, int return_b, const GameRules& rules) {
    const int keep = rules.endowment;
    if (choice == SelectorChoice::Keep) {
        return (return_a > keep || return_b > keep) ? DecisionCategory::ShouldHaveInvested
                                                    : DecisionCategory::OptimallyKeep;
    }
    const int selected = choice == SelectorChoice::InvestA ? return_a : return_b;
    const int other = choice == SelectorChoice::InvestA ? return_b : return_a;
    if (selected >= keep && selected >= other) return DecisionCategory::OptimallyInvest;
    if (other > keep && other > selected) return DecisionCategory::WrongCandidate;
    return DecisionCategory::ShouldHaveKept;
}

bool is_optimal(SelectorChoice choice, int return_a, int return_b, const GameRules& rules) {
    const auto c = classify_decision(choice, return_a, return_b, rules);
    return c == DecisionCategory::OptimallyInvest || c == DecisionCategory::OptimallyKeep;
}

int optimal_option_count(int return_a, int return_b, const GameRules& rules) {
    int n = 0;
    for (auto c : {SelectorChoice::InvestA, SelectorChoice::InvestB, SelectorChoice::Keep}) {
        n += is_optimal(c, return_a, return_b, rules);
    }
    return n;
}

double chance_optimal_rate(const std::vector<std::pair<int, int>>& rounds, const GameRules& rules) {
    if (rounds.empty()) return 0.0;
    double total = 0.0;
    for (auto [a, b] : rounds) total += optimal_option_count(a, b, rules) / 3.0;
    return total / static_cast<double>(rounds.size());
}

double Decomposition::frequency(DecisionCategory c) const {
    return total == 0 ? 0.0 : counts[static_cast<std::size_t>(c)] / static_cast<double>(total);
}

std::map<int, Decomposition> decompose(const std::vector<RoundRecord>& records, const GameRules& rules) {
    std::map<int, Decomposition> out;
    for (const auto& r : records) {
        auto& d = out[r.triad.selector.group];
        ++d.counts[static_cast<std::size_t>(classify_decision(r.choice, r.return_a, r.return_b, rules))];
        ++d.total;
    }
    return out;
}

PayoffBounds round_payoff_bounds(const RoundRecord& r, const GameRules& rules) {
    PayoffBounds b;
    const double keep = rules.endowment;
    b.lower = (r.return_a + r.return_b + keep) / 3.0;
    b.upper = std::max({keep, double(r.return_a), double(r.return_b)});
    b.achieved = r.payoffs.selector;
    const auto la = message_length(r.reply_a);
    const auto lb = message_length(r.reply_b);
    b.rule_based = la > lb ? r.return_a : lb > la ? r.return_b : 0.5 * (r.return_a + r.return_b);
    b.rounds = 1;
    return b;
}

std::map<int, PayoffBounds> selector_payoff_bounds(const std::vector<RoundRecord>& records, const GameRules& rules) {
    std::map<int, PayoffBounds> out;
    for (const auto& r : records) {
        const auto b = round_payoff_bounds(r, rules);
        auto& acc = out[r.triad.selector.group];
        acc.lower += b.lower;
        acc.achieved += b.achieved;
        acc.upper += b.upper;
        acc.rule_based += b.rule_based;
        acc.rounds += 1;
    }
    return out;
}

namespace {

struct Accumulator {
    int n = 0;
    double sum = 0, sum_abs = 0, sum_sq = 0;

    void add(double e) {
        ++n;
        sum += e;
        sum_abs += std::abs(e);
        sum_sq += e * e;
    }

    BeliefErrorCell cell() const {
        BeliefErrorCell c;
        c.n = n;
        if (n == 0) return c;
        c.mean_error = sum / n;
        c.mean_abs_error = sum_abs / n;
        c.sd_error = n > 1 ? std::sqrt(std::max(0.0, (sum_sq - n * c.mean_error * c.mean_error) / (n - 1))) : 0.0;
        return c;
    }
};

}  // namespace

BeliefErrorStats belief_error_stats(const std::vector<RoundRecord>& records) {
    std::map<std::pair<int, Kind>, Accumulator> by_round;
    std::map<Kind, Accumulator> overall;
    for (const auto& r : records) {
        for (auto slot : {Slot::A, Slot::B}) {
            const Kind k = r.triad.candidate(slot).kind;
            const double e = r.belief(slot) - r.returned(slot);
            by_round[{r.round_index, k}].add(e);
            overall[k].add(e);
        }
    }
    BeliefErrorStats out;
    for (const auto& [key, acc] : by_round) out.by_round[key] = acc.cell();
    for (const auto& [key, acc] : overall) out.overall[key] = acc.cell();
    return out;
}

}  // namespace psg::analysis
