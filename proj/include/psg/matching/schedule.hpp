#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "psg/core/rng.hpp"

namespace psg::matching {

enum class SyncMode { Barrier, Pool };

std::string_view to_string(SyncMode m) noexcept;
SyncMode sync_mode_from_string(std::string_view s);

// One selector's pairing in one round. candidate_a / candidate_b carry the
// A/B labelling shown to the selector; the pair itself is unordered.
struct Assignment {
    int selector = 0;
    int candidate_a = 0;
    int candidate_b = 0;
};

struct ScheduleRound {
    std::vector<Assignment> assignments;
};

struct Schedule {
    int n_selectors = 0;
    int n_candidates = 0;
    SyncMode mode = SyncMode::Barrier;
    std::vector<ScheduleRound> rounds;
};

// (selector, lower candidate, higher candidate)
using TriadKey = std::tuple<int, int, int>;
TriadKey triad_key(int selector, int a, int b) noexcept;

enum class Rule {
    RepeatTriad,
    OverlappingPair,
    SameCandidate,
    SelectorReused,
    MissingSelector,
    MissingCandidate,
    OutOfRange,
};

std::string_view to_string(Rule r) noexcept;

struct Violation {
    int round = 0;
    int selector = 0;
    Rule rule = Rule::RepeatTriad;
    std::string detail;
};

// Largest round count for which a barrier schedule exists: each selector
// can meet at most C(n_candidates, 2) distinct pairs, and a round-robin
// 1-factorization attains that bound when n_candidates == 2 * n_selectors.
int max_barrier_rounds(int n_selectors, int n_candidates) noexcept;

// Randomised backtracking construction; falls back to a relabelled
// 1-factorization when the search budget runs out. Throws Infeasible.
Schedule build_schedule(int n_selectors, int n_candidates, int n_rounds, Rng& rng);

std::vector<Violation> verify_schedule(const Schedule& s);

void write_schedule_csv(std::ostream& out, const Schedule& s);

// Circle-method 1-factorization of K_n (n even): n-1 perfect matchings
// that together use every edge exactly once.
std::vector<std::vector<std::pair<int, int>>> round_robin_factorization(int n);

struct PoolTriad {
    int selector = 0;
    int candidate_a = 0;
    int candidate_b = 0;
};

class MatchHistory {
public:
    bool used(int selector, int a, int b) const { return used_.count(triad_key(selector, a, b)) != 0; }
    void record(const PoolTriad& t);

    int selector_rounds(int selector) const;
    int candidate_rounds(int candidate) const;
    std::size_t size() const noexcept { return used_.size(); }

private:
    std::set<TriadKey> used_;
    std::map<int, int> selector_rounds_;
    std::map<int, int> candidate_rounds_;
};

struct IdlePlayers {
    std::vector<int> selectors;
    std::vector<int> candidates;
};

// Uniform draw over never-used triads formable from the idle players;
// records the emitted triad in the history.
std::optional<PoolTriad> next_pool_assignment(MatchHistory& history, const IdlePlayers& idle, Rng& rng);

}  // namespace psg::matching
