#include "psg/matching/schedule.hpp"

#include <algorithm>
#include <numeric>

#include "psg/core/errors.hpp"

namespace psg::matching {

std::string_view to_string(SyncMode m) noexcept {
    return m == SyncMode::Barrier ? "barrier" : "pool";
}

SyncMode sync_mode_from_string(std::string_view s) {
    if (s == "barrier") return SyncMode::Barrier;
    if (s == "pool") return SyncMode::Pool;
    throw InvalidValue("unknown sync mode: " + std::string(s));
}

TriadKey triad_key(int selector, int a, int b) noexcept {
    return {selector, std::min(a, b), std::max(a, b)};
}

std::string_view to_string(Rule r) noexcept {
    switch (r) {
        case Rule::RepeatTriad: return "repeat_triad";
        case Rule::OverlappingPair: return "overlapping_pair";
        case Rule::SameCandidate: return "same_candidate";
        case Rule::SelectorReused: return "selector_reused";
        case Rule::MissingSelector: return "missing_selector";
        case Rule::MissingCandidate: return "missing_candidate";
        case Rule::OutOfRange: return "out_of_range";
    }
    return "unknown";
}

int max_barrier_rounds(int n_selectors, int n_candidates) noexcept {
    if (n_selectors < 1 || n_candidates != 2 * n_selectors) return 0;
    return n_candidates * (n_candidates - 1) / 2;
}

std::vector<std::vector<std::pair<int, int>>> round_robin_factorization(int n) {
    if (n < 2 || n % 2 != 0) throw InvalidValue("1-factorization needs an even vertex count");
    std::vector<std::vector<std::pair<int, int>>> out;
    const int m = n - 1;
    for (int r = 0; r < m; ++r) {
        std::vector<std::pair<int, int>> matching;
        matching.emplace_back(r, n - 1);
        for (int k = 1; k < n / 2; ++k) {
            matching.emplace_back((r + k) % m, (r - k + m) % m);
        }
        out.push_back(std::move(matching));
    }
    return out;
}

namespace {

template <typename T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(i) - 1));
        std::swap(v[i - 1], v[j]);
    }
}

// Depth-first search for one round: the first uncovered candidate must be
// paired with someone, so branch over its partner and the receiving selector.
class RoundSearch {
public:
    RoundSearch(int n_selectors, int n_candidates, const std::set<TriadKey>& used, Rng& rng, long budget)
        : n_sel_(n_selectors), n_cand_(n_candidates), used_(used), rng_(rng), budget_(budget),
          cand_taken_(n_candidates, false), sel_taken_(n_selectors, false) {
        order_.resize(n_candidates);
        std::iota(order_.begin(), order_.end(), 0);
        shuffle_in_place(order_, rng_);
    }

    std::optional<std::vector<Assignment>> run() {
        if (search()) return out_;
        return std::nullopt;
    }

private:
    bool search() {
        if (--budget_ < 0) return false;
        int first = -1;
        for (int c : order_) {
            if (!cand_taken_[c]) {
                first = c;
                break;
            }
        }
        if (first < 0) return true;
        std::vector<int> partners;
        for (int c = 0; c < n_cand_; ++c) {
            if (c != first && !cand_taken_[c]) partners.push_back(c);
        }
        std::vector<int> selectors;
        for (int s = 0; s < n_sel_; ++s) {
            if (!sel_taken_[s]) selectors.push_back(s);
        }
        shuffle_in_place(partners, rng_);
        shuffle_in_place(selectors, rng_);
        for (int p : partners) {
            for (int s : selectors) {
                if (used_.count(triad_key(s, first, p)) != 0) continue;
                cand_taken_[first] = cand_taken_[p] = true;
                sel_taken_[s] = true;
                out_.push_back({s, first, p});
                if (search()) return true;
                out_.pop_back();
                cand_taken_[first] = cand_taken_[p] = false;
                sel_taken_[s] = false;
                if (budget_ < 0) return false;
            }
        }
        return false;
    }

    int n_sel_;
    int n_cand_;
    const std::set<TriadKey>& used_;
    Rng& rng_;
    long budget_;
    std::vector<int> order_;
    std::vector<bool> cand_taken_;
    std::vector<bool> sel_taken_;
    std::vector<Assignment> out_;
};

void label_and_sort(std::vector<Assignment>& round, Rng& rng) {
    for (auto& a : round) {
        if (uniform_int(rng, 0, 1) == 1) std::swap(a.candidate_a, a.candidate_b);
    }
    std::sort(round.begin(), round.end(),
              [](const Assignment& x, const Assignment& y) { return x.selector < y.selector; });
}

std::optional<Schedule> try_search(int n_sel, int n_cand, int n_rounds, Rng& rng) {
    constexpr long kNodeBudget = 20000;
    Schedule s{n_sel, n_cand, SyncMode::Barrier, {}};
    std::set<TriadKey> used;
    for (int r = 0; r < n_rounds; ++r) {
        RoundSearch search(n_sel, n_cand, used, rng, kNodeBudget);
        auto round = search.run();
        if (!round) return std::nullopt;
        for (const auto& a : *round) used.insert(triad_key(a.selector, a.candidate_a, a.candidate_b));
        label_and_sort(*round, rng);
        s.rounds.push_back({std::move(*round)});
    }
    return s;
}

// Deterministic-existence fallback: round r uses 1-factor (r mod n-1) with
// the selector-to-pair map rotated by r / (n-1). Distinct (factor, rotation)
// pairs never repeat a triad; labels are randomised afterwards.
Schedule from_factorization(int n_sel, int n_cand, int n_rounds, Rng& rng) {
    auto factors = round_robin_factorization(n_cand);
    std::vector<int> relabel(n_cand);
    std::iota(relabel.begin(), relabel.end(), 0);
    shuffle_in_place(relabel, rng);
    shuffle_in_place(factors, rng);
    std::vector<int> sel_perm(n_sel);
    std::iota(sel_perm.begin(), sel_perm.end(), 0);
    shuffle_in_place(sel_perm, rng);

    const int n_factors = n_cand - 1;
    Schedule s{n_sel, n_cand, SyncMode::Barrier, {}};
    for (int r = 0; r < n_rounds; ++r) {
        const auto& factor = factors[static_cast<std::size_t>(r % n_factors)];
        const int shift = r / n_factors;
        std::vector<Assignment> round;
        for (int k = 0; k < n_sel; ++k) {
            const auto& pair = factor[static_cast<std::size_t>((k + shift) % n_sel)];
            round.push_back({sel_perm[static_cast<std::size_t>(k)], relabel[static_cast<std::size_t>(pair.first)],
                             relabel[static_cast<std::size_t>(pair.second)]});
        }
        label_and_sort(round, rng);
        s.rounds.push_back({std::move(round)});
    }
    return s;
}

}  // namespace

Schedule build_schedule(int n_selectors, int n_candidates, int n_rounds, Rng& rng) {
    if (n_rounds < 1) throw InvalidValue("n_rounds must be at least 1");
    if (n_selectors < 1) throw InvalidValue("n_selectors must be at least 1");
    if (n_candidates < 2 || n_candidates % 2 != 0) {
        throw Infeasible("barrier schedules need an even candidate count, got " + std::to_string(n_candidates));
    }
    if (n_candidates != 2 * n_selectors) {
        throw Infeasible("barrier schedules need exactly two candidates per selector");
    }
    const int limit = max_barrier_rounds(n_selectors, n_candidates);
    if (n_rounds > limit) {
        throw Infeasible("n_rounds " + std::to_string(n_rounds) + " exceeds the distinct-pair budget " +
                         std::to_string(limit));
    }
    constexpr int kAttempts = 8;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        if (auto s = try_search(n_selectors, n_candidates, n_rounds, rng)) return *s;
    }
    return from_factorization(n_selectors, n_candidates, n_rounds, rng);
}

std::vector<Violation> verify_schedule(const Schedule& s) {
    std::vector<Violation> out;
    std::set<TriadKey> seen;
    for (std::size_t r = 0; r < s.rounds.size(); ++r) {
        const int round = static_cast<int>(r);
        std::vector<int> cand_count(static_cast<std::size_t>(std::max(0, s.n_candidates)), 0);
        std::vector<int> sel_count(static_cast<std::size_t>(std::max(0, s.n_selectors)), 0);
        for (const auto& a : s.rounds[r].assignments) {
            const bool in_range = a.selector >= 0 && a.selector < s.n_selectors && a.candidate_a >= 0 &&
                                  a.candidate_a < s.n_candidates && a.candidate_b >= 0 &&
                                  a.candidate_b < s.n_candidates;
            if (!in_range) {
                out.push_back({round, a.selector, Rule::OutOfRange, "index outside group"});
                continue;
            }
            if (a.candidate_a == a.candidate_b) {
                out.push_back({round, a.selector, Rule::SameCandidate,
                               "candidate " + std::to_string(a.candidate_a) + " paired with itself"});
            }
            if (++sel_count[static_cast<std::size_t>(a.selector)] > 1) {
                out.push_back({round, a.selector, Rule::SelectorReused, "selector assigned twice"});
            }
            for (int c : {a.candidate_a, a.candidate_b}) {
                if (++cand_count[static_cast<std::size_t>(c)] == 2) {
                    out.push_back({round, a.selector, Rule::OverlappingPair,
                                   "candidate " + std::to_string(c) + " in two pairs"});
                }
            }
            if (!seen.insert(triad_key(a.selector, a.candidate_a, a.candidate_b)).second) {
                out.push_back({round, a.selector, Rule::RepeatTriad,
                               "pair {" + std::to_string(a.candidate_a) + "," + std::to_string(a.candidate_b) +
                                   "} already met"});
            }
        }
        if (s.mode == SyncMode::Barrier) {
            for (int i = 0; i < s.n_selectors; ++i) {
                if (sel_count[static_cast<std::size_t>(i)] == 0) {
                    out.push_back({round, i, Rule::MissingSelector, "selector idle in barrier round"});
                }
            }
            for (int c = 0; c < s.n_candidates; ++c) {
                if (cand_count[static_cast<std::size_t>(c)] == 0) {
                    out.push_back({round, -1, Rule::MissingCandidate,
                                   "candidate " + std::to_string(c) + " idle in barrier round"});
                }
            }
        }
    }
    return out;
}

void write_schedule_csv(std::ostream& out, const Schedule& s) {
    out << "round,selector,candidate_a,candidate_b\n";
    for (std::size_t r = 0; r < s.rounds.size(); ++r) {
        for (const auto& a : s.rounds[r].assignments) {
            out << r << ',' << a.selector << ',' << a.candidate_a << ',' << a.candidate_b << '\n';
        }
    }
}

void MatchHistory::record(const PoolTriad& t) {
    used_.insert(triad_key(t.selector, t.candidate_a, t.candidate_b));
    ++selector_rounds_[t.selector];
    ++candidate_rounds_[t.candidate_a];
    ++candidate_rounds_[t.candidate_b];
}

int MatchHistory::selector_rounds(int selector) const {
    const auto it = selector_rounds_.find(selector);
    return it == selector_rounds_.end() ? 0 : it->second;
}

int MatchHistory::candidate_rounds(int candidate) const {
    const auto it = candidate_rounds_.find(candidate);
    return it == candidate_rounds_.end() ? 0 : it->second;
}

std::optional<PoolTriad> next_pool_assignment(MatchHistory& history, const IdlePlayers& idle, Rng& rng) {
    std::vector<int> sels = idle.selectors;
    std::vector<int> cands = idle.candidates;
    std::sort(sels.begin(), sels.end());
    sels.erase(std::unique(sels.begin(), sels.end()), sels.end());
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    std::vector<PoolTriad> options;
    for (int s : sels) {
        for (std::size_t i = 0; i < cands.size(); ++i) {
            for (std::size_t j = i + 1; j < cands.size(); ++j) {
                if (!history.used(s, cands[i], cands[j])) options.push_back({s, cands[i], cands[j]});
            }
        }
    }
    if (options.empty()) return std::nullopt;
    PoolTriad pick = options[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(options.size()) - 1))];
    if (uniform_int(rng, 0, 1) == 1) std::swap(pick.candidate_a, pick.candidate_b);
    history.record(pick);
    return pick;
}

}  // namespace psg::matching
