#include <doctest.h>

#include <cmath>
#include <map>

#include "psg/analysis/clustering.hpp"
#include "psg/analysis/decisions.hpp"
#include "psg/analysis/group_stats.hpp"
#include "psg/analysis/predictability.hpp"
#include "psg/analysis/text.hpp"
#include "psg/core/errors.hpp"
#include "psg/core/stats.hpp"
#include "oracles.hpp"

using namespace psg;
using namespace psg::analysis;

namespace {

using oracle::decision;

RoundRecord record(int group, SelectorChoice c, int ra, int rb, Kind ka = Kind::Human, Kind kb = Kind::Bot) {
    RoundRecord r;
    r.triad = make_triad({group, Role::Selector, 0, Kind::Human}, {group, Role::Candidate, 0, ka},
                         {group, Role::Candidate, 5, kb});
    r.choice = c;
    r.return_a = ra;
    r.return_b = rb;
    r.payoffs = settle_round(c, ReturnDecision(ra), ReturnDecision(rb));
    return r;
}

}  // namespace

TEST_CASE("classify_decision examples") {
    CHECK(classify_decision(SelectorChoice::InvestA, 12, 8) == DecisionCategory::OptimallyInvest);
    CHECK(classify_decision(SelectorChoice::Keep, 8, 10) == DecisionCategory::OptimallyKeep);
    CHECK(classify_decision(SelectorChoice::InvestA, 12, 15) == DecisionCategory::WrongCandidate);
    CHECK(classify_decision(SelectorChoice::Keep, 11, 3) == DecisionCategory::ShouldHaveInvested);
    CHECK(classify_decision(SelectorChoice::InvestB, 9, 4) == DecisionCategory::ShouldHaveKept);
    CHECK(classify_decision(SelectorChoice::InvestB, 10, 10) == DecisionCategory::OptimallyInvest);
    // Selected below 10 while the other sits exactly at 10.
    CHECK(classify_decision(SelectorChoice::InvestA, 7, 10) == DecisionCategory::ShouldHaveKept);
}

TEST_CASE("classify_decision agrees with the payoff oracle on every input") {
    std::array<int, 5> seen{};
    for (auto c : {SelectorChoice::InvestA, SelectorChoice::InvestB, SelectorChoice::Keep}) {
        for (int a = 0; a <= 30; ++a) {
            for (int b = 0; b <= 30; ++b) {
                const auto got = classify_decision(c, a, b);
                REQUIRE(got == decision(c, a, b));
                ++seen[static_cast<std::size_t>(got)];
            }
        }
    }
    int total = 0;
    for (int n : seen) {
        CHECK(n > 0);
        total += n;
    }
    CHECK(total == 3 * 31 * 31);
}

TEST_CASE("chance optimal rate") {
    CHECK(chance_optimal_rate({{10, 10}}) == doctest::Approx(1.0));
    CHECK(chance_optimal_rate({{12, 8}}) == doctest::Approx(1.0 / 3));
    CHECK(chance_optimal_rate({{12, 8}, {10, 10}}) == doctest::Approx(2.0 / 3));
    CHECK(chance_optimal_rate({{10, 4}}) == doctest::Approx(2.0 / 3));
    CHECK(chance_optimal_rate({}) == 0.0);
    for (int a = 0; a <= 30; ++a) {
        for (int b = 0; b <= 30; ++b) {
            const double r = chance_optimal_rate({{a, b}});
            const int best = std::max({10, a, b});
            const bool tie = (a == best) + (b == best) + (10 == best) > 1;
            CHECK(r >= 1.0 / 3 - 1e-12);
            CHECK((std::abs(r - 1.0 / 3) < 1e-12) == !tie);
        }
    }
}

TEST_CASE("decomposition frequencies sum to one per group") {
    std::vector<RoundRecord> recs{record(0, SelectorChoice::InvestA, 12, 8), record(0, SelectorChoice::Keep, 12, 8),
                                  record(1, SelectorChoice::InvestB, 12, 8)};
    const auto d = decompose(recs);
    REQUIRE(d.size() == 2);
    for (const auto& [g, dec] : d) {
        double sum = 0;
        for (auto c : kAllCategories) sum += dec.frequency(c);
        CHECK(sum == doctest::Approx(1.0));
    }
    CHECK(d.at(0).frequency(DecisionCategory::OptimallyInvest) == doctest::Approx(0.5));
    CHECK(d.at(1).frequency(DecisionCategory::WrongCandidate) == doctest::Approx(1.0));
}

TEST_CASE("payoff bounds") {
    auto r = record(0, SelectorChoice::InvestA, 12, 8);
    auto b = round_payoff_bounds(r);
    CHECK(b.lower == doctest::Approx(10.0));
    CHECK(b.upper == 12);
    CHECK(b.achieved == 12);
    auto z = round_payoff_bounds(record(0, SelectorChoice::Keep, 0, 0));
    CHECK(z.lower == doctest::Approx(10.0 / 3));
    CHECK(z.upper == 10);

    r.reply_a = "short";
    r.reply_b = "a much longer reply";
    CHECK(round_payoff_bounds(r).rule_based == 8);

    std::vector<RoundRecord> recs;
    Rng rng(4);
    for (int i = 0; i < 300; ++i) {
        const auto c = static_cast<SelectorChoice>(uniform_int(rng, 0, 2));
        recs.push_back(record(i % 3, c, uniform_int(rng, 0, 30), uniform_int(rng, 0, 30)));
    }
    for (const auto& [g, pb] : selector_payoff_bounds(recs)) {
        CHECK(pb.achieved <= pb.upper);
        CHECK(pb.lower <= pb.upper);
        CHECK(pb.rounds == 100);
    }
}

TEST_CASE("belief errors") {
    auto r = record(0, SelectorChoice::InvestB, 10, 19);
    r.beliefs = make_belief_report(10, 13);
    const auto s = belief_error_stats({r});
    CHECK(s.overall.at(Kind::Bot).mean_error == doctest::Approx(-6));
    CHECK(s.overall.at(Kind::Human).mean_error == 0);
    CHECK(s.overall.at(Kind::Human).sd_error == 0);
    CHECK(s.by_round.at({0, Kind::Bot}).mean_abs_error == doctest::Approx(6));
}

TEST_CASE("regex promise extraction") {
    CHECK(extract_promise_regex("I'll return 15 points") == PromiseParse{true, 15});
    CHECK(extract_promise_regex("50/50?") == PromiseParse{true, 15});
    CHECK(extract_promise_regex("Trust me, I'm honest") == PromiseParse{false, -1});
    CHECK(extract_promise_regex("I'll split it 50-50 with you") == PromiseParse{true, 15});
    CHECK(extract_promise_regex("I will give you half") == PromiseParse{true, 15});
    CHECK(extract_promise_regex("You will get 20 points back from me") == PromiseParse{true, 20});
    CHECK(extract_promise_regex("I'm 25 years old and I like hiking") == PromiseParse{false, -1});
    CHECK(extract_promise_regex("I will send back twenty-two") == PromiseParse{true, 22});
    CHECK(extract_promise_regex("I'll return 100 percent") == PromiseParse{false, -1});
    CHECK(extract_promise_regex("") == PromiseParse{false, -1});
    // Deterministic and pure.
    CHECK(extract_promise_regex("I'll return 15 points") == extract_promise_regex("I'll return 15 points"));
}

TEST_CASE("silhouette worked example and conventions") {
    const Vectors v{{0}, {0.1}, {10}, {10.1}};
    const auto r = kmeans_with_scores(v, 2);
    CHECK(r.assignments[0] == r.assignments[1]);
    CHECK(r.assignments[2] == r.assignments[3]);
    CHECK(r.assignments[0] != r.assignments[2]);
    const double expected = 0.5 * ((1 - 0.1 / 10.05) + (1 - 0.1 / 9.95));
    CHECK(std::abs(r.silhouette - expected) < 1e-12);

    const auto all = kmeans_with_scores(v, 4);
    CHECK(all.silhouette == 0.0);

    // Two tight clusters far apart: Davies-Bouldin shrinks with the scatter.
    double previous = 1e9;
    for (double spread : {1.0, 0.1, 0.001}) {
        const Vectors w{{0, 0}, {spread, 0}, {100, 100}, {100 + spread, 100}};
        const auto k = kmeans_with_scores(w, 2);
        CHECK(k.davies_bouldin < previous);
        previous = k.davies_bouldin;
    }
    CHECK(previous < 1e-4);

    CHECK_THROWS_AS(kmeans_with_scores({{1}, {1}, {1}}, 2), DegenerateInput);
    CHECK_THROWS_AS(kmeans_with_scores(v, 1), DegenerateInput);
}

TEST_CASE("cluster scores match the quadratic oracle") {
    Rng rng(12);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = uniform_int(rng, 3, 20);
        const int dim = uniform_int(rng, 1, 4);
        Vectors v(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(dim)));
        for (auto& x : v)
            for (auto& c : x) c = 10 * uniform01(rng);
        const int k = uniform_int(rng, 2, std::min(n, 5));
        KMeansOptions opts;
        opts.seed = static_cast<std::uint64_t>(rep);
        const auto r = kmeans_with_scores(v, k, opts);
        CHECK(std::abs(r.silhouette - oracle::silhouette(v, r.assignments)) < 1e-9);
        CHECK(std::abs(r.davies_bouldin - oracle::davies_bouldin(v, r.assignments)) < 1e-9);
        CHECK(r.silhouette >= -1.0);
        CHECK(r.silhouette <= 1.0);
    }
}

TEST_CASE("group statistics") {
    const std::vector<double> a{1, 2, 3, 4, 5}, b{2, 2, 4, 4, 7};
    const auto p = group_stats(a, b, true);
    // Differences -1,0,-1,0,-2: mean -0.8, variance 0.7.
    CHECK(std::abs(p.t - (-0.8 / std::sqrt(0.7 / 5.0))) < 1e-9);
    CHECK(std::abs(p.cohens_d - (-0.8 / std::sqrt(0.7))) < 1e-9);
    CHECK(p.df == 4);
    CHECK(p.p == doctest::Approx(0.09930068321372677).epsilon(1e-9));

    const auto u = group_stats(a, b, false);
    // Pooled variance (2.5 + 4.2) / 2 = 3.35.
    CHECK(std::abs(u.t - (-0.8 / std::sqrt(3.35 * 0.4))) < 1e-9);
    CHECK(u.p == doctest::Approx(0.5090591600301044).epsilon(1e-9));

    const auto same = group_stats(a, a, true);
    CHECK(same.t == 0);
    CHECK(same.cohens_d == 0);
    CHECK(same.zero_variance);
    CHECK(group_stats(a, a, false).cohens_d == 0);

    const std::vector<double> shifted{2, 3, 4, 5, 6};
    const auto z = group_stats(shifted, a, true);
    CHECK(z.zero_variance);
    CHECK(z.p == 0.0);

    CHECK_THROWS_AS(group_stats(std::vector<double>{1}, a, false), InsufficientGroups);
}

TEST_CASE("rank correlation helpers") {
    const std::vector<double> x{1, 2, 2, 3}, y{4, 3, 5, 6};
    CHECK(stats::spearman(x, y) == doctest::Approx(0.632455532033676).epsilon(1e-12));
    CHECK(stats::ranks(x) == std::vector<double>{1, 2.5, 2.5, 4});
    CHECK(std::isnan(stats::pearson(std::vector<double>{1, 1}, std::vector<double>{1, 2})));
}

TEST_CASE("return predictability") {
    Rng rng(31);
    std::vector<ReturnObservation> exact, noise;
    for (int g = 0; g < 6; ++g) {
        for (int i = 0; i < 40; ++i) {
            const double len = uniform_int(rng, 10, 200);
            const bool made = uniform01(rng) < 0.5;
            const double promised = made ? uniform_int(rng, 0, 30) : 0;
            exact.push_back({g, Kind::Bot, len, made, promised, 2 + 0.1 * len});
            noise.push_back({g, Kind::Human, len, made, promised, double(uniform_int(rng, 0, 30))});
        }
    }
    CHECK(return_predictability(exact, Kind::Bot).mse < 1e-12);

    // Returns independent of predictors: MSE close to the return variance (10*32/12 = 80).
    const auto r = return_predictability(noise, Kind::Human);
    CHECK(r.folds.size() == 6);
    CHECK(r.mse == doctest::Approx(80).epsilon(0.2));

    auto constant = exact;
    for (auto& o : constant) o.promise_made = true;
    CHECK_THROWS_AS(return_predictability(constant, Kind::Bot), SingularDesign);
    CHECK_THROWS_AS(return_predictability(exact, Kind::Human), InsufficientGroups);
}
