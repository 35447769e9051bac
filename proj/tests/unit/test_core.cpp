#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "psg/core/errors.hpp"
#include "psg/core/phase.hpp"
#include "psg/core/rules.hpp"

using namespace psg;

TEST_CASE("settle_round examples") {
    CHECK(settle_round(SelectorChoice::Keep, ReturnDecision(12), ReturnDecision(7)) == Payoffs{10, 0, 0});
    CHECK(settle_round(SelectorChoice::InvestA, ReturnDecision(12), ReturnDecision(7)) == Payoffs{12, 18, 0});
    CHECK(settle_round(SelectorChoice::InvestB, ReturnDecision(12), ReturnDecision(0)) == Payoffs{0, 0, 30});
}

TEST_CASE("settle_round conserves the pot over every input") {
    for (auto c : {SelectorChoice::InvestA, SelectorChoice::InvestB, SelectorChoice::Keep}) {
        for (int a = 0; a <= 30; ++a) {
            for (int b = 0; b <= 30; ++b) {
                const auto p = settle_round(c, ReturnDecision(a), ReturnDecision(b));
                if (c == SelectorChoice::Keep) {
                    CHECK(p == Payoffs{10, 0, 0});
                } else if (c == SelectorChoice::InvestA) {
                    CHECK(p.selector == a);
                    CHECK(p.selector + p.candidate_a == 30);
                    CHECK(p.candidate_b == 0);
                } else {
                    CHECK(p.selector == b);
                    CHECK(p.selector + p.candidate_b == 30);
                    CHECK(p.candidate_a == 0);
                }
            }
        }
    }
}

TEST_CASE("return decisions and belief reports are range checked") {
    CHECK_THROWS_AS(ReturnDecision(-1), InvalidValue);
    CHECK_THROWS_AS(ReturnDecision(31), InvalidValue);
    CHECK_NOTHROW(ReturnDecision(30));
    CHECK_THROWS_AS(make_belief_report(0, 31), InvalidValue);
    CHECK(make_belief_report(3, 30).expected_return_b == 30);
}

TEST_CASE("player and triad validation") {
    PlayerId bot_selector{0, Role::Selector, 0, Kind::Bot};
    CHECK_THROWS_AS(validate(bot_selector), InvalidValue);

    PlayerId s{0, Role::Selector, 0, Kind::Human};
    PlayerId a{0, Role::Candidate, 1, Kind::Human};
    PlayerId b{0, Role::Candidate, 6, Kind::Bot};
    CHECK_NOTHROW(make_triad(s, a, b));
    CHECK_THROWS_AS(make_triad(s, a, a), InvalidValue);
    PlayerId other_group = b;
    other_group.group = 1;
    CHECK_THROWS_AS(make_triad(s, a, other_group), InvalidValue);
    CHECK_THROWS_AS(make_triad(s, s, b), InvalidValue);
    CHECK(s.label() == "g0.s0");
    CHECK(b.label() == "g0.c6");
}

TEST_CASE("slider init: range, determinism and uniformity") {
    Rng r1(42), r2(42);
    for (int i = 0; i < 100; ++i) {
        const int v = random_slider_init(r1);
        CHECK(v >= 0);
        CHECK(v <= 30);
        CHECK(v == random_slider_init(r2));
    }
    // Each of the 31 cells is Binomial(n, 1/31); allow 5 standard deviations.
    const int n = 100000;
    std::array<int, 31> counts{};
    Rng rng(7);
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(random_slider_init(rng))];
    const double p = 1.0 / 31.0;
    const double mean = n * p;
    const double sd = std::sqrt(n * p * (1 - p));
    double chi2 = 0;
    for (int c : counts) {
        CHECK(std::abs(c - mean) < 5 * sd);
        chi2 += (c - mean) * (c - mean) / mean;
    }
    // 30 degrees of freedom: the 0.9999 quantile is about 66.
    CHECK(chi2 < 66.0);
}

TEST_CASE("message length counts code points and clamp truncates") {
    CHECK(message_length("") == 0);
    CHECK(message_length("abc") == 3);
    CHECK(message_length("h\xC3\xA9llo") == 5);
    CHECK(clamp_message("abcdef", 3) == "abc");
    CHECK(clamp_message("h\xC3\xA9llo", 2) == "h\xC3\xA9");
}

namespace {

std::vector<RoundEvent> canonical_sequence() {
    return {RoundEvent::question(),           RoundEvent::reply(Slot::A),           RoundEvent::reply(Slot::B),
            RoundEvent::choice(),             RoundEvent::return_decision(Slot::A), RoundEvent::return_decision(Slot::B),
            RoundEvent::beliefs(),            RoundEvent::guess(Slot::A),           RoundEvent::guess(Slot::B)};
}

std::vector<RoundEvent> all_events() {
    return {RoundEvent::question(),       RoundEvent::reply(Slot::A),           RoundEvent::reply(Slot::B),
            RoundEvent::choice(),         RoundEvent::return_decision(Slot::A), RoundEvent::return_decision(Slot::B),
            RoundEvent::beliefs(),        RoundEvent::guess(Slot::A),           RoundEvent::guess(Slot::B)};
}

bool same(RoundEvent x, RoundEvent y) {
    return x.type == y.type && x.slot == y.slot;
}

}  // namespace

TEST_CASE("phase examples") {
    RoundProgress start;
    CHECK(advance_phase(start, RoundEvent::question()) == RoundPhase::AwaitReplies);
    const auto after_q = start.advance(RoundEvent::question());
    CHECK(advance_phase(after_q, RoundEvent::reply(Slot::A)) == RoundPhase::AwaitReplies);
    auto p = after_q.advance(RoundEvent::reply(Slot::A)).advance(RoundEvent::reply(Slot::B));
    CHECK(p.phase() == RoundPhase::AwaitDecisions);
    CHECK_THROWS_AS(p.advance(RoundEvent::question()), IllegalEvent);
}

TEST_CASE("phase machine accepts the canonical order and any within-phase reordering") {
    RoundProgress p;
    for (auto e : canonical_sequence()) p = p.advance(e);
    CHECK(p.phase() == RoundPhase::Revealed);

    RoundProgress q;
    for (auto e : {RoundEvent::question(), RoundEvent::reply(Slot::B), RoundEvent::reply(Slot::A),
                   RoundEvent::return_decision(Slot::B), RoundEvent::choice(), RoundEvent::return_decision(Slot::A),
                   RoundEvent::guess(Slot::B), RoundEvent::beliefs(), RoundEvent::guess(Slot::A)}) {
        q = q.advance(e);
    }
    CHECK(q.phase() == RoundPhase::Revealed);
}

TEST_CASE("phase machine rejects every single-event perturbation") {
    const auto seq = canonical_sequence();
    for (std::size_t i = 0; i < seq.size(); ++i) {
        RoundProgress p;
        for (std::size_t j = 0; j < i; ++j) p = p.advance(seq[j]);
        // Legal set at this point: events of the current phase not yet received.
        for (auto e : all_events()) {
            bool legal = false;
            for (std::size_t j = i; j < seq.size(); ++j) {
                RoundProgress probe;
                for (std::size_t k = 0; k < i; ++k) probe = probe.advance(seq[k]);
                if (same(seq[j], e) && probe.accepts(e)) legal = true;
            }
            if (!legal) {
                CHECK_THROWS_AS(p.advance(e), IllegalEvent);
            }
        }
        // Duplicating the previous event is always illegal.
        if (i > 0) CHECK_THROWS_AS(p.advance(seq[i - 1]), IllegalEvent);
    }
    RoundProgress done;
    for (auto e : seq) done = done.advance(e);
    for (auto e : all_events()) CHECK_THROWS_AS(done.advance(e), IllegalEvent);
}

TEST_CASE("accepted events by phase") {
    RoundProgress p;
    CHECK(p.accepts(RoundEvent::question()));
    CHECK_FALSE(p.accepts(RoundEvent::reply(Slot::A)));
    p = p.advance(RoundEvent::question());
    CHECK_FALSE(p.accepts(RoundEvent::choice()));
    p = p.advance(RoundEvent::reply(Slot::A));
    CHECK_FALSE(p.accepts(RoundEvent::reply(Slot::A)));
    CHECK(p.accepts(RoundEvent::reply(Slot::B)));
    CHECK(p.received(RoundEvent::reply(Slot::A)));
}

TEST_CASE("enum string round trips") {
    for (auto c : {SelectorChoice::InvestA, SelectorChoice::InvestB, SelectorChoice::Keep}) {
        CHECK(choice_from_string(to_string(c)) == c);
    }
    for (auto k : {Kind::Human, Kind::Bot}) CHECK(kind_from_string(to_string(k)) == k);
    for (auto q : {QuestionCategory::Traits, QuestionCategory::Points, QuestionCategory::Reasons,
                   QuestionCategory::Other}) {
        CHECK(question_category_from_string(to_string(q)) == q);
    }
    CHECK_THROWS_AS(choice_from_string("invest_c"), InvalidValue);
}
