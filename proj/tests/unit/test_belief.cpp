#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "psg/core/errors.hpp"
#include "psg/model/belief.hpp"
#include "psg/model/optimizer.hpp"

using namespace psg;
using namespace psg::model;

namespace {

ObservationStep human(double r) {
    return {Kind::Human, r, {}};
}
ObservationStep bot(double r) {
    return {Kind::Bot, r, {}};
}
ObservationStep keep() {
    return {std::nullopt, 0.0, {}};
}

std::vector<ObservationStep> random_steps(Rng& rng, int n) {
    std::vector<ObservationStep> steps;
    for (int i = 0; i < n; ++i) {
        const int pick = uniform_int(rng, 0, 2);
        ObservationStep s;
        if (pick < 2) {
            s.selected = pick == 0 ? Kind::Human : Kind::Bot;
            s.observed_return = uniform_int(rng, 0, 30);
        }
        s.reports.push_back({Kind::Human, double(uniform_int(rng, 0, 30)), pick == 0});
        s.reports.push_back({Kind::Bot, double(uniform_int(rng, 0, 30)), pick == 1});
        steps.push_back(s);
    }
    return steps;
}

}  // namespace

TEST_CASE("update_m0 examples") {
    ModelParams p{0.4, 0.1, 0.0, 0.0, 10, 12, 1};
    const auto next = update_m0({10, 12}, human(20), p);
    CHECK(next.human == doctest::Approx(14.0));
    CHECK(next.bot == doctest::Approx(13.0));
    CHECK(update_m0({10, 12}, keep(), p) == BeliefState{10, 12});

    ModelParams q{0.0, 0.0, 0.25, 0.5, 10, 10, 1};
    const auto after_bot = update_m0({8, 10}, bot(30), q);
    CHECK(after_bot.bot == doctest::Approx(20.0));
    CHECK(after_bot.human == doctest::Approx(13.0));
}

TEST_CASE("update_m1 examples") {
    const auto p = ModelParams::shared(0.5, 12, 1);
    CHECK(update_m1({12, 12}, human(18), p).human == doctest::Approx(15.0));
    CHECK(update_m1({12, 12}, bot(18), p) == BeliefState{15, 15});
    CHECK(update_m1({12, 12}, keep(), p) == BeliefState{12, 12});
}

TEST_CASE("tied M0 reproduces M1 to 1e-12") {
    Rng rng(3);
    for (int rep = 0; rep < 200; ++rep) {
        const auto p = ModelParams::shared(uniform01(rng), 30 * uniform01(rng), 2);
        const auto steps = random_steps(rng, 30);
        const auto a = simulate_beliefs(p, ModelKind::M0, steps);
        const auto b = simulate_beliefs(p, ModelKind::M1, steps);
        REQUIRE(a.size() == steps.size() + 1);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(std::abs(a[i].human - b[i].human) <= 1e-12);
            CHECK(std::abs(a[i].bot - b[i].bot) <= 1e-12);
        }
    }
}

TEST_CASE("simulate_beliefs properties") {
    ModelParams p{0.5, 0.2, 0.3, 0.7, 9, 11, 1};
    const std::vector<ObservationStep> keeps(6, keep());
    for (const auto& s : simulate_beliefs(p, ModelKind::M0, keeps)) CHECK(s == BeliefState{9, 11});

    ModelParams full{1.0, 0.0, 0.0, 0.5, 10, 10, 1};
    const std::vector<ObservationStep> seq{human(3), bot(20), human(17), keep(), bot(8)};
    const auto tr = simulate_beliefs(full, ModelKind::M0, seq);
    CHECK(tr[1].human == 3);
    CHECK(tr[3].human == 17);
    CHECK(tr[5].human == 17);

    // Decoupled: human chain ignores bot observations entirely.
    ModelParams dec{0.3, 0.0, 0.0, 0.6, 10, 10, 1};
    const std::vector<ObservationStep> s1{human(20), bot(0), human(20), bot(30)};
    const std::vector<ObservationStep> s2{human(20), bot(30), human(20), bot(0)};
    const auto t1 = simulate_beliefs(dec, ModelKind::M0, s1);
    const auto t2 = simulate_beliefs(dec, ModelKind::M0, s2);
    for (std::size_t i = 0; i < t1.size(); ++i) CHECK(t1[i].human == t2[i].human);
}

TEST_CASE("fixed point, contraction and bounds") {
    Rng rng(8);
    for (int rep = 0; rep < 500; ++rep) {
        ModelParams p{uniform01(rng), uniform01(rng), uniform01(rng), uniform01(rng), 10, 10, 1};
        const BeliefState s{30 * uniform01(rng), 30 * uniform01(rng)};
        CHECK(update_m0(s, human(s.human), p) == s);
        CHECK(update_m0(s, bot(s.bot), p) == s);

        const double r = uniform_int(rng, 0, 30);
        const double a = 0.01 + 0.98 * uniform01(rng);
        ModelParams q{a, 0, 0, a, 10, 10, 1};
        if (r != s.human) CHECK(std::abs(r - update_m0(s, human(r), q).human) < std::abs(r - s.human));
    }
    // With zero cross rates the selected chain stays within [min(B0,R), max(B0,R)].
    ModelParams p{0.6, 0, 0, 0.6, 12, 12, 1};
    std::vector<ObservationStep> steps;
    double lo = 12, hi = 12;
    for (int i = 0; i < 50; ++i) {
        const double r = uniform_int(rng, 5, 25);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        steps.push_back(human(r));
    }
    for (const auto& s : simulate_beliefs(p, ModelKind::M0, steps)) {
        CHECK(s.human >= lo);
        CHECK(s.human <= hi);
    }
}

TEST_CASE("report_loglik closed form") {
    const std::vector<BeliefState> tr{{10, 12}, {14, 13}};
    const double at_mean = -0.5 * std::log(2 * std::numbers::pi);
    CHECK(report_loglik(tr, std::vector<IndexedReport>{{0, Kind::Human, 10}}, 1.0) ==
          doctest::Approx(-0.91893853320467).epsilon(1e-12));
    CHECK(report_loglik(tr, std::vector<IndexedReport>{{1, Kind::Bot, 15}}, 2.0) ==
          doctest::Approx(at_mean - std::log(2.0) - 0.5).epsilon(1e-12));
    const std::vector<IndexedReport> many{{0, Kind::Human, 10}, {0, Kind::Bot, 12}, {1, Kind::Human, 14}};
    CHECK(std::abs(report_loglik(tr, many, 1.0) - 3 * at_mean) < 1e-9);
    CHECK_THROWS_AS(report_loglik(tr, std::vector<IndexedReport>{{2, Kind::Human, 1}}, 1.0), AlignmentError);
}

TEST_CASE("sequence_loglik equals simulate + report_loglik") {
    Rng rng(21);
    for (int rep = 0; rep < 50; ++rep) {
        ModelParams p{uniform01(rng), uniform01(rng), uniform01(rng), uniform01(rng), 30 * uniform01(rng),
                      30 * uniform01(rng), 0.5 + 5 * uniform01(rng)};
        const auto steps = random_steps(rng, 18);
        const auto tr = simulate_beliefs(p, ModelKind::M0, steps);
        std::vector<IndexedReport> reports, selected;
        for (std::size_t t = 0; t < steps.size(); ++t) {
            for (const auto& r : steps[t].reports) {
                reports.push_back({static_cast<int>(t), r.about, r.value});
                if (r.about_selected) selected.push_back({static_cast<int>(t), r.about, r.value});
            }
        }
        CHECK(std::abs(sequence_loglik(p, ModelKind::M0, steps) - report_loglik(tr, reports, p.sigma)) < 1e-9);
        CHECK(std::abs(sequence_loglik(p, ModelKind::M0, steps, ReportScope::SelectedOnly) -
                       report_loglik(tr, selected, p.sigma)) < 1e-9);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate(ModelParams{1.2, 0, 0, 0, 10, 10, 1}, ModelKind::M0), InvalidValue);
    CHECK_THROWS_AS(validate(ModelParams{0.2, 0, 0, 0, 10, 10, 0}, ModelKind::M0), InvalidValue);
    CHECK_THROWS_AS(validate(ModelParams{0.2, 0.1, 0.2, 0.2, 10, 10, 1}, ModelKind::M1), InvalidValue);
    CHECK_NOTHROW(validate(ModelParams::shared(0.2, 10, 1), ModelKind::M1));
}

TEST_CASE("box-constrained simplex") {
    Box box{{-1, -1}, {1, 1}};
    auto quad = [](std::span<const double> x) { return (x[0] - 0.3) * (x[0] - 0.3) + 2 * (x[1] + 0.2) * (x[1] + 0.2); };
    const std::vector<double> start{0.9, 0.9};
    const auto r = minimize_in_box(quad, start, box);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(0.3).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(-0.2).epsilon(1e-4));

    // Optimum outside the box lands on the boundary.
    auto outside = [](std::span<const double> x) { return (x[0] - 5) * (x[0] - 5) + x[1] * x[1]; };
    const auto b = minimize_in_box(outside, start, box);
    CHECK(b.x[0] == doctest::Approx(1.0));
    CHECK(std::abs(b.x[1]) < 1e-3);

    SimplexOptions few;
    few.max_evals = 10;
    CHECK(minimize_in_box(quad, start, box, few).evals <= 12);
}
