#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "psg/core/errors.hpp"
#include "psg/core/stats.hpp"
#include "psg/model/fitting.hpp"
#include "psg/model/synthetic.hpp"

using namespace psg;
using namespace psg::model;

namespace {

SyntheticConfig small_config() {
    SyntheticConfig c;
    c.n_groups = 4;
    c.n_rounds = 12;
    return c;
}

// Independent grid oracle: best pooled log-likelihood over a coarse grid,
// with sigma set to its closed-form optimum at each grid point.
double grid_best(const FitDataset& data, ModelKind model) {
    const std::vector<double> rates{0.0, 0.25, 0.5, 0.75, 1.0};
    const std::vector<double> beliefs{0.0, 7.5, 15.0, 22.5, 30.0};
    double best = -1e300;
    const auto score = [&](ModelParams p) {
        double sse = 0;
        double n = 0;
        for (const auto& g : data.groups) {
            for (const auto& s : g.selectors) {
                auto tr = simulate_beliefs(p, model, s.steps);
                for (std::size_t t = 0; t < s.steps.size(); ++t) {
                    for (const auto& r : s.steps[t].reports) {
                        const double d = r.value - tr[t].about(r.about);
                        sse += d * d;
                        n += 1;
                    }
                }
            }
        }
        const double sigma = std::clamp(std::sqrt(sse / n), 0.1, 15.0);
        return -n * 0.5 * std::log(2 * M_PI * sigma * sigma) - sse / (2 * sigma * sigma);
    };
    if (model == ModelKind::M1) {
        for (double a : rates)
            for (double b : beliefs) best = std::max(best, score(ModelParams::shared(a, b, 1)));
        return best;
    }
    for (double a1 : rates)
        for (double a2 : rates)
            for (double a3 : rates)
                for (double a4 : rates)
                    for (double b1 : beliefs)
                        for (double b2 : beliefs) best = std::max(best, score({a1, a2, a3, a4, b1, b2, 1}));
    return best;
}

}  // namespace

TEST_CASE("degenerate datasets") {
    CHECK_THROWS_AS(fit_mle(FitDataset{}, ModelKind::M0), DegenerateData);

    FitDataset keeps{{GroupData{"g", {SelectorSeries{"s", {ObservationStep{std::nullopt, 0, {{Kind::Human, 10, false}}}}}}}}};
    CHECK_THROWS_AS(fit_mle(keeps, ModelKind::M0), DegenerateData);

    FitDataset no_reports{{GroupData{"g", {SelectorSeries{"s", {ObservationStep{Kind::Human, 12, {}}}}}}}};
    CHECK_THROWS_AS(fit_mle(no_reports, ModelKind::M1), DegenerateData);

    FitDataset dup{{GroupData{"g", {}}, GroupData{"g", {}}}};
    CHECK_THROWS_AS(validate(dup), InvalidValue);
}

TEST_CASE("constant reports pin sigma at its lower bound") {
    SelectorSeries s{"s", {}};
    for (int t = 0; t < 10; ++t) {
        s.steps.push_back({t % 2 ? Kind::Human : Kind::Bot, 25.0, {{Kind::Human, 12, t % 2 == 1}, {Kind::Bot, 12, t % 2 == 0}}});
    }
    FitDataset data{{GroupData{"g", {s}}}};
    const auto fit = fit_mle(data, ModelKind::M1);
    CHECK(fit.params.sigma == doctest::Approx(0.1));
    CHECK(fit.hit("sigma"));
    CHECK(fit.params.alpha_hh == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(fit.params.b0_h == doctest::Approx(12.0).epsilon(1e-4));
}

TEST_CASE("fit beats a coarse grid oracle and M0 nests M1") {
    const auto data = simulate_dataset({0.5, 0.2, 0.1, 0.7, 12, 8, 2.5}, ModelKind::M0, small_config(), 17);
    FitOptions opts;
    opts.n_starts = 8;
    const auto m0 = fit_mle(data, ModelKind::M0, opts);
    const auto m1 = fit_mle(data, ModelKind::M1, opts);
    CHECK(m0.loglik >= grid_best(data, ModelKind::M0) - 1e-6);
    CHECK(m1.loglik >= grid_best(data, ModelKind::M1) - 1e-6);
    CHECK(m0.loglik >= m1.loglik - 1e-6);
    CHECK(m0.starts_tried == 8);
    CHECK(std::abs(m0.loglik - dataset_loglik(data, m0.params, ModelKind::M0)) < 1e-9);
}

TEST_CASE("fit is invariant to group order and additive in reports") {
    auto data = simulate_dataset({0.6, 0.1, 0.1, 0.6, 10, 10, 2}, ModelKind::M0, small_config(), 3);
    FitOptions opts;
    opts.n_starts = 5;
    const auto a = fit_mle(data, ModelKind::M0, opts);

    auto reversed = data;
    std::reverse(reversed.groups.begin(), reversed.groups.end());
    const auto b = fit_mle(reversed, ModelKind::M0, opts);
    CHECK(std::abs(a.loglik - b.loglik) < 1e-6);
    CHECK(std::abs(a.params.alpha_hh - b.params.alpha_hh) < 1e-3);

    auto doubled = data;
    for (auto& g : doubled.groups) {
        for (auto& s : g.selectors) {
            for (auto& step : s.steps) {
                const auto copy = step.reports;
                step.reports.insert(step.reports.end(), copy.begin(), copy.end());
            }
        }
    }
    CHECK(dataset_loglik(doubled, a.params, ModelKind::M0) ==
          doctest::Approx(2 * dataset_loglik(data, a.params, ModelKind::M0)).epsilon(1e-12));
    const auto d = fit_mle(doubled, ModelKind::M0, opts);
    CHECK(std::abs(d.params.alpha_hh - a.params.alpha_hh) < 1e-3);
    CHECK(std::abs(d.params.sigma - a.params.sigma) < 1e-3);
}

TEST_CASE("fits are deterministic given the seed") {
    const auto data = simulate_dataset(ModelParams::shared(0.4, 11, 2), ModelKind::M1, small_config(), 5);
    FitOptions opts;
    opts.seed = 99;
    opts.n_starts = 4;
    const auto a = fit_mle(data, ModelKind::M0, opts);
    const auto b = fit_mle(data, ModelKind::M0, opts);
    CHECK(a.loglik == b.loglik);
    CHECK(a.params.alpha_bh == b.params.alpha_bh);
}

TEST_CASE("selected-only scope ignores reports about the unselected candidate") {
    SelectorSeries s{"s", {{Kind::Human, 20, {{Kind::Human, 10, true}, {Kind::Bot, 30, false}}},
                           {Kind::Human, 20, {{Kind::Human, 14, true}, {Kind::Bot, 0, false}}}}};
    FitDataset data{{GroupData{"g", {s}}}};
    CHECK(data.report_count(ReportScope::SelectedOnly) == 2);
    const auto p = ModelParams::shared(0.4, 10, 1);
    CHECK(dataset_loglik(data, p, ModelKind::M1, ReportScope::SelectedOnly) ==
          doctest::Approx(2 * normal_logpdf(0, 0, 1)));
}

TEST_CASE("per-selector fits report degenerate selectors") {
    SelectorSeries good{"a", {{Kind::Human, 20, {{Kind::Human, 10, true}}}, {Kind::Bot, 25, {{Kind::Bot, 13, true}}}}};
    SelectorSeries keeper{"b", {{std::nullopt, 0, {{Kind::Human, 10, false}}}}};
    FitDataset data{{GroupData{"g", {good, keeper}}}};
    FitOptions opts;
    opts.n_starts = 2;
    const auto fits = fit_per_selector(data, ModelKind::M1, opts);
    REQUIRE(fits.size() == 2);
    CHECK(fits[0].result.has_value());
    CHECK_FALSE(fits[1].result.has_value());
    CHECK_FALSE(fits[1].error.empty());
}

TEST_CASE("leave-one-group-out cross-validation") {
    auto data = simulate_dataset({0.6, 0.0, 0.4, 0.6, 10, 10, 2}, ModelKind::M0, small_config(), 8);
    CvOptions opts;
    opts.fit.n_starts = 4;
    opts.fold_starts = 1;
    const auto cv = logo_cv(data, {ModelKind::M0, ModelKind::M1}, opts);
    CHECK(cv.folds.size() == 4);
    CHECK(cv.wins[0] + cv.wins[1] == 4);
    CHECK(cv.overall_winner() == ModelKind::M0);
    for (std::size_t i = 0; i < cv.folds.size(); ++i) CHECK(cv.folds[i].heldout == data.groups[i].id);

    FitDataset single{{data.groups[0]}};
    CHECK_THROWS_AS(logo_cv(single, {ModelKind::M0}), InsufficientGroups);

    FitDataset twins{{data.groups[0], data.groups[0]}};
    twins.groups[1].id = "twin";
    const auto t = logo_cv(twins, {ModelKind::M0, ModelKind::M1}, opts);
    CHECK(t.folds[0].loglik[0] == doctest::Approx(t.folds[1].loglik[0]).epsilon(1e-12));
    CHECK(t.folds[0].loglik[1] == doctest::Approx(t.folds[1].loglik[1]).epsilon(1e-12));
}

TEST_CASE("parameter recovery studies") {
    RecoveryConfig rc;
    rc.n_reps = 0;
    CHECK(parameter_recovery({0.6, 0.1, 0.1, 0.6, 10, 10, 2}, rc).rows.empty());

    rc.n_reps = 5;
    rc.fit.n_starts = 5;
    const auto no_cross = parameter_recovery({0.5, 0.0, 0.0, 0.5, 10, 10, 2}, rc);
    std::vector<double> hb, bh;
    for (const auto& r : no_cross.reps) {
        hb.push_back(r.fit.params.alpha_hb);
        bh.push_back(r.fit.params.alpha_bh);
    }
    CHECK(stats::median(hb) < 0.05);
    CHECK(stats::median(bh) < 0.05);
    CHECK(no_cross.row("sigma").median_ae < 0.3);
    CHECK(std::isnan(no_cross.row("alpha_hh").spearman));

    rc.truth_jitter = 0.2;
    rc.n_reps = 6;
    const auto jittered = parameter_recovery({0.5, 0.2, 0.2, 0.5, 10, 10, 2}, rc);
    CHECK(jittered.row("alpha_hh").spearman > 0.5);
    CHECK(jittered.rows.size() == 7);
}
