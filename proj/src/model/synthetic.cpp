#include "psg/model/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psg/agents/scripted.hpp"
#include "psg/core/errors.hpp"
#include "psg/core/stats.hpp"
#include "psg/matching/schedule.hpp"

namespace psg::model {

namespace {

int draw_return(double mean, double sd, Rng& rng) {
    const double v = mean + sd * standard_normal(rng);
    return static_cast<int>(std::lround(std::clamp(v, 0.0, 30.0)));
}

}  // namespace

FitDataset simulate_dataset(const ModelParams& truth, ModelKind model, const SyntheticConfig& config,
                            std::uint64_t seed) {
    validate(truth, model);
    const int n_candidates = config.n_human_candidates + config.n_bot_candidates;
    const Seed root(seed);

    agents::LearningSelectorParams sp;
    sp.model = truth;
    sp.model_kind = model;
    sp.beta = config.beta;
    sp.keep_value = config.keep_value;
    sp.p_correct = config.p_correct;

    FitDataset data;
    for (int g = 0; g < config.n_groups; ++g) {
        const Seed gs = root.derive("group", static_cast<std::uint64_t>(g));
        Rng sched_rng = gs.derive("schedule").engine();
        const auto schedule = matching::build_schedule(config.n_selectors, n_candidates, config.n_rounds, sched_rng);
        Rng return_rng = gs.derive("returns").engine();
        const auto kind_of = [&](int c) { return c < config.n_human_candidates ? Kind::Human : Kind::Bot; };

        std::vector<agents::LearningSelector> selectors;
        std::vector<Rng> selector_rngs;
        GroupData group{"g" + std::to_string(g), {}};
        for (int s = 0; s < config.n_selectors; ++s) {
            selectors.emplace_back(sp, agents::default_template_pack());
            selector_rngs.push_back(gs.derive("selector", static_cast<std::uint64_t>(s)).engine());
            group.selectors.push_back({"g" + std::to_string(g) + ".s" + std::to_string(s), {}});
        }

        for (const auto& round : schedule.rounds) {
            for (const auto& a : round.assignments) {
                auto& sel = selectors[static_cast<std::size_t>(a.selector)];
                auto& rng = selector_rngs[static_cast<std::size_t>(a.selector)];
                const Kind ka = kind_of(a.candidate_a);
                const Kind kb = kind_of(a.candidate_b);
                const auto ret = [&](Kind k) {
                    return k == Kind::Human ? draw_return(config.human_return_mean, config.human_return_sd, return_rng)
                                            : draw_return(config.bot_return_mean, config.bot_return_sd, return_rng);
                };
                const int ra = ret(ka);
                const int rb = ret(kb);

                agents::SelectorView view;
                view.true_a = ka;
                view.true_b = kb;
                if (config.transparent) {
                    view.shown_a = ka;
                    view.shown_b = kb;
                }
                const auto choice = sel.choose(view, rng);
                const auto report = sel.report_beliefs(view, rng);
                sel.observe({choice, ra, rb, ka, kb});

                ObservationStep step;
                if (choice == SelectorChoice::InvestA) {
                    step.selected = ka;
                    step.observed_return = ra;
                } else if (choice == SelectorChoice::InvestB) {
                    step.selected = kb;
                    step.observed_return = rb;
                }
                step.reports.push_back({ka, double(report.expected_return_a), choice == SelectorChoice::InvestA});
                step.reports.push_back({kb, double(report.expected_return_b), choice == SelectorChoice::InvestB});
                group.selectors[static_cast<std::size_t>(a.selector)].steps.push_back(std::move(step));
            }
        }
        data.groups.push_back(std::move(group));
    }
    return data;
}

double parameter_value(const ModelParams& p, const std::string& name) {
    if (name == "alpha_hh" || name == "alpha") return p.alpha_hh;
    if (name == "alpha_hb") return p.alpha_hb;
    if (name == "alpha_bh") return p.alpha_bh;
    if (name == "alpha_bb") return p.alpha_bb;
    if (name == "b0_h" || name == "b0") return p.b0_h;
    if (name == "b0_b") return p.b0_b;
    if (name == "sigma") return p.sigma;
    throw InvalidValue("unknown parameter: " + name);
}

const RecoveryRow& RecoveryReport::row(const std::string& parameter) const {
    for (const auto& r : rows) {
        if (r.parameter == parameter) return r;
    }
    throw InvalidValue("no recovery row for " + parameter);
}

namespace {

ModelParams jitter(const ModelParams& truth, ModelKind model, double amount, const FitBounds& b, Rng& rng) {
    const auto move = [&](double v, double lo, double hi, double scale) {
        return std::clamp(v + (2 * uniform01(rng) - 1) * amount * scale, lo, hi);
    };
    if (model == ModelKind::M1) {
        return ModelParams::shared(move(truth.alpha_hh, b.alpha_lo, b.alpha_hi, 1.0),
                                   move(truth.b0_h, b.b0_lo, b.b0_hi, 10.0),
                                   move(truth.sigma, b.sigma_lo, b.sigma_hi, 2.0));
    }
    // Rates move by `amount`; beliefs and noise by proportionally larger steps.
    return {move(truth.alpha_hh, b.alpha_lo, b.alpha_hi, 1.0), move(truth.alpha_hb, b.alpha_lo, b.alpha_hi, 1.0),
            move(truth.alpha_bh, b.alpha_lo, b.alpha_hi, 1.0), move(truth.alpha_bb, b.alpha_lo, b.alpha_hi, 1.0),
            move(truth.b0_h, b.b0_lo, b.b0_hi, 10.0),          move(truth.b0_b, b.b0_lo, b.b0_hi, 10.0),
            move(truth.sigma, b.sigma_lo, b.sigma_hi, 2.0)};
}

}  // namespace

RecoveryReport parameter_recovery(const ModelParams& truth, const RecoveryConfig& config) {
    RecoveryReport report;
    if (config.n_reps <= 0) return report;
    validate(truth, config.model);

    const Seed root(config.seed);
    for (int rep = 0; rep < config.n_reps; ++rep) {
        const Seed rs = root.derive("rep", static_cast<std::uint64_t>(rep));
        Rng jr = rs.derive("truth").engine();
        const ModelParams t =
            config.truth_jitter > 0 ? jitter(truth, config.model, config.truth_jitter, config.fit.bounds, jr) : truth;
        const auto data = simulate_dataset(t, config.model, config.sim, rs.derive("data").value());
        FitOptions fo = config.fit;
        fo.seed = rs.derive("fit").value();
        report.reps.push_back({t, fit_mle(data, config.model, fo)});
    }

    for (const auto& name : parameter_names(config.model)) {
        std::vector<double> truths, estimates, errors, abs_errors;
        for (const auto& r : report.reps) {
            truths.push_back(parameter_value(r.truth, name));
            estimates.push_back(parameter_value(r.fit.params, name));
            errors.push_back(estimates.back() - truths.back());
            abs_errors.push_back(std::abs(errors.back()));
        }
        report.rows.push_back({name, stats::mean(truths), stats::mean(errors), stats::mean(abs_errors),
                               stats::median(abs_errors), stats::spearman(truths, estimates)});
    }
    return report;
}

}  // namespace psg::model
