#include "psg/model/belief.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "psg/core/errors.hpp"

namespace psg::model {

std::string_view to_string(ModelKind m) noexcept {
    return m == ModelKind::M0 ? "M0" : "M1";
}

ModelKind model_from_string(std::string_view s) {
    if (s == "M0" || s == "m0") return ModelKind::M0;
    if (s == "M1" || s == "m1") return ModelKind::M1;
    throw InvalidValue("unknown model: " + std::string(s));
}

void validate(const ModelParams& p, ModelKind model) {
    for (double a : {p.alpha_hh, p.alpha_hb, p.alpha_bh, p.alpha_bb}) {
        if (!(a >= 0.0 && a <= 1.0)) throw InvalidValue("learning rate outside [0,1]");
    }
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) throw InvalidValue("report noise must be positive");
    if (!std::isfinite(p.b0_h) || !std::isfinite(p.b0_b)) throw InvalidValue("initial beliefs must be finite");
    if (model == ModelKind::M1) {
        const bool tied = p.alpha_hh == p.alpha_hb && p.alpha_hh == p.alpha_bh && p.alpha_hh == p.alpha_bb &&
                          p.b0_h == p.b0_b;
        if (!tied) throw InvalidValue("M1 requires one shared learning rate and one initial belief");
    }
}

BeliefState initial_state(const ModelParams& p) noexcept {
    return {p.b0_h, p.b0_b};
}

BeliefState update_m0(const BeliefState& state, const ObservationStep& step, const ModelParams& p) noexcept {
    if (!step.selected) return state;
    if (*step.selected == Kind::Human) {
        const double error = step.observed_return - state.human;
        return {state.human + p.alpha_hh * error, state.bot + p.alpha_hb * error};
    }
    const double error = step.observed_return - state.bot;
    return {state.human + p.alpha_bh * error, state.bot + p.alpha_bb * error};
}

BeliefState update_m1(const BeliefState& state, const ObservationStep& step, const ModelParams& p) noexcept {
    if (!step.selected) return state;
    const double b = state.human + p.alpha_hh * (step.observed_return - state.human);
    return {b, b};
}

BeliefState update(ModelKind model, const BeliefState& state, const ObservationStep& step,
                   const ModelParams& p) noexcept {
    return model == ModelKind::M0 ? update_m0(state, step, p) : update_m1(state, step, p);
}

std::vector<BeliefState> simulate_beliefs(const ModelParams& p, ModelKind model,
                                          std::span<const ObservationStep> steps) {
    std::vector<BeliefState> out;
    out.reserve(steps.size() + 1);
    out.push_back(initial_state(p));
    for (const auto& step : steps) out.push_back(update(model, out.back(), step, p));
    return out;
}

double normal_logpdf(double x, double mean, double sigma) noexcept {
    static const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
    const double z = (x - mean) / sigma;
    return -kHalfLog2Pi - std::log(sigma) - 0.5 * z * z;
}

double report_loglik(std::span<const BeliefState> trajectory, std::span<const IndexedReport> reports, double sigma) {
    if (!(sigma > 0.0)) throw InvalidValue("report noise must be positive");
    double total = 0.0;
    for (const auto& r : reports) {
        if (r.round < 0 || static_cast<std::size_t>(r.round) >= trajectory.size()) {
            throw AlignmentError("report round " + std::to_string(r.round) + " outside trajectory of length " +
                                 std::to_string(trajectory.size()));
        }
        total += normal_logpdf(r.value, trajectory[static_cast<std::size_t>(r.round)].about(r.about), sigma);
    }
    return total;
}

ResidualSum sequence_residuals(const ModelParams& p, ModelKind model, std::span<const ObservationStep> steps,
                               ReportScope scope) noexcept {
    BeliefState state = initial_state(p);
    ResidualSum out;
    for (const auto& step : steps) {
        for (const auto& r : step.reports) {
            if (scope == ReportScope::SelectedOnly && !r.about_selected) continue;
            const double d = r.value - state.about(r.about);
            out.sse += d * d;
            ++out.count;
        }
        state = update(model, state, step, p);
    }
    return out;
}

double gaussian_loglik(const ResidualSum& r, double sigma) noexcept {
    static const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
    return -static_cast<double>(r.count) * (kHalfLog2Pi + std::log(sigma)) - 0.5 * r.sse / (sigma * sigma);
}

double sequence_loglik(const ModelParams& p, ModelKind model, std::span<const ObservationStep> steps,
                       ReportScope scope) noexcept {
    return gaussian_loglik(sequence_residuals(p, model, steps, scope), p.sigma);
}

}  // namespace psg::model
