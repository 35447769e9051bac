#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "psg/core/rules.hpp"

namespace psg::model {

enum class ModelKind { M0, M1 };

std::string_view to_string(ModelKind m) noexcept;
ModelKind model_from_string(std::string_view s);

// Learning rates are named source->target: alpha_hb is how strongly a
// prediction error from a selected human moves the belief about bots.
struct ModelParams {
    double alpha_hh = 0.3;
    double alpha_hb = 0.3;
    double alpha_bh = 0.3;
    double alpha_bb = 0.3;
    double b0_h = 10.0;
    double b0_b = 10.0;
    double sigma = 3.0;

    static ModelParams shared(double alpha, double b0, double sigma) {
        return {alpha, alpha, alpha, alpha, b0, b0, sigma};
    }
};

// Throws InvalidValue unless every rate is in [0,1] and sigma > 0; for M1
// also requires the tied structure.
void validate(const ModelParams& p, ModelKind model);

struct BeliefState {
    double human = 10.0;
    double bot = 10.0;

    double about(Kind k) const noexcept { return k == Kind::Human ? human : bot; }
    friend bool operator==(const BeliefState&, const BeliefState&) = default;
};

struct Report {
    Kind about = Kind::Human;
    double value = 0.0;
    bool about_selected = false;
};

// One round from one selector's point of view. Reports were elicited before
// the round's feedback, so they are scored against the pre-update belief.
struct ObservationStep {
    std::optional<Kind> selected;
    double observed_return = 0.0;
    std::vector<Report> reports;
};

enum class ReportScope { All, SelectedOnly };

BeliefState initial_state(const ModelParams& p) noexcept;

BeliefState update_m0(const BeliefState& state, const ObservationStep& step, const ModelParams& p) noexcept;
BeliefState update_m1(const BeliefState& state, const ObservationStep& step, const ModelParams& p) noexcept;
BeliefState update(ModelKind model, const BeliefState& state, const ObservationStep& step,
                   const ModelParams& p) noexcept;

// Fold of the update rule from the initial beliefs; returns steps.size()+1 states.
std::vector<BeliefState> simulate_beliefs(const ModelParams& p, ModelKind model, std::span<const ObservationStep> steps);

struct IndexedReport {
    int round = 0;
    Kind about = Kind::Human;
    double value = 0.0;
};

// Sum of natural-log normal densities of each report around the trajectory
// belief of the same round and type. Throws AlignmentError for a report
// whose round is outside the trajectory.
double report_loglik(std::span<const BeliefState> trajectory, std::span<const IndexedReport> reports, double sigma);

struct ResidualSum {
    double sse = 0.0;
    std::size_t count = 0;
};

// Squared report residuals against the pre-update beliefs. The likelihood
// depends on the data only through this pair, which lets the fitter solve
// for sigma in closed form.
ResidualSum sequence_residuals(const ModelParams& p, ModelKind model, std::span<const ObservationStep> steps,
                               ReportScope scope = ReportScope::All) noexcept;

double gaussian_loglik(const ResidualSum& r, double sigma) noexcept;

// Fused simulate + score used by the fitter; no allocation.
double sequence_loglik(const ModelParams& p, ModelKind model, std::span<const ObservationStep> steps,
                       ReportScope scope = ReportScope::All) noexcept;

double normal_logpdf(double x, double mean, double sigma) noexcept;

}  // namespace psg::model
