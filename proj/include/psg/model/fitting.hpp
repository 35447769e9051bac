#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psg/model/belief.hpp"
#include "psg/model/optimizer.hpp"

namespace psg::model {

struct SelectorSeries {
    std::string id;
    std::vector<ObservationStep> steps;  // time-ordered
};

struct GroupData {
    std::string id;
    std::vector<SelectorSeries> selectors;
};

struct FitDataset {
    std::vector<GroupData> groups;

    std::size_t invest_rounds() const noexcept;
    std::size_t report_count(ReportScope scope = ReportScope::All) const noexcept;
};

// Throws InvalidValue on duplicate group ids.
void validate(const FitDataset& data);

struct FitBounds {
    double alpha_lo = 0.0, alpha_hi = 1.0;
    double b0_lo = 0.0, b0_hi = 30.0;
    double sigma_lo = 0.1, sigma_hi = 15.0;
};

struct FitOptions {
    FitBounds bounds;
    int n_starts = 20;
    std::uint64_t seed = 0;
    SimplexOptions simplex;
    ReportScope scope = ReportScope::All;
    // Tried before the random starts (after the default start).
    std::vector<ModelParams> extra_starts;
};

struct FitResult {
    ModelKind model = ModelKind::M0;
    ModelParams params;
    double loglik = 0.0;
    int starts_tried = 0;
    bool converged = false;
    int evals = 0;
    // Names of parameters sitting on a bound, e.g. "sigma" or "alpha_hb".
    std::vector<std::string> bounds_hit;

    bool hit(const std::string& name) const;
};

// Parameter names in the order used by the fitter's free vector.
const std::vector<std::string>& parameter_names(ModelKind model);

// Pooled log-likelihood of the whole dataset.
double dataset_loglik(const FitDataset& data, const ModelParams& p, ModelKind model,
                      ReportScope scope = ReportScope::All);

// Best of n_starts bounded simplex searches. Sigma is concentrated out: for
// any other parameter values the likelihood peaks at sqrt(SSE/n) clipped to
// the sigma bounds, so the simplex only moves the learning rates and the
// initial beliefs. Throws DegenerateData when there are no invest rounds or
// no reports.
FitResult fit_mle(const FitDataset& data, ModelKind model, const FitOptions& options = {});

struct SelectorFit {
    std::string group;
    std::string selector;
    std::optional<FitResult> result;
    std::string error;
};

std::vector<SelectorFit> fit_per_selector(const FitDataset& data, ModelKind model, const FitOptions& options = {});

struct CvFold {
    std::string heldout;
    std::vector<double> loglik;  // one per model, same order as CvReport::models
    std::size_t winner = 0;
};

struct CvReport {
    std::vector<ModelKind> models;
    std::vector<CvFold> folds;
    std::vector<double> mean;  // per model
    std::vector<double> sem;   // across held-out groups
    std::vector<int> wins;

    // Model with the higher mean out-of-sample log-likelihood.
    ModelKind overall_winner() const;
};

struct CvOptions {
    FitOptions fit;
    // Random starts per fold; every fold also starts from the full-data
    // optimum and the default start.
    int fold_starts = 3;
};

// Leave-one-group-out cross-validation. Throws InsufficientGroups for fewer
// than two groups.
CvReport logo_cv(const FitDataset& data, const std::vector<ModelKind>& models, const CvOptions& options = {});

}  // namespace psg::model
