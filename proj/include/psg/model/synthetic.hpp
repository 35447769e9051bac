#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psg/model/fitting.hpp"

namespace psg::model {

// Headless generator for fitting studies: barrier-scheduled groups with
// clipped-Gaussian candidate returns and model-driven selectors. No message
// text is produced.
struct SyntheticConfig {
    int n_groups = 15;
    int n_rounds = 18;
    int n_selectors = 5;
    int n_human_candidates = 5;
    int n_bot_candidates = 5;
    double human_return_mean = 11.38;
    double human_return_sd = 6.48;
    double bot_return_mean = 19.1;
    double bot_return_sd = 3.37;
    double beta = 0.5;
    double keep_value = 10.0;
    double p_correct = 0.5;
    bool transparent = false;
};

FitDataset simulate_dataset(const ModelParams& truth, ModelKind model, const SyntheticConfig& config,
                            std::uint64_t seed);

struct RecoveryConfig {
    SyntheticConfig sim;
    ModelKind model = ModelKind::M0;
    int n_reps = 20;
    std::uint64_t seed = 0;
    // Each replication perturbs every free parameter of the truth uniformly
    // by up to this amount (clipped to the bounds), which makes the rank
    // correlation between truth and estimate meaningful.
    double truth_jitter = 0.0;
    FitOptions fit;
};

struct RecoveryRow {
    std::string parameter;
    double truth_mean = 0.0;
    double bias = 0.0;
    double mae = 0.0;
    double median_ae = 0.0;
    double spearman = 0.0;  // NaN when the truth does not vary
};

struct RecoveryRep {
    ModelParams truth;
    FitResult fit;
};

struct RecoveryReport {
    std::vector<RecoveryRow> rows;
    std::vector<RecoveryRep> reps;

    const RecoveryRow& row(const std::string& parameter) const;
};

RecoveryReport parameter_recovery(const ModelParams& truth, const RecoveryConfig& config);

// Named parameter access shared by reports and CSV writers.
double parameter_value(const ModelParams& p, const std::string& name);

}  // namespace psg::model
