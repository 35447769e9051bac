#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "psg/analysis/text.hpp"
#include "psg/core/rules.hpp"

namespace psg::analysis {

struct ReturnObservation {
    int group = 0;
    Kind kind = Kind::Human;
    double length = 0.0;
    bool promise_made = false;
    double promised = 0.0;  // 0 when no promise
    double returned = 0.0;
};

using PromiseReader = std::function<PromiseParse(const RoundRecord&, Slot)>;

// Two observations per round, one per candidate. The default reader runs
// the offline promise extractor on each reply.
std::vector<ReturnObservation> return_observations(const std::vector<RoundRecord>& records,
                                                   const PromiseReader& reader = {});

struct PredictabilityFold {
    int heldout_group = 0;
    int n = 0;
    double mse = 0.0;
};

struct PredictabilityResult {
    Kind kind = Kind::Human;
    std::vector<PredictabilityFold> folds;
    double mse = 0.0;  // pooled over all held-out observations
    int n = 0;
};

// Least squares of return on (length, promise made, promised amount) with a
// separate intercept per training group; a held-out group is predicted with
// the mean training intercept. This stands in for a mixed model's random
// intercepts without shrinkage. Every group is held out once. Throws
// InsufficientGroups for fewer than two groups of this kind and
// SingularDesign when the design is rank deficient.
PredictabilityResult return_predictability(const std::vector<ReturnObservation>& observations, Kind kind);

}  // namespace psg::analysis
