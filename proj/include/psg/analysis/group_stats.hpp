#pragma once

#include <span>

namespace psg::analysis {

struct GroupStat {
    bool paired = false;
    int n_a = 0;
    int n_b = 0;
    double mean_a = 0.0;
    double mean_b = 0.0;
    double sem_a = 0.0;
    double sem_b = 0.0;
    double mean_difference = 0.0;
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;  // two-sided
    double cohens_d = 0.0;
    // Set when the relevant variance is zero; t and d are then 0 (no
    // difference) or +-inf, and p is 1 or 0.
    bool zero_variance = false;
};

// Paired (d_z on the differences) or pooled-variance two-sample t-test on
// per-group values. Throws InsufficientGroups for fewer than two values per
// sample, and InvalidValue for paired samples of different sizes.
GroupStat group_stats(std::span<const double> a, std::span<const double> b, bool paired);

// Two-sided p-value for a t statistic.
double t_test_p(double t, double df);

}  // namespace psg::analysis
