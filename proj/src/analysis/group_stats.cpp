#include "psg/analysis/group_stats.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "psg/core/errors.hpp"
#include "psg/core/stats.hpp"

namespace psg::analysis {

double t_test_p(double t, double df) {
    if (std::isinf(t)) return 0.0;
    const boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

namespace {

void finish(GroupStat& g, double diff, double se, double sd) {
    if (se == 0.0) {
        g.zero_variance = true;
        const double inf = std::numeric_limits<double>::infinity();
        g.t = diff == 0 ? 0.0 : std::copysign(inf, diff);
        g.cohens_d = diff == 0 ? 0.0 : std::copysign(inf, diff);
        g.p = diff == 0 ? 1.0 : 0.0;
        return;
    }
    g.t = diff / se;
    g.cohens_d = diff / sd;
    g.p = t_test_p(g.t, g.df);
}

}  // namespace

GroupStat group_stats(std::span<const double> a, std::span<const double> b, bool paired) {
    if (a.size() < 2 || b.size() < 2) {
        throw InsufficientGroups("group statistics need at least 2 groups per sample");
    }
    GroupStat g;
    g.paired = paired;
    g.n_a = static_cast<int>(a.size());
    g.n_b = static_cast<int>(b.size());
    g.mean_a = stats::mean(a);
    g.mean_b = stats::mean(b);
    g.sem_a = stats::sd(a) / std::sqrt(double(a.size()));
    g.sem_b = stats::sd(b) / std::sqrt(double(b.size()));
    g.mean_difference = g.mean_a - g.mean_b;

    if (paired) {
        if (a.size() != b.size()) throw InvalidValue("paired samples differ in size");
        std::vector<double> d(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
        const double sd = stats::sd(d);
        g.df = double(d.size()) - 1.0;
        finish(g, stats::mean(d), sd / std::sqrt(double(d.size())), sd);
        return g;
    }
    const double na = double(a.size()), nb = double(b.size());
    g.df = na + nb - 2.0;
    const double pooled = std::sqrt(((na - 1) * stats::variance(a) + (nb - 1) * stats::variance(b)) / g.df);
    finish(g, g.mean_difference, pooled * std::sqrt(1.0 / na + 1.0 / nb), pooled);
    return g;
}

}  // namespace psg::analysis
