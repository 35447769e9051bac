#include "psg/analysis/predictability.hpp"

#include <algorithm>
#include <set>

#include <Eigen/Dense>

#include "psg/core/errors.hpp"

namespace psg::analysis {

std::vector<ReturnObservation> return_observations(const std::vector<RoundRecord>& records,
                                                   const PromiseReader& reader) {
    std::vector<ReturnObservation> out;
    for (const auto& r : records) {
        for (auto slot : {Slot::A, Slot::B}) {
            const PromiseParse p = reader ? reader(r, slot) : extract_promise_regex(r.reply(slot));
            out.push_back({r.triad.selector.group, r.triad.candidate(slot).kind,
                           static_cast<double>(message_length(r.reply(slot))), p.made,
                           p.made ? static_cast<double>(p.amount) : 0.0, static_cast<double>(r.returned(slot))});
        }
    }
    return out;
}

PredictabilityResult return_predictability(const std::vector<ReturnObservation>& observations, Kind kind) {
    std::vector<ReturnObservation> rows;
    std::set<int> groups;
    for (const auto& o : observations) {
        if (o.kind != kind) continue;
        rows.push_back(o);
        groups.insert(o.group);
    }
    if (groups.size() < 2) {
        throw InsufficientGroups("return predictability needs at least 2 groups with " +
                                 std::string(to_string(kind)) + " candidates");
    }

    PredictabilityResult result;
    result.kind = kind;
    double total_sq = 0.0;
    for (int held : groups) {
        std::vector<int> train_groups;
        for (int g : groups) {
            if (g != held) train_groups.push_back(g);
        }
        const auto n_train = static_cast<Eigen::Index>(
            std::count_if(rows.begin(), rows.end(), [&](const ReturnObservation& o) { return o.group != held; }));
        const Eigen::Index n_groups = static_cast<Eigen::Index>(train_groups.size());
        Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n_train, 3 + n_groups);
        Eigen::VectorXd y(n_train);
        Eigen::Index i = 0;
        for (const auto& o : rows) {
            if (o.group == held) continue;
            x(i, 0) = o.length;
            x(i, 1) = o.promise_made ? 1.0 : 0.0;
            x(i, 2) = o.promised;
            const auto gi = std::find(train_groups.begin(), train_groups.end(), o.group) - train_groups.begin();
            x(i, 3 + gi) = 1.0;
            y(i) = o.returned;
            ++i;
        }
        const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
        if (qr.rank() < x.cols()) {
            throw SingularDesign("return predictors are collinear or constant for " + std::string(to_string(kind)) +
                                 " candidates (held-out group " + std::to_string(held) + ")");
        }
        const Eigen::VectorXd beta = qr.solve(y);
        const double intercept = beta.tail(n_groups).mean();

        PredictabilityFold fold{held, 0, 0.0};
        for (const auto& o : rows) {
            if (o.group != held) continue;
            const double pred =
                beta(0) * o.length + beta(1) * (o.promise_made ? 1.0 : 0.0) + beta(2) * o.promised + intercept;
            const double e = o.returned - pred;
            fold.mse += e * e;
            ++fold.n;
        }
        total_sq += fold.mse;
        result.n += fold.n;
        fold.mse /= fold.n;
        result.folds.push_back(fold);
    }
    result.mse = total_sq / result.n;
    return result;
}

}  // namespace psg::analysis
