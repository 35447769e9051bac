#include "psg/model/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "psg/core/errors.hpp"
#include "psg/core/rng.hpp"

namespace psg::model {

std::size_t FitDataset::invest_rounds() const noexcept {
    std::size_t n = 0;
    for (const auto& g : groups) {
        for (const auto& s : g.selectors) {
            for (const auto& step : s.steps) n += step.selected.has_value();
        }
    }
    return n;
}

std::size_t FitDataset::report_count(ReportScope scope) const noexcept {
    std::size_t n = 0;
    for (const auto& g : groups) {
        for (const auto& s : g.selectors) {
            for (const auto& step : s.steps) {
                for (const auto& r : step.reports) n += scope == ReportScope::All || r.about_selected;
            }
        }
    }
    return n;
}

void validate(const FitDataset& data) {
    std::set<std::string> ids;
    for (const auto& g : data.groups) {
        if (!ids.insert(g.id).second) throw InvalidValue("duplicate group id: " + g.id);
    }
}

bool FitResult::hit(const std::string& name) const {
    return std::find(bounds_hit.begin(), bounds_hit.end(), name) != bounds_hit.end();
}

const std::vector<std::string>& parameter_names(ModelKind model) {
    static const std::vector<std::string> m0{"alpha_hh", "alpha_hb", "alpha_bh", "alpha_bb", "b0_h", "b0_b", "sigma"};
    static const std::vector<std::string> m1{"alpha", "b0", "sigma"};
    return model == ModelKind::M0 ? m0 : m1;
}

double dataset_loglik(const FitDataset& data, const ModelParams& p, ModelKind model, ReportScope scope) {
    double total = 0.0;
    for (const auto& g : data.groups) {
        for (const auto& s : g.selectors) total += sequence_loglik(p, model, s.steps, scope);
    }
    return total;
}

namespace {

// Free vector: M0 = 4 rates + 2 initial beliefs, M1 = 1 rate + 1 initial belief.
ModelParams unpack(ModelKind model, std::span<const double> x, double sigma) {
    if (model == ModelKind::M0) return {x[0], x[1], x[2], x[3], x[4], x[5], sigma};
    return ModelParams::shared(x[0], x[1], sigma);
}

std::vector<double> pack(ModelKind model, const ModelParams& p) {
    if (model == ModelKind::M0) return {p.alpha_hh, p.alpha_hb, p.alpha_bh, p.alpha_bb, p.b0_h, p.b0_b};
    return {p.alpha_hh, p.b0_h};
}

Box free_box(ModelKind model, const FitBounds& b) {
    if (model == ModelKind::M0) {
        return {{b.alpha_lo, b.alpha_lo, b.alpha_lo, b.alpha_lo, b.b0_lo, b.b0_lo},
                {b.alpha_hi, b.alpha_hi, b.alpha_hi, b.alpha_hi, b.b0_hi, b.b0_hi}};
    }
    return {{b.alpha_lo, b.b0_lo}, {b.alpha_hi, b.b0_hi}};
}

struct Evaluation {
    double loglik;
    double sigma;
};

class Objective {
public:
    Objective(const FitDataset& data, ModelKind model, const FitOptions& opts)
        : model_(model), opts_(opts) {
        for (const auto& g : data.groups) {
            for (const auto& s : g.selectors) series_.push_back(&s.steps);
        }
    }

    Evaluation evaluate(std::span<const double> x) const {
        const ModelParams p = unpack(model_, x, 1.0);
        ResidualSum total;
        for (const auto* steps : series_) {
            const auto r = sequence_residuals(p, model_, *steps, opts_.scope);
            total.sse += r.sse;
            total.count += r.count;
        }
        const auto& b = opts_.bounds;
        const double sigma = std::clamp(std::sqrt(total.sse / static_cast<double>(total.count)), b.sigma_lo, b.sigma_hi);
        return {gaussian_loglik(total, sigma), sigma};
    }

private:
    ModelKind model_;
    const FitOptions& opts_;
    std::vector<const std::vector<ObservationStep>*> series_;
};

std::vector<double> clamp_into(std::vector<double> x, const Box& box) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], box.lower[i], box.upper[i]);
    return x;
}

}  // namespace

FitResult fit_mle(const FitDataset& data, ModelKind model, const FitOptions& options) {
    validate(data);
    if (data.invest_rounds() == 0) throw DegenerateData("dataset has no invest rounds");
    if (data.report_count(options.scope) == 0) throw DegenerateData("dataset has no belief reports");
    if (options.n_starts < 1) throw InvalidValue("n_starts must be >= 1");

    const Objective objective(data, model, options);
    const Box box = free_box(model, options.bounds);
    const auto f = [&](std::span<const double> x) { return -objective.evaluate(x).loglik; };

    std::vector<std::vector<double>> starts;
    starts.push_back(clamp_into(pack(model, ModelParams{}), box));
    for (const auto& p : options.extra_starts) starts.push_back(clamp_into(pack(model, p), box));
    const Seed root = Seed(options.seed).derive("fit-starts");
    for (int i = 1; i < options.n_starts; ++i) {
        Rng rng = root.derive("start", static_cast<std::uint64_t>(i)).engine();
        std::vector<double> x(box.size());
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = box.lower[k] + uniform01(rng) * (box.upper[k] - box.lower[k]);
        starts.push_back(std::move(x));
    }

    std::optional<SimplexResult> best;
    int evals = 0;
    for (const auto& s : starts) {
        auto r = minimize_in_box(f, s, box, options.simplex);
        evals += r.evals;
        if (!best || r.value < best->value) best = std::move(r);
    }
    // One restart from the winner guards against a collapsed simplex.
    auto polished = minimize_in_box(f, best->x, box, options.simplex);
    evals += polished.evals;
    if (polished.value <= best->value) best = std::move(polished);

    const auto ev = objective.evaluate(best->x);
    FitResult out;
    out.model = model;
    out.params = unpack(model, best->x, ev.sigma);
    out.loglik = ev.loglik;
    out.starts_tried = static_cast<int>(starts.size());
    out.converged = best->converged;
    out.evals = evals;

    const auto& names = parameter_names(model);
    for (std::size_t k = 0; k < box.size(); ++k) {
        const double tol = 1e-6 * (box.upper[k] - box.lower[k]);
        if (best->x[k] - box.lower[k] <= tol || box.upper[k] - best->x[k] <= tol) out.bounds_hit.push_back(names[k]);
    }
    if (ev.sigma <= options.bounds.sigma_lo || ev.sigma >= options.bounds.sigma_hi) out.bounds_hit.push_back("sigma");
    return out;
}

std::vector<SelectorFit> fit_per_selector(const FitDataset& data, ModelKind model, const FitOptions& options) {
    std::vector<SelectorFit> out;
    for (const auto& g : data.groups) {
        for (const auto& s : g.selectors) {
            SelectorFit fit{g.id, s.id, std::nullopt, ""};
            FitDataset one{{GroupData{g.id, {s}}}};
            try {
                fit.result = fit_mle(one, model, options);
            } catch (const DegenerateData& e) {
                fit.error = e.what();
            }
            out.push_back(std::move(fit));
        }
    }
    return out;
}

ModelKind CvReport::overall_winner() const {
    const auto it = std::max_element(mean.begin(), mean.end());
    return models.at(static_cast<std::size_t>(it - mean.begin()));
}

CvReport logo_cv(const FitDataset& data, const std::vector<ModelKind>& models, const CvOptions& options) {
    validate(data);
    if (data.groups.size() < 2) {
        throw InsufficientGroups("cross-validation needs at least 2 groups, got " + std::to_string(data.groups.size()));
    }
    if (models.empty()) throw InvalidValue("no models to compare");

    CvReport report;
    report.models = models;
    report.wins.assign(models.size(), 0);

    std::vector<ModelParams> warm;
    for (auto m : models) warm.push_back(fit_mle(data, m, options.fit).params);

    for (std::size_t held = 0; held < data.groups.size(); ++held) {
        FitDataset train;
        for (std::size_t g = 0; g < data.groups.size(); ++g) {
            if (g != held) train.groups.push_back(data.groups[g]);
        }
        const FitDataset test{{data.groups[held]}};

        CvFold fold{data.groups[held].id, {}, 0};
        for (std::size_t m = 0; m < models.size(); ++m) {
            FitOptions fo = options.fit;
            fo.n_starts = 1 + options.fold_starts;
            fo.seed = Seed(options.fit.seed).derive("folds").value();
            fo.extra_starts = {warm[m]};
            const auto fit = fit_mle(train, models[m], fo);
            fold.loglik.push_back(dataset_loglik(test, fit.params, models[m], options.fit.scope));
        }
        fold.winner = static_cast<std::size_t>(std::max_element(fold.loglik.begin(), fold.loglik.end()) -
                                               fold.loglik.begin());
        ++report.wins[fold.winner];
        report.folds.push_back(std::move(fold));
    }

    const double n = static_cast<double>(report.folds.size());
    for (std::size_t m = 0; m < models.size(); ++m) {
        double sum = 0.0;
        for (const auto& f : report.folds) sum += f.loglik[m];
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& f : report.folds) ss += (f.loglik[m] - mean) * (f.loglik[m] - mean);
        report.mean.push_back(mean);
        report.sem.push_back(std::sqrt(ss / (n - 1.0)) / std::sqrt(n));
    }
    return report;
}

}  // namespace psg::model
