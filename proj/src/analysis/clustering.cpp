#include "psg/analysis/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "psg/core/errors.hpp"
#include "psg/core/rng.hpp"

namespace psg::analysis {

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

namespace {

double squared(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

std::map<int, std::vector<std::size_t>> members(const std::vector<int>& assignments) {
    std::map<int, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) out[assignments[i]].push_back(i);
    return out;
}

std::vector<double> mean_of(const Vectors& v, const std::vector<std::size_t>& idx) {
    std::vector<double> c(v[idx.front()].size(), 0.0);
    for (auto i : idx) {
        for (std::size_t d = 0; d < c.size(); ++d) c[d] += v[i][d];
    }
    for (auto& x : c) x /= static_cast<double>(idx.size());
    return c;
}

Vectors plus_plus_init(const Vectors& v, int k, Rng& rng) {
    Vectors centers{v[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(v.size()) - 1))]};
    std::vector<double> d2(v.size());
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, squared(v[i], c));
            d2[i] = best;
            total += best;
        }
        double u = uniform01(rng) * total;
        std::size_t pick = v.size() - 1;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (d2[i] > 0 && u < d2[i]) {
                pick = i;
                break;
            }
            u -= d2[i];
        }
        // Guard against rounding landing on an existing centre.
        if (d2[pick] == 0) pick = static_cast<std::size_t>(std::max_element(d2.begin(), d2.end()) - d2.begin());
        centers.push_back(v[pick]);
    }
    return centers;
}

KMeansResult lloyd(const Vectors& v, Vectors centers, int max_iterations) {
    const std::size_t k = centers.size();
    std::vector<int> assign(v.size(), -1);
    for (int iter = 0; iter < max_iterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < v.size(); ++i) {
            int best = 0;
            double bd = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = squared(v[i], centers[c]);
                if (d < bd) {
                    bd = d;
                    best = static_cast<int>(c);
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        // Refill empty clusters with the point farthest from its centre.
        auto groups = members(assign);
        for (std::size_t c = 0; c < k; ++c) {
            if (groups.count(static_cast<int>(c))) continue;
            std::size_t far = 0;
            double fd = -1;
            for (std::size_t i = 0; i < v.size(); ++i) {
                const double d = squared(v[i], centers[static_cast<std::size_t>(assign[i])]);
                if (d > fd && groups[assign[i]].size() > 1) {
                    fd = d;
                    far = i;
                }
            }
            auto& old = groups[assign[far]];
            old.erase(std::find(old.begin(), old.end(), far));
            assign[far] = static_cast<int>(c);
            groups[static_cast<int>(c)] = {far};
            changed = true;
        }
        for (const auto& [c, idx] : groups) centers[static_cast<std::size_t>(c)] = mean_of(v, idx);
        if (!changed) break;
    }
    KMeansResult r;
    r.assignments = assign;
    r.centroids = centers;
    for (std::size_t i = 0; i < v.size(); ++i) r.inertia += squared(v[i], centers[static_cast<std::size_t>(assign[i])]);
    return r;
}

}  // namespace

double silhouette_score(const Vectors& vectors, const std::vector<int>& assignments) {
    if (vectors.empty()) return 0.0;
    const auto groups = members(assignments);
    double total = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const auto& own = groups.at(assignments[i]);
        if (own.size() < 2) continue;
        double a = 0.0;
        for (auto j : own) a += euclidean(vectors[i], vectors[j]);
        a /= static_cast<double>(own.size() - 1);
        double b = std::numeric_limits<double>::infinity();
        for (const auto& [c, idx] : groups) {
            if (c == assignments[i]) continue;
            double d = 0.0;
            for (auto j : idx) d += euclidean(vectors[i], vectors[j]);
            b = std::min(b, d / static_cast<double>(idx.size()));
        }
        if (!std::isfinite(b)) continue;
        const double m = std::max(a, b);
        if (m > 0) total += (b - a) / m;
    }
    return total / static_cast<double>(vectors.size());
}

double davies_bouldin_index(const Vectors& vectors, const std::vector<int>& assignments) {
    const auto groups = members(assignments);
    if (groups.size() < 2) return 0.0;
    Vectors centers;
    std::vector<double> scatter;
    for (const auto& [c, idx] : groups) {
        centers.push_back(mean_of(vectors, idx));
        double s = 0.0;
        for (auto i : idx) s += euclidean(vectors[i], centers.back());
        scatter.push_back(s / static_cast<double>(idx.size()));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < centers.size(); ++j) {
            if (i == j) continue;
            const double m = euclidean(centers[i], centers[j]);
            worst = std::max(worst, m > 0 ? (scatter[i] + scatter[j]) / m : std::numeric_limits<double>::infinity());
        }
        total += worst;
    }
    return total / static_cast<double>(centers.size());
}

KMeansResult kmeans_with_scores(const Vectors& vectors, int k, const KMeansOptions& options) {
    if (k < 2) throw DegenerateInput("k must be at least 2");
    const std::set<std::vector<double>> distinct(vectors.begin(), vectors.end());
    if (static_cast<int>(distinct.size()) < k) {
        throw DegenerateInput("need at least " + std::to_string(k) + " distinct vectors, got " +
                              std::to_string(distinct.size()));
    }
    const std::size_t dim = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != dim) throw DegenerateInput("vectors differ in dimension");
    }

    const Seed root = Seed(options.seed).derive("kmeans");
    std::optional<KMeansResult> best;
    for (int r = 0; r < std::max(1, options.restarts); ++r) {
        Rng rng = root.derive("restart", static_cast<std::uint64_t>(r)).engine();
        auto result = lloyd(vectors, plus_plus_init(vectors, k, rng), options.max_iterations);
        if (!best || result.inertia < best->inertia) best = std::move(result);
    }
    best->silhouette = silhouette_score(vectors, best->assignments);
    best->davies_bouldin = davies_bouldin_index(vectors, best->assignments);
    return *best;
}

}  // namespace psg::analysis
