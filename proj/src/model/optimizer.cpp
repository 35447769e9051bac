#include "psg/model/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "psg/core/errors.hpp"

namespace psg::model {

namespace {

using Point = std::vector<double>;

void project(Point& u) {
    for (double& v : u) v = std::clamp(v, 0.0, 1.0);
}

}  // namespace

SimplexResult minimize_in_box(const std::function<double(std::span<const double>)>& f, std::span<const double> start,
                              const Box& box, const SimplexOptions& opts) {
    const std::size_t n = box.size();
    if (n == 0 || box.upper.size() != n || start.size() != n) throw InvalidValue("box/start dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(box.upper[i] > box.lower[i])) throw InvalidValue("empty bound interval");
    }

    Point x(n);
    int evals = 0;
    const auto eval = [&](const Point& u) {
        for (std::size_t i = 0; i < n; ++i) x[i] = box.lower[i] + u[i] * (box.upper[i] - box.lower[i]);
        ++evals;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    // Standard coefficients: reflection 1, expansion 2, contraction 1/2, shrink 1/2.
    std::vector<Point> simplex(n + 1, Point(n));
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[0][i] = (start[i] - box.lower[i]) / (box.upper[i] - box.lower[i]);
    project(simplex[0]);
    for (std::size_t k = 1; k <= n; ++k) {
        simplex[k] = simplex[0];
        double& c = simplex[k][k - 1];
        // Step inward when the start sits on the upper face.
        c = (c + opts.initial_step <= 1.0) ? c + opts.initial_step : c - opts.initial_step;
    }
    for (std::size_t k = 0; k <= n; ++k) values[k] = eval(simplex[k]);

    std::vector<std::size_t> order(n + 1);
    Point centroid(n), trial(n), trial2(n);
    bool converged = false;

    const auto diameter = [&] {
        double d = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(simplex[k][i] - simplex[0][i]));
        }
        return d;
    };

    while (true) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        {
            std::vector<Point> s2(n + 1);
            std::vector<double> v2(n + 1);
            for (std::size_t k = 0; k <= n; ++k) {
                s2[k] = std::move(simplex[order[k]]);
                v2[k] = values[order[k]];
            }
            simplex = std::move(s2);
            values = std::move(v2);
        }
        if (diameter() < opts.diameter_tol) {
            converged = true;
            break;
        }
        if (evals >= opts.max_evals) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        Point& worst = simplex[n];
        for (std::size_t i = 0; i < n; ++i) trial[i] = centroid[i] + (centroid[i] - worst[i]);
        project(trial);
        const double fr = eval(trial);

        if (fr < values[0]) {
            for (std::size_t i = 0; i < n; ++i) trial2[i] = centroid[i] + 2.0 * (centroid[i] - worst[i]);
            project(trial2);
            const double fe = eval(trial2);
            if (fe < fr) {
                worst = trial2;
                values[n] = fe;
            } else {
                worst = trial;
                values[n] = fr;
            }
            continue;
        }
        if (fr < values[n - 1]) {
            worst = trial;
            values[n] = fr;
            continue;
        }
        const bool outside = fr < values[n];
        for (std::size_t i = 0; i < n; ++i) {
            trial2[i] = outside ? centroid[i] + 0.5 * (trial[i] - centroid[i])
                                : centroid[i] + 0.5 * (worst[i] - centroid[i]);
        }
        project(trial2);
        const double fc = eval(trial2);
        if (fc < std::min(fr, values[n])) {
            worst = trial2;
            values[n] = fc;
            continue;
        }
        for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t i = 0; i < n; ++i) simplex[k][i] = simplex[0][i] + 0.5 * (simplex[k][i] - simplex[0][i]);
            values[k] = eval(simplex[k]);
        }
    }

    SimplexResult out;
    out.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.x[i] = box.lower[i] + simplex[0][i] * (box.upper[i] - box.lower[i]);
    out.value = values[0];
    out.evals = evals;
    out.converged = converged;
    return out;
}

}  // namespace psg::model
