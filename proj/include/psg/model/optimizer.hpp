#pragma once

#include <functional>
#include <span>
#include <vector>

namespace psg::model {

struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t size() const noexcept { return lower.size(); }
};

struct SimplexOptions {
    double initial_step = 0.1;  // fraction of each bound width
    double diameter_tol = 1e-6; // in bound-normalised coordinates
    int max_evals = 2000;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int evals = 0;
    bool converged = false;
};

// Minimises f over a box with a Nelder-Mead simplex. Every trial point is
// projected onto the box before evaluation, and the simplex lives in
// coordinates scaled so each bound width is 1.
SimplexResult minimize_in_box(const std::function<double(std::span<const double>)>& f, std::span<const double> start,
                              const Box& box, const SimplexOptions& opts = {});

}  // namespace psg::model
