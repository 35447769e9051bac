#include "psg/agents/policies.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "psg/core/errors.hpp"

namespace psg::agents {

SelectorChoice CandidatePolicy::guess_choice(const GuessContext&, Rng& rng) {
    return static_cast<SelectorChoice>(uniform_int(rng, 0, 2));
}

SelectorChoice softmax_choose(double value_a, double value_b, double keep_value, double beta, Rng& rng) {
    if (!(beta >= 0.0)) throw InvalidValue("inverse temperature must be >= 0");
    const std::array<double, 3> values{value_a, value_b, keep_value};
    const double top = *std::max_element(values.begin(), values.end());
    if (std::isinf(beta)) {
        std::array<int, 3> best{};
        int n = 0;
        for (int i = 0; i < 3; ++i) {
            if (values[static_cast<std::size_t>(i)] == top) best[static_cast<std::size_t>(n++)] = i;
        }
        return static_cast<SelectorChoice>(best[static_cast<std::size_t>(uniform_int(rng, 0, n - 1))]);
    }
    std::array<double, 3> w{};
    double total = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        w[i] = std::exp(beta * (values[i] - top));
        total += w[i];
    }
    double u = uniform01(rng) * total;
    for (std::size_t i = 0; i < 3; ++i) {
        if (u < w[i]) return static_cast<SelectorChoice>(i);
        u -= w[i];
    }
    return SelectorChoice::Keep;
}

SelectorChoice rule_based_choose(const std::string& reply_a, const std::string& reply_b, Rng& rng) {
    const auto la = message_length(reply_a);
    const auto lb = message_length(reply_b);
    if (la > lb) return SelectorChoice::InvestA;
    if (lb > la) return SelectorChoice::InvestB;
    return uniform_int(rng, 0, 1) == 0 ? SelectorChoice::InvestA : SelectorChoice::InvestB;
}

}  // namespace psg::agents
