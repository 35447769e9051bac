#pragma once

#include <span>
#include <vector>

namespace psg::stats {

double mean(std::span<const double> x);
// Sample variance (n - 1 denominator); 0 for fewer than two values.
double variance(std::span<const double> x);
double sd(std::span<const double> x);
double median(std::vector<double> x);

// Ranks starting at 1, ties receive their average rank.
std::vector<double> ranks(std::span<const double> x);

// NaN when either input has zero variance or the sizes differ.
double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace psg::stats
