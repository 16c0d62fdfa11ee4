#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bsp {

double mean(const std::vector<double>& xs);
double stddev(const std::vector<double>& xs);  // unbiased (n-1)

// One-sample Kolmogorov-Smirnov statistic; cdf must be nondecreasing.
// Sorts a copy of the sample.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

// Two-sample KS statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// CDF of Exp(1).
double exp1_cdf(double x);

}  // namespace bsp
