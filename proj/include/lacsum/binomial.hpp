#pragma once

#include <utility>

namespace lacsum {

// Exact (Clopper-Pearson) two-sided binomial confidence interval for k
// successes out of n trials at the given confidence level.
std::pair<double, double> clopper_pearson(long k, long n, double level = 0.99);

// Regularized incomplete beta function I_x(a, b).
double inc_beta(double a, double b, double x);

}  // namespace lacsum
