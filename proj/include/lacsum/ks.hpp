#pragma once

#include <functional>
#include <vector>

#include "lacsum/sampler.hpp"
#include "lacsum/sequence.hpp"

namespace lacsum {

// Exact sup-distance of the empirical CDF of `samples` from a reference CDF.
double ks_statistic(const std::vector<double>& samples,
                    const std::function<double(double)>& reference_cdf);

// Two-sample KS distance.
double ks_statistic(const std::vector<double>& sample_a, const std::vector<double>& sample_b);

struct GaposhkinResult {
    double ks = 0.0;     // empirical KS of sqrt(2) sum lambda_k cos(2 pi n_k x) against Phi
    double bound = 0.0;  // Lambda_N^{1/4} = (max_k lambda_k)^{1/4}
};

// Weights must satisfy sum lambda_k^2 = 1 (within 1e-12); frequencies must be
// powers of two.
GaposhkinResult gaposhkin_check(const std::vector<double>& weights, const LacunarySequence& seq,
                                const SamplerConfig& cfg);

}  // namespace lacsum
