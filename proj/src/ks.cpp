#include "lacsum/ks.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lacsum/dyadic.hpp"
#include "lacsum/normal.hpp"
#include "lacsum/rng.hpp"
#include "lacsum/window_eval.hpp"

namespace lacsum {

double ks_statistic(const std::vector<double>& samples,
                    const std::function<double(double)>& reference_cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::vector<double> s = samples;
    std::sort(s.begin(), s.end());
    double n = static_cast<double>(s.size());
    double sup = 0.0;
    for (size_t i = 0; i < s.size(); ++i) {
        double F = reference_cdf(s[i]);
        double hi = static_cast<double>(i + 1) / n - F;
        double lo = F - static_cast<double>(i) / n;
        sup = std::max({sup, hi, lo});
    }
    return sup;
}

double ks_statistic(const std::vector<double>& sample_a, const std::vector<double>& sample_b) {
    if (sample_a.empty() || sample_b.empty())
        throw std::invalid_argument("ks_statistic: empty sample");
    std::vector<double> a = sample_a, b = sample_b;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    size_t i = 0, j = 0;
    double sup = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        sup = std::max(sup, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return sup;
}

GaposhkinResult gaposhkin_check(const std::vector<double>& weights, const LacunarySequence& seq,
                                const SamplerConfig& cfg) {
    long N = static_cast<long>(weights.size());
    if (N < 1 || N > static_cast<long>(seq.size()))
        throw std::invalid_argument("gaposhkin_check: weight count out of range");
    double sumsq = 0.0, maxw = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("gaposhkin_check: weights must be nonnegative");
        sumsq += w * w;
        maxw = std::max(maxw, w);
    }
    if (std::fabs(sumsq - 1.0) > 1e-12)
        throw std::invalid_argument("gaposhkin_check: sum of squared weights must be 1");
    for (long k = 1; k <= N; ++k)
        if (!is_pow2(seq.term(k)))
            throw std::invalid_argument("gaposhkin_check: frequencies must be powers of two");

    // weighted pure-cosine sum; evaluated with the same window machinery via
    // per-term descriptors (frequencies are 2^e, so each term is a window read)
    long depth = cfg.depth > 0 ? cfg.depth : bit_length(seq.term(N)) + 24;
    TrigPolynomial cosf = TrigPolynomial::cosine(1);
    WindowEvaluator ev(cosf, seq, N, depth, nullptr);

    long cells = 1L << cfg.strata_log2;
    long total = cfg.samples();
    std::vector<double> vals(static_cast<size_t>(total));
    const double sqrt2 = std::numbers::sqrt2;

#pragma omp parallel
    {
        WindowEvaluator::Workspace ws = ev.make_workspace();
        std::vector<mp_limb_t> limbs;
        std::vector<double> per_term(static_cast<size_t>(N));
#pragma omp for schedule(static)
        for (long s = 0; s < total; ++s) {
            long round = s / cells;
            long cell = s % cells;
            build_stratified_point(limbs, depth, cfg.strata_log2, cell, round, cfg.seed);
            ev.eval_terms(limbs.data(), limbs.size(), ws, per_term);
            double sum = 0.0, comp = 0.0;
            for (long k = 0; k < N; ++k) {
                double y = weights[static_cast<size_t>(k)] * per_term[static_cast<size_t>(k)] -
                           comp;
                double t = sum + y;
                comp = (t - sum) - y;
                sum = t;
            }
            vals[static_cast<size_t>(s)] = sqrt2 * sum;
        }
    }

    GaposhkinResult res;
    res.ks = ks_statistic(vals, [](double t) { return normal_cdf(t); });
    res.bound = std::pow(maxw, 0.25);
    return res;
}

}  // namespace lacsum
