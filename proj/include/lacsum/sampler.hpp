#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lacsum/growth.hpp"
#include "lacsum/sequence.hpp"
#include "lacsum/trigpoly.hpp"

namespace lacsum {

// Stratified dyadic sampling: one uniform dyadic point per cell of a
// 2^strata_log2-cell coarse grid, repeated `rounds` times. Offsets come from
// per-stratum splitmix substreams, so results are independent of thread
// scheduling and bit-identical across thread counts.
struct SamplerConfig {
    uint64_t seed = 0;
    int strata_log2 = 12;
    long rounds = 16;
    long depth = 0;  // 0: default_depth(f, seq, N)
    long samples() const { return rounds << strata_log2; }
};

// Limbs of the numerator of the stratified point for (round, cell):
// p = cell * 2^{depth - strata_log2} + offset, offset from the per-stratum
// substream keyed by (seed, round * cells + cell).
void build_stratified_point(std::vector<mp_limb_t>& limbs, long depth, int strata_log2, long cell,
                            long round, uint64_t seed);

// Raw sums S(x_s) = sum_{k<=N} f(n_k x_s) in deterministic stratum-major order.
std::vector<double> sample_SN(const TrigPolynomial& f, const LacunarySequence& seq, long N,
                              const SamplerConfig& cfg);

// As above but restricted to selected index ranges of the sequence.
std::vector<double> sample_SN_ranges(const TrigPolynomial& f, const LacunarySequence& seq, long N,
                                     const std::vector<std::pair<long, long>>& ranges,
                                     const SamplerConfig& cfg);

struct TailPoint {
    double threshold = 0.0;
    long hits = 0;
    long samples = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
};

// P[S >= threshold] estimates with exact binomial confidence bounds.
std::vector<TailPoint> estimate_tail(const TrigPolynomial& f, const LacunarySequence& seq, long N,
                                     const std::vector<double>& thresholds,
                                     const SamplerConfig& cfg, double ci_level = 0.99);

std::vector<TailPoint> tail_points_from_samples(const std::vector<double>& sums,
                                                const std::vector<double>& thresholds,
                                                double ci_level = 0.99);

struct TailScan {
    std::vector<double> t;              // threshold multipliers
    std::vector<double> threshold_abs;  // t * ||f||_2 * sqrt(N)
    std::vector<double> p_hat;
    std::vector<double> ci_low;
    std::vector<double> ci_high;
    std::vector<double> normal_tail_col;
    std::vector<double> ratio;
    long samples = 0;
    uint64_t seed = 0;
    double norm_factor = 0.0;  // ||f||_2 sqrt(N)
    double g_N = 0.0;
    double sqrt_2_log_gN = 0.0;
    long depth = 0;
    int strata_log2 = 0;
    long rounds = 0;
    long N = 0;
};

// t grid spans [0, t_max_mult * sqrt(2 log g_N)] with `steps` points.
TailScan ratio_scan(const TrigPolynomial& f, const LacunarySequence& seq, long N,
                    const GrowthFunction& g, double t_max_mult, int steps,
                    const SamplerConfig& cfg, double ci_level = 0.99);

TailScan scan_from_samples(const std::vector<double>& sums, const TrigPolynomial& f, long N,
                           double g_N, double t_max_mult, int steps, const SamplerConfig& cfg,
                           double ci_level = 0.99);

// CSV body: t,threshold_abs,p_hat,ci_low,ci_high,normal_tail,ratio,samples,seed
void write_tailscan_csv(std::ostream& os, const TailScan& scan);
// metadata sidecar (JSON): g_N, sqrt(2 log g_N), depth, strata, rounds, ...
void write_tailscan_sidecar(std::ostream& os, const TailScan& scan);
// lossless plot-ready re-encoding of the scan columns
void emit_plotdata(std::ostream& os, const TailScan& scan);
TailScan parse_plotdata(std::istream& is);

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace lacsum
