#include "lacsum/sampler.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "lacsum/binomial.hpp"
#include "lacsum/dyadic.hpp"
#include "lacsum/normal.hpp"
#include "lacsum/rng.hpp"
#include "lacsum/window_eval.hpp"

namespace lacsum {

void build_stratified_point(std::vector<mp_limb_t>& limbs, long depth, int strata_log2, long cell,
                            long round, uint64_t seed) {
    long nl = (depth + 63) / 64;
    limbs.assign(static_cast<size_t>(nl), 0);
    long off_bits = depth - strata_log2;
    uint64_t stream_id = static_cast<uint64_t>(round) * (1ULL << strata_log2) +
                         static_cast<uint64_t>(cell);
    SplitMix64 rng = substream(seed, stream_id);
    long full = off_bits / 64;
    for (long i = 0; i < full; ++i) limbs[static_cast<size_t>(i)] = rng.next();
    long rem = off_bits - full * 64;
    if (rem > 0) limbs[static_cast<size_t>(full)] = rng.next() >> (64 - rem);
    // place the cell id in bits [off_bits, depth)
    uint64_t c = static_cast<uint64_t>(cell);
    long pos = off_bits;
    long idx = pos / 64, sh = pos % 64;
    limbs[static_cast<size_t>(idx)] |= c << sh;
    if (sh != 0 && idx + 1 < nl && sh + strata_log2 > 64)
        limbs[static_cast<size_t>(idx + 1)] |= c >> (64 - sh);
}

std::vector<double> sample_SN_ranges(const TrigPolynomial& f, const LacunarySequence& seq, long N,
                                     const std::vector<std::pair<long, long>>& ranges,
                                     const SamplerConfig& cfg) {
    if (cfg.strata_log2 < 0 || cfg.strata_log2 > 30)
        throw std::invalid_argument("sampler: strata_log2 out of range");
    if (cfg.rounds < 1) throw std::invalid_argument("sampler: rounds must be >= 1");
    long depth = cfg.depth > 0 ? cfg.depth : default_depth(f, seq, N);
    if (depth <= cfg.strata_log2)
        throw std::invalid_argument("sampler: depth must exceed strata_log2");
    WindowEvaluator ev(f, seq, N, depth, ranges.empty() ? nullptr : &ranges);

    long total = cfg.samples();
    std::vector<double> out(static_cast<size_t>(total));
    long cells = 1L << cfg.strata_log2;

#pragma omp parallel
    {
        WindowEvaluator::Workspace ws = ev.make_workspace();
        std::vector<mp_limb_t> limbs;
#pragma omp for schedule(static)
        for (long s = 0; s < total; ++s) {
            long round = s / cells;
            long cell = s % cells;
            build_stratified_point(limbs, depth, cfg.strata_log2, cell, round, cfg.seed);
            out[static_cast<size_t>(s)] = ev.eval(limbs.data(), limbs.size(), ws);
        }
    }
    return out;
}

std::vector<double> sample_SN(const TrigPolynomial& f, const LacunarySequence& seq, long N,
                              const SamplerConfig& cfg) {
    return sample_SN_ranges(f, seq, N, {}, cfg);
}

std::vector<TailPoint> tail_points_from_samples(const std::vector<double>& sums,
                                                const std::vector<double>& thresholds,
                                                double ci_level) {
    std::vector<TailPoint> out;
    out.reserve(thresholds.size());
    long n = static_cast<long>(sums.size());
    for (double tau : thresholds) {
        TailPoint tp;
        tp.threshold = tau;
        tp.samples = n;
        long hits = 0;
#pragma omp parallel for reduction(+ : hits) schedule(static)
        for (long i = 0; i < n; ++i)
            if (sums[static_cast<size_t>(i)] >= tau) ++hits;
        tp.hits = hits;
        tp.p_hat = static_cast<double>(hits) / static_cast<double>(n);
        auto [lo, hi] = clopper_pearson(hits, n, ci_level);
        tp.ci_low = lo;
        tp.ci_high = hi;
        out.push_back(tp);
    }
    return out;
}

std::vector<TailPoint> estimate_tail(const TrigPolynomial& f, const LacunarySequence& seq, long N,
                                     const std::vector<double>& thresholds,
                                     const SamplerConfig& cfg, double ci_level) {
    std::vector<double> sums = sample_SN(f, seq, N, cfg);
    return tail_points_from_samples(sums, thresholds, ci_level);
}

TailScan scan_from_samples(const std::vector<double>& sums, const TrigPolynomial& f, long N,
                           double g_N, double t_max_mult, int steps, const SamplerConfig& cfg,
                           double ci_level) {
    if (steps < 2) throw std::invalid_argument("ratio_scan: steps must be >= 2");
    if (g_N <= 1.0) throw std::invalid_argument("ratio_scan: g_N <= 1 (log nonpositive)");
    TailScan scan;
    scan.g_N = g_N;
    scan.sqrt_2_log_gN = std::sqrt(2.0 * std::log(g_N));
    scan.norm_factor = f.l2_norm() * std::sqrt(static_cast<double>(N));
    scan.samples = static_cast<long>(sums.size());
    scan.seed = cfg.seed;
    scan.depth = cfg.depth;
    scan.strata_log2 = cfg.strata_log2;
    scan.rounds = cfg.rounds;
    scan.N = N;

    double t_max = t_max_mult * scan.sqrt_2_log_gN;
    std::vector<double> thresholds;
    for (int i = 0; i < steps; ++i) {
        double t = t_max * static_cast<double>(i) / static_cast<double>(steps - 1);
        scan.t.push_back(t);
        thresholds.push_back(t * scan.norm_factor);
    }
    auto pts = tail_points_from_samples(sums, thresholds, ci_level);
    for (int i = 0; i < steps; ++i) {
        const TailPoint& tp = pts[static_cast<size_t>(i)];
        scan.threshold_abs.push_back(tp.threshold);
        scan.p_hat.push_back(tp.p_hat);
        scan.ci_low.push_back(tp.ci_low);
        scan.ci_high.push_back(tp.ci_high);
        double nt = normal_tail(scan.t[static_cast<size_t>(i)]);
        scan.normal_tail_col.push_back(nt);
        scan.ratio.push_back(tp.p_hat / nt);
    }
    return scan;
}

TailScan ratio_scan(const TrigPolynomial& f, const LacunarySequence& seq, long N,
                    const GrowthFunction& g, double t_max_mult, int steps,
                    const SamplerConfig& cfg, double ci_level) {
    double g_N = g(static_cast<double>(N));
    if (g_N <= 1.0) throw std::invalid_argument("ratio_scan: g_N <= 1 (log nonpositive)");
    SamplerConfig used = cfg;
    if (used.depth == 0) used.depth = default_depth(f, seq, N);
    std::vector<double> sums = sample_SN(f, seq, N, used);
    return scan_from_samples(sums, f, N, g_N, t_max_mult, steps, used, ci_level);
}

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_tailscan_csv(std::ostream& os, const TailScan& scan) {
    os << "t,threshold_abs,p_hat,ci_low,ci_high,normal_tail,ratio,samples,seed\n";
    for (size_t i = 0; i < scan.t.size(); ++i) {
        os << format_double(scan.t[i]) << "," << format_double(scan.threshold_abs[i]) << ","
           << format_double(scan.p_hat[i]) << "," << format_double(scan.ci_low[i]) << ","
           << format_double(scan.ci_high[i]) << "," << format_double(scan.normal_tail_col[i])
           << "," << format_double(scan.ratio[i]) << "," << scan.samples << "," << scan.seed
           << "\n";
    }
}

void write_tailscan_sidecar(std::ostream& os, const TailScan& scan) {
    nlohmann::json j;
    j["g_N"] = scan.g_N;
    j["sqrt_2_log_gN"] = scan.sqrt_2_log_gN;
    j["depth"] = scan.depth;
    j["strata_log2"] = scan.strata_log2;
    j["rounds"] = scan.rounds;
    j["samples"] = scan.samples;
    j["seed"] = scan.seed;
    j["norm_factor"] = scan.norm_factor;
    j["N"] = scan.N;
    os << j.dump(2) << "\n";
}

void emit_plotdata(std::ostream& os, const TailScan& scan) {
    write_tailscan_csv(os, scan);
}

TailScan parse_plotdata(std::istream& is) {
    TailScan scan;
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("plotdata: empty");
    if (line != "t,threshold_abs,p_hat,ci_low,ci_high,normal_tail,ratio,samples,seed")
        throw std::invalid_argument("plotdata: bad header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 9) throw std::invalid_argument("plotdata: bad row: " + line);
        scan.t.push_back(std::stod(fields[0]));
        scan.threshold_abs.push_back(std::stod(fields[1]));
        scan.p_hat.push_back(std::stod(fields[2]));
        scan.ci_low.push_back(std::stod(fields[3]));
        scan.ci_high.push_back(std::stod(fields[4]));
        scan.normal_tail_col.push_back(std::stod(fields[5]));
        scan.ratio.push_back(std::stod(fields[6]));
        scan.samples = std::stol(fields[7]);
        scan.seed = std::stoull(fields[8]);
    }
    return scan;
}

}  // namespace lacsum
