#pragma once

#include <functional>
#include <map>
#include <vector>

#include "lacsum/dyadic.hpp"
#include "lacsum/sequence.hpp"
#include "lacsum/trigpoly.hpp"

namespace lacsum {

// Alternating partition {1..N} = D_1 u D_1' u ... u D_n u D_n' with per-block
// dyadic sigma-field resolutions r_i.
struct BlockPlan {
    enum class ResolutionRule {
        Paper,      // r_i = ceil(3 log2 N + log2 max_{k in D_i} n_k)
        Separated,  // r_i = min 2-adic valuation over terms of later undashed blocks;
                    // for dyadic sequences this makes E(. | F_i) of later blocks vanish exactly
    };
    struct Interval {
        long first = 1;
        long last = 0;
        long size() const { return last >= first ? last - first + 1 : 0; }
    };

    long N = 0;
    long undashed_len = 0;
    long dashed_len = 0;
    std::vector<Interval> undashed;
    std::vector<Interval> dashed;
    std::vector<long> resolutions;
    ResolutionRule rule = ResolutionRule::Separated;

    int blocks() const { return static_cast<int>(undashed.size()); }
    long undashed_total() const;
    long max_resolution() const;
};

// 2-adic profile of a sequence, enough to size resolutions without
// materializing terms.
struct SeqProfile {
    std::function<long(long)> bit_length_of;  // bit length of n_k
    std::function<long(long)> val2_of;        // 2-adic valuation of n_k

    static SeqProfile of(const LacunarySequence& seq);
    static SeqProfile pow2();  // n_k = 2^k
};

BlockPlan make_block_plan(long N, long undashed_len, long dashed_len, const SeqProfile& prof,
                          BlockPlan::ResolutionRule rule = BlockPlan::ResolutionRule::Separated);
BlockPlan make_block_plan(long N, long undashed_len, long dashed_len, const LacunarySequence& seq,
                          BlockPlan::ResolutionRule rule = BlockPlan::ResolutionRule::Separated);

// block lengths (log N)^5 and 6 log_q N (natural log); throws when those
// literals do not fit into N
BlockPlan make_block_plan_paper_literals(long N, double q, const SeqProfile& prof);

// Literal grid conditional expectation: per cell of the 2^r-partition, replace
// the 2^{grid_depth - r} grid values by their mean. Idempotent; satisfies the
// tower property exactly as an operation on grid vectors.
std::vector<double> cond_exp(const std::vector<double>& grid, long r, long grid_depth);

// Exact cell average of cos(2 pi nu x) over the resolution-r cell containing x:
//   0 when 2^r | nu, else sinc(pi nu 2^-r) cos(2 pi nu (2j+1) / 2^{r+1}).
double cell_avg_cos(const Int& nu, long r, const DyadicPoint& x);

// Mean of the piecewise value cos(2 pi w * center_r(.)) over the fine cells
// inside the resolution-rp cell containing x (rp <= r).
double comb_mean_cos(const Int& w, long r, long rp, const DyadicPoint& x);

// Martingale differences xi_i built from exact conditional expectations of
// undashed block sums, evaluable at arbitrary dyadic points regardless of the
// size of the frequencies. Cosine-only f.
class XiSystem {
  public:
    XiSystem(const LacunarySequence& seq, const TrigPolynomial& f, const BlockPlan& plan);

    const BlockPlan& plan() const { return plan_; }
    int blocks() const { return plan_.blocks(); }
    double norm() const { return norm_; }  // ||f||_2 sqrt(sum #D_i)
    long min_point_depth() const;

    double eval_xi(int i, const DyadicPoint& x) const;         // i is 1-based
    double eval_X(const DyadicPoint& x) const;                 // sum of xi
    double eval_cond_xi_mean(int i, const DyadicPoint& x) const;  // E(xi_i | F_{i-1})
    double eval_cond_xi_sq(int i, const DyadicPoint& x) const;    // E(xi_i^2 | F_{i-1})
    double eval_bracket(const DyadicPoint& x) const;              // sum_i of the above
    double eval_undashed_sum(const DyadicPoint& x) const;  // sum_i sum_{k in D_i} f(n_k x), raw

  private:
    struct Atom {
        Int nu;
        double coeff = 0.0;
        double sinc_hi = 0.0;  // sinc factor at the block resolution
    };
    const LacunarySequence* seq_;
    TrigPolynomial f_;
    BlockPlan plan_;
    double norm_ = 1.0;
    std::vector<std::vector<Atom>> hi_;  // per block: atoms alive at r_i
    std::vector<std::vector<Atom>> lo_;  // per block: atoms alive at r_{i-1}
    std::vector<long> r_, rprev_;
};

struct GramaStats {
    double L4 = 0.0;
    double N4 = 0.0;
    std::vector<double> bracket;  // realized <X>_n per evaluation point
    double xi_sup = 0.0;
};

std::vector<DyadicPoint> full_grid(long depth);
std::vector<DyadicPoint> stratified_grid(long depth, int log2_count, uint64_t seed);

GramaStats grama_stats(const XiSystem& xs, const std::vector<DyadicPoint>& points);

// Coefficient-weighted within-block census of j1 n_k - j2 n_l = h, restricted
// to |h| <= min_{m in D_i} n_m; exact rational accumulation.
struct RhCensus {
    std::vector<std::map<Int, Rat>> per_block;  // r_{h,i}
    std::map<Int, Rat> r_h;
    Rat total_abs{0};  // sum over h, i of |r_{h,i}|
    Rat sup_abs{0};    // sup_h |r_h|
    Int sup_arg;
};

RhCensus rh_census(const LacunarySequence& seq, const TrigPolynomial& f, const BlockPlan& plan);

// Integral test of exp(lambda * dashed cosine sum) against the product bound
// exp(lambda^2/2 * total dashed length), by full-grid quadrature.
struct MgfCheck {
    double lambda = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    long quad_depth = 0;
};

MgfCheck dashed_mgf_check(const LacunarySequence& seq, const BlockPlan& plan, double lambda);

// Literal grid route for materializable depths (unit-scale cases and
// cross-validation of XiSystem).
struct XiGrid {
    std::vector<std::vector<double>> xi;
    std::vector<double> X;
    double norm = 1.0;
};

XiGrid xi_terms_grid(const LacunarySequence& seq, const TrigPolynomial& f, const BlockPlan& plan,
                     long grid_depth);

}  // namespace lacsum
