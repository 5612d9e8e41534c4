#pragma once

#include <vector>

#include "lacsum/dyadic.hpp"
#include "lacsum/sequence.hpp"
#include "lacsum/trigpoly.hpp"

namespace lacsum {

// batched kernels (vectorized; see src/veccos.cpp)
void vec_cos(const double* x, double* out, size_t n);
void vec_sin(const double* x, double* out, size_t n);

// Fast evaluator for S(x) = sum over selected k of f(n_k x) at dyadic points
// p / 2^depth. Each frequency v = j * n_k is decomposed, where possible, into
// a short signed sum v = sum_q (+-) u_q 2^{s_q} with small multipliers u_q, so
// that the exactly reduced argument frac(v p / 2^depth) can be read off from
// 64-bit windows of precomputed products u_q * p instead of a full big-integer
// multiply per term. Terms that do not decompose fall back to exact mpz
// arithmetic; results agree with eval_SN to ~1e-12 per term (the window path
// truncates the exact fraction at 64 bits, eval_SN rounds it to 53).
class WindowEvaluator {
  public:
    WindowEvaluator(const TrigPolynomial& f, const LacunarySequence& seq, long N, long depth,
                    const std::vector<std::pair<long, long>>* index_ranges = nullptr);

    long depth() const { return depth_; }
    long term_rows() const { return static_cast<long>(terms_.size()); }

    // Per-thread scratch. p buffers live outside; basis products are computed
    // lazily per sample.
    struct Workspace {
        std::vector<Int> basis;        // u_q * p mod 2^depth
        std::vector<char> have;
        Int p;                         // current point numerator
        Int scratch;
        std::vector<double> theta;     // per-row reduced angles
        std::vector<double> cosv;
        std::vector<double> sinv;
    };

    Workspace make_workspace() const;

    // p given as little-endian limbs of the numerator (value < 2^depth)
    double eval(const mp_limb_t* p, size_t pn, Workspace& ws) const;
    double eval(const DyadicPoint& x, Workspace& ws) const;

    // per-row contributions (one row per (k, frequency) pair, in build order)
    void eval_terms(const mp_limb_t* p, size_t pn, Workspace& ws, std::vector<double>& out) const;

  private:
    struct Part {
        int basis = 0;   // index into basis multipliers; 0 is the point itself
        long shift = 0;
        int sign = 1;
    };
    struct TermRow {
        double c = 0.0;
        double s = 0.0;
        Part parts[4];
        int nparts = 0;   // 0 => generic mpz path
        Int v;            // full frequency (generic path + verification)
    };

    double frac_of_row(const TermRow& row, const mp_limb_t* p, size_t pn, Workspace& ws) const;
    void fill_trig(const mp_limb_t* p, size_t pn, Workspace& ws) const;
    uint64_t window64(const mp_limb_t* w, size_t wn, long pos) const;
    int basis_index(const Int& u);

    long depth_ = 0;
    bool any_sin_ = false;
    std::vector<Int> basis_mult_;      // u_q; basis_mult_[0] == 1
    std::vector<TermRow> terms_;
};

}  // namespace lacsum
