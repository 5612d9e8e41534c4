#include "lacsum/martingale.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lacsum/rng.hpp"
#include "lacsum/sampler.hpp"

namespace lacsum {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// frac(z / 2^e) as a double, z >= 0
double frac_shift(const Int& z, long e) {
    Int r = z;
    mpz_fdiv_r_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return dyadic_to_double(r, e);
}

// cell index of x at resolution r
Int cell_index(const DyadicPoint& x, long r) {
    if (x.depth < r) throw std::invalid_argument("point depth below required resolution");
    return x.num >> (x.depth - r);
}

// sin(pi nu 2^-r) / (pi nu 2^-r); exact 0 never reaches here (nu not divisible)
double sinc_factor(const Int& nu, long r) {
    double ratio = dyadic_to_double(nu, r);  // nu / 2^r, may be huge
    if (!std::isfinite(ratio) || ratio > 1e300) return 0.0;
    double ang = kTwoPi * frac_shift(nu, r + 1);  // pi nu 2^-r mod 2 pi
    return std::sin(ang) / (std::numbers::pi * ratio);
}

}  // namespace

long BlockPlan::undashed_total() const {
    long t = 0;
    for (const auto& b : undashed) t += b.size();
    return t;
}

long BlockPlan::max_resolution() const {
    long r = 0;
    for (long v : resolutions) r = std::max(r, v);
    return r;
}

SeqProfile SeqProfile::of(const LacunarySequence& seq) {
    SeqProfile p;
    p.bit_length_of = [&seq](long k) { return bit_length(seq.term(k)); };
    p.val2_of = [&seq](long k) { return val2(seq.term(k)); };
    return p;
}

SeqProfile SeqProfile::pow2() {
    SeqProfile p;
    p.bit_length_of = [](long k) { return k + 1; };
    p.val2_of = [](long k) { return k; };
    return p;
}

BlockPlan make_block_plan(long N, long undashed_len, long dashed_len, const SeqProfile& prof,
                          BlockPlan::ResolutionRule rule) {
    if (N < 1) throw std::invalid_argument("make_block_plan: N must be >= 1");
    if (undashed_len < 1) throw std::invalid_argument("make_block_plan: undashed length < 1");
    if (dashed_len < 0) throw std::invalid_argument("make_block_plan: dashed length < 0");
    if (undashed_len + dashed_len > N)
        throw std::invalid_argument("make_block_plan: block lengths exceed N");

    BlockPlan plan;
    plan.N = N;
    plan.undashed_len = undashed_len;
    plan.dashed_len = dashed_len;
    plan.rule = rule;

    long pair_len = undashed_len + dashed_len;
    long n = N / pair_len;
    long k = 1;
    for (long i = 0; i < n; ++i) {
        BlockPlan::Interval u{k, k + undashed_len - 1};
        k += undashed_len;
        BlockPlan::Interval d{k, k + dashed_len - 1};
        k += dashed_len;
        plan.undashed.push_back(u);
        plan.dashed.push_back(d);
    }
    // remainder indices are appended to the final dashed block
    if (k <= N) plan.dashed.back().last = N;

    plan.resolutions.resize(plan.undashed.size());
    if (rule == BlockPlan::ResolutionRule::Paper) {
        double l2N = std::log2(static_cast<double>(N));
        for (int i = 0; i < plan.blocks(); ++i) {
            long kmax = plan.undashed[static_cast<size_t>(i)].last;
            // log2 of n_kmax from its bit length (upper edge; the ceil below
            // absorbs the sub-bit part)
            long bl = prof.bit_length_of(kmax);
            double r = 3.0 * l2N + static_cast<double>(bl - 1);
            plan.resolutions[static_cast<size_t>(i)] = static_cast<long>(std::ceil(r));
        }
    } else {
        long running = prof.bit_length_of(plan.undashed.back().last) + 16;
        for (int i = plan.blocks() - 1; i >= 0; --i) {
            plan.resolutions[static_cast<size_t>(i)] = running;
            // r_{i-1} must kill every term of block i and later
            const auto& blk = plan.undashed[static_cast<size_t>(i)];
            for (long kk = blk.first; kk <= blk.last; ++kk)
                running = std::min(running, prof.val2_of(kk));
        }
    }
    for (size_t i = 1; i < plan.resolutions.size(); ++i)
        if (plan.resolutions[i] < plan.resolutions[i - 1])
            plan.resolutions[i] = plan.resolutions[i - 1];
    return plan;
}

BlockPlan make_block_plan(long N, long undashed_len, long dashed_len, const LacunarySequence& seq,
                          BlockPlan::ResolutionRule rule) {
    if (N > static_cast<long>(seq.size()))
        throw std::invalid_argument("make_block_plan: N exceeds sequence length");
    return make_block_plan(N, undashed_len, dashed_len, SeqProfile::of(seq), rule);
}

BlockPlan make_block_plan_paper_literals(long N, double q, const SeqProfile& prof) {
    if (q <= 1.0) throw std::invalid_argument("paper literals: q must be > 1");
    double lnN = std::log(static_cast<double>(N));
    long u = static_cast<long>(std::floor(std::pow(lnN, 5.0)));
    long d = static_cast<long>(std::floor(6.0 * lnN / std::log(q)));
    if (u < 1 || u + d > N)
        throw std::invalid_argument(
            "paper literals: (log N)^5 + 6 log_q N does not fit into N at this scale");
    return make_block_plan(N, u, d, prof, BlockPlan::ResolutionRule::Paper);
}

std::vector<double> cond_exp(const std::vector<double>& grid, long r, long grid_depth) {
    if (grid_depth < 0 || grid_depth > 30) throw std::invalid_argument("cond_exp: bad grid depth");
    if (grid.size() != (1UL << grid_depth))
        throw std::invalid_argument("cond_exp: grid size != 2^depth");
    if (r < 0) throw std::invalid_argument("cond_exp: negative resolution");
    if (r > grid_depth) throw std::invalid_argument("cond_exp: resolution exceeds grid depth");

    size_t cells = 1UL << r;
    size_t per = grid.size() / cells;
    std::vector<double> out(grid.size());
    std::vector<double> tree(per);
    for (size_t c = 0; c < cells; ++c) {
        // pairwise tree sum over a power-of-two cell: averaging a constant
        // cell reproduces it bit-exactly, which makes the operation idempotent
        for (size_t t = 0; t < per; ++t) tree[t] = grid[c * per + t];
        size_t m = per;
        while (m > 1) {
            for (size_t t = 0; t < m / 2; ++t) tree[t] = tree[2 * t] + tree[2 * t + 1];
            m /= 2;
        }
        double mean = tree[0] / static_cast<double>(per);
        for (size_t t = 0; t < per; ++t) out[c * per + t] = mean;
    }
    return out;
}

double cell_avg_cos(const Int& nu, long r, const DyadicPoint& x) {
    if (nu == 0) return 1.0;
    if (r == 0) return 0.0;  // full-period average over [0,1)
    if (val2(nu) >= r) return 0.0;
    Int j = cell_index(x, r);
    Int t = nu * (2 * j + 1);
    double phase_c = frac_shift(t, r + 1);
    double s = sinc_factor(nu, r);
    return s * std::cos(kTwoPi * phase_c);
}

double comb_mean_cos(const Int& w, long r, long rp, const DyadicPoint& x) {
    if (rp > r) throw std::invalid_argument("comb_mean_cos: rp > r");
    if (w == 0) return 1.0;
    long v = val2(w);
    if (v >= r) {
        // all fine centers carry congruent phases: evaluate at the first one
        Int jp = rp == 0 ? Int(0) : cell_index(x, rp);
        Int j0 = jp << (r - rp);
        Int t = w * (2 * j0 + 1);
        return std::cos(kTwoPi * frac_shift(t, r + 1));
    }
    if (v >= rp) return 0.0;  // full cancellation across the fine cells
    Int jp = cell_index(x, rp);
    Int t = w * (2 * jp + 1);
    double cosmid = std::cos(kTwoPi * frac_shift(t, rp + 1));
    double s_hi = std::sin(kTwoPi * frac_shift(w, rp + 1));
    double s_lo = std::sin(kTwoPi * frac_shift(w, r + 1));
    double Q = std::ldexp(1.0, static_cast<int>(r - rp));
    return cosmid * s_hi / (Q * s_lo);
}

XiSystem::XiSystem(const LacunarySequence& seq, const TrigPolynomial& f, const BlockPlan& plan)
    : seq_(&seq), f_(f), plan_(plan) {
    if (!f.cosine_only())
        throw std::invalid_argument("XiSystem: sine terms unsupported (even f only)");
    if (plan.N > static_cast<long>(seq.size()))
        throw std::invalid_argument("XiSystem: plan N exceeds sequence length");
    norm_ = f.l2_norm() * std::sqrt(static_cast<double>(plan_.undashed_total()));
    int n = plan_.blocks();
    hi_.resize(static_cast<size_t>(n));
    lo_.resize(static_cast<size_t>(n));
    r_.resize(static_cast<size_t>(n));
    rprev_.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        long r = plan_.resolutions[static_cast<size_t>(i)];
        long rp = i == 0 ? 0 : plan_.resolutions[static_cast<size_t>(i - 1)];
        r_[static_cast<size_t>(i)] = r;
        rprev_[static_cast<size_t>(i)] = rp;
        const auto& blk = plan_.undashed[static_cast<size_t>(i)];
        for (long k = blk.first; k <= blk.last; ++k) {
            for (const auto& tm : f_.terms()) {
                Int nu = tm.j * seq.term(k);
                if (val2(nu) < r) {
                    Atom a;
                    a.nu = nu;
                    a.coeff = tm.c;
                    a.sinc_hi = sinc_factor(nu, r);
                    hi_[static_cast<size_t>(i)].push_back(std::move(a));
                }
                if (rp > 0 && val2(nu) < rp) {
                    Atom a;
                    a.nu = nu;
                    a.coeff = tm.c;
                    a.sinc_hi = sinc_factor(nu, rp);
                    lo_[static_cast<size_t>(i)].push_back(std::move(a));
                }
            }
        }
    }
}

long XiSystem::min_point_depth() const {
    long d = plan_.max_resolution();
    long top = bit_length(Int(f_.degree()) * seq_->term(plan_.N));
    return std::max(d, top) + 24;
}

double XiSystem::eval_xi(int i, const DyadicPoint& x) const {
    const auto& hi = hi_[static_cast<size_t>(i - 1)];
    const auto& lo = lo_[static_cast<size_t>(i - 1)];
    long r = r_[static_cast<size_t>(i - 1)], rp = rprev_[static_cast<size_t>(i - 1)];
    double acc = 0.0;
    for (const auto& a : hi) acc += a.coeff * cell_avg_cos(a.nu, r, x);
    for (const auto& a : lo) acc -= a.coeff * cell_avg_cos(a.nu, rp, x);
    return acc / norm_;
}

double XiSystem::eval_X(const DyadicPoint& x) const {
    double acc = 0.0;
    for (int i = 1; i <= blocks(); ++i) acc += eval_xi(i, x);
    return acc;
}

double XiSystem::eval_cond_xi_mean(int i, const DyadicPoint& x) const {
    const auto& hi = hi_[static_cast<size_t>(i - 1)];
    const auto& lo = lo_[static_cast<size_t>(i - 1)];
    long r = r_[static_cast<size_t>(i - 1)], rp = rprev_[static_cast<size_t>(i - 1)];
    double acc = 0.0;
    // E(E(cos | F_i) | F_{i-1}) via the fine-center comb; algebraically equal
    // to the direct coarse average, so the two sums cancel up to rounding
    for (const auto& a : hi) acc += a.coeff * a.sinc_hi * comb_mean_cos(a.nu, r, rp, x);
    for (const auto& a : lo) acc -= a.coeff * cell_avg_cos(a.nu, rp, x);
    return acc / norm_;
}

double XiSystem::eval_cond_xi_sq(int i, const DyadicPoint& x) const {
    const auto& hi = hi_[static_cast<size_t>(i - 1)];
    const auto& lo = lo_[static_cast<size_t>(i - 1)];
    long r = r_[static_cast<size_t>(i - 1)], rp = rprev_[static_cast<size_t>(i - 1)];
    double acc = 0.0;
    // hi * hi: products of piecewise values at resolution r
    for (size_t t = 0; t < hi.size(); ++t) {
        for (size_t u = 0; u < hi.size(); ++u) {
            double w = 0.5 * hi[t].coeff * hi[t].sinc_hi * hi[u].coeff * hi[u].sinc_hi;
            if (w == 0.0) continue;
            Int sum = hi[t].nu + hi[u].nu;
            Int diff = abs(hi[t].nu - hi[u].nu);
            acc += w * (comb_mean_cos(sum, r, rp, x) + comb_mean_cos(diff, r, rp, x));
        }
    }
    if (!lo.empty()) {
        // lo is F_{i-1}-measurable: mixed terms factor through lo(x)
        double lo_val = 0.0;
        for (const auto& a : lo) lo_val += a.coeff * cell_avg_cos(a.nu, rp, x);
        double hi_avg = 0.0;
        for (const auto& a : hi)
            hi_avg += a.coeff * a.sinc_hi * comb_mean_cos(a.nu, r, rp, x);
        acc += -2.0 * lo_val * hi_avg + lo_val * lo_val;
    }
    return acc / (norm_ * norm_);
}

double XiSystem::eval_bracket(const DyadicPoint& x) const {
    double acc = 0.0;
    for (int i = 1; i <= blocks(); ++i) acc += eval_cond_xi_sq(i, x);
    return acc;
}

double XiSystem::eval_undashed_sum(const DyadicPoint& x) const {
    double acc = 0.0, comp = 0.0;
    Int rmod;
    for (const auto& blk : plan_.undashed) {
        for (long k = blk.first; k <= blk.last; ++k) {
            for (const auto& tm : f_.terms()) {
                rmod = tm.j * seq_->term(k) * x.num;
                mpz_fdiv_r_2exp(rmod.get_mpz_t(), rmod.get_mpz_t(),
                                static_cast<mp_bitcnt_t>(x.depth));
                double term = tm.c * std::cos(kTwoPi * dyadic_to_double(rmod, x.depth));
                double y = term - comp;
                double t = acc + y;
                comp = (t - acc) - y;
                acc = t;
            }
        }
    }
    return acc;
}

std::vector<DyadicPoint> full_grid(long depth) {
    if (depth < 1 || depth > 26) throw std::invalid_argument("full_grid: depth out of range");
    std::vector<DyadicPoint> pts;
    pts.reserve(1UL << depth);
    for (long p = 0; p < (1L << depth); ++p) pts.push_back(DyadicPoint{Int(p), depth});
    return pts;
}

std::vector<DyadicPoint> stratified_grid(long depth, int log2_count, uint64_t seed) {
    if (log2_count < 0 || log2_count > 26)
        throw std::invalid_argument("stratified_grid: bad count");
    if (depth <= log2_count) throw std::invalid_argument("stratified_grid: depth too small");
    std::vector<DyadicPoint> pts;
    long count = 1L << log2_count;
    pts.reserve(static_cast<size_t>(count));
    std::vector<mp_limb_t> limbs;
    for (long cell = 0; cell < count; ++cell) {
        build_stratified_point(limbs, depth, log2_count, cell, 0, seed);
        Int num;
        mpz_import(num.get_mpz_t(), limbs.size(), -1, sizeof(mp_limb_t), 0, 0, limbs.data());
        pts.push_back(DyadicPoint{std::move(num), depth});
    }
    return pts;
}

GramaStats grama_stats(const XiSystem& xs, const std::vector<DyadicPoint>& points) {
    if (points.empty()) throw std::invalid_argument("grama_stats: no evaluation points");
    long P = static_cast<long>(points.size());
    int n = xs.blocks();
    std::vector<double> quart(static_cast<size_t>(P)), brk(static_cast<size_t>(P));
    std::vector<double> sup_per(static_cast<size_t>(P), 0.0);

#pragma omp parallel for schedule(dynamic, 16)
    for (long p = 0; p < P; ++p) {
        const DyadicPoint& x = points[static_cast<size_t>(p)];
        double q4 = 0.0, sup = 0.0;
        for (int i = 1; i <= n; ++i) {
            double xi = xs.eval_xi(i, x);
            double xi2 = xi * xi;
            q4 += xi2 * xi2;
            sup = std::max(sup, std::fabs(xi));
        }
        quart[static_cast<size_t>(p)] = q4;
        brk[static_cast<size_t>(p)] = xs.eval_bracket(x);
        sup_per[static_cast<size_t>(p)] = sup;
    }

    GramaStats st;
    long double l4 = 0.0L, n4 = 0.0L;
    for (long p = 0; p < P; ++p) {
        l4 += quart[static_cast<size_t>(p)];
        double dev = brk[static_cast<size_t>(p)] - 1.0;
        n4 += dev * dev;
        st.xi_sup = std::max(st.xi_sup, sup_per[static_cast<size_t>(p)]);
    }
    st.L4 = static_cast<double>(l4 / static_cast<long double>(P));
    st.N4 = static_cast<double>(n4 / static_cast<long double>(P));
    st.bracket = std::move(brk);
    return st;
}

RhCensus rh_census(const LacunarySequence& seq, const TrigPolynomial& f, const BlockPlan& plan) {
    if (!f.cosine_only())
        throw std::invalid_argument("rh_census: sine terms unsupported (even f only)");
    if (plan.N > static_cast<long>(seq.size()))
        throw std::invalid_argument("rh_census: plan N exceeds sequence length");
    RhCensus out;
    out.per_block.resize(static_cast<size_t>(plan.blocks()));
    for (int i = 0; i < plan.blocks(); ++i) {
        const auto& blk = plan.undashed[static_cast<size_t>(i)];
        const Int& minn = seq.term(blk.first);
        auto& m = out.per_block[static_cast<size_t>(i)];
        for (long k = blk.first; k <= blk.last; ++k) {
            for (long l = blk.first; l <= blk.last; ++l) {
                for (const auto& t1 : f.terms()) {
                    for (const auto& t2 : f.terms()) {
                        if (t1.j == t2.j && k == l) continue;  // (j1,k) != (j2,l)
                        Int h = t1.j * seq.term(k) - t2.j * seq.term(l);
                        if (abs(h) > minn) continue;
                        Rat w = t1.c_rat * t2.c_rat / 2;
                        m[h] += w;
                    }
                }
            }
        }
        for (const auto& [h, v] : m) {
            out.r_h[h] += v;
            out.total_abs += abs(v);
        }
    }
    for (const auto& [h, v] : out.r_h) {
        Rat a = abs(v);
        if (a > out.sup_abs) {
            out.sup_abs = a;
            out.sup_arg = h;
        }
    }
    return out;
}

MgfCheck dashed_mgf_check(const LacunarySequence& seq, const BlockPlan& plan, double lambda) {
    if (plan.dashed_len < 1)
        throw std::invalid_argument("dashed_mgf_check: plan has no dashed blocks");
    double lmax = 1.0 / static_cast<double>(plan.dashed_len);
    if (std::fabs(lambda) > lmax)
        throw std::invalid_argument("dashed_mgf_check: |lambda| exceeds 1/dashed_len");

    std::vector<long> exps;
    long total_dashed = 0;
    for (const auto& blk : plan.dashed) {
        for (long k = blk.first; k <= blk.last; ++k) {
            const Int& nk = seq.term(k);
            if (!is_pow2(nk))
                throw std::invalid_argument("dashed_mgf_check: dashed frequencies must be dyadic");
            exps.push_back(bit_length(nk) - 1);
            ++total_dashed;
        }
    }
    if (exps.empty()) throw std::invalid_argument("dashed_mgf_check: dashed blocks are empty");

    long maxe = *std::max_element(exps.begin(), exps.end());
    long depth = maxe + 6;
    if (depth > 26)
        throw std::invalid_argument(
            "dashed_mgf_check: quadrature depth " + std::to_string(depth) +
            " infeasible (frequencies too large for full-grid quadrature)");

    long cells = 1L << depth;
    uint64_t mask = (depth == 64) ? ~0ULL : ((1ULL << depth) - 1);
    double scale = std::ldexp(1.0, static_cast<int>(-depth));
    long double acc = 0.0L;
#pragma omp parallel reduction(+ : acc)
    {
#pragma omp for schedule(static)
        for (long p = 0; p < cells; ++p) {
            double s = 0.0;
            for (long e : exps) {
                uint64_t arg = (static_cast<uint64_t>(p) << e) & mask;
                s += std::cos(kTwoPi * static_cast<double>(arg) * scale);
            }
            acc += std::exp(lambda * s);
        }
    }

    MgfCheck chk;
    chk.lambda = lambda;
    chk.quad_depth = depth;
    chk.lhs = static_cast<double>(acc / static_cast<long double>(cells));
    chk.rhs = std::exp(lambda * lambda / 2.0 * static_cast<double>(total_dashed));
    chk.holds = chk.lhs <= chk.rhs * (1.0 + 1e-6);
    return chk;
}

XiGrid xi_terms_grid(const LacunarySequence& seq, const TrigPolynomial& f, const BlockPlan& plan,
                     long grid_depth) {
    if (!f.cosine_only())
        throw std::invalid_argument("xi_terms_grid: sine terms unsupported (even f only)");
    if (grid_depth < 1 || grid_depth > 24)
        throw std::invalid_argument("xi_terms_grid: grid depth out of range");
    if (plan.max_resolution() > grid_depth)
        throw std::invalid_argument("xi_terms_grid: grid depth below max resolution " +
                                    std::to_string(plan.max_resolution()));
    size_t cells = 1UL << grid_depth;
    XiGrid out;
    out.norm = f.l2_norm() * std::sqrt(static_cast<double>(plan.undashed_total()));
    out.X.assign(cells, 0.0);
    for (int i = 0; i < plan.blocks(); ++i) {
        const auto& blk = plan.undashed[static_cast<size_t>(i)];
        std::vector<double> block_sum(cells, 0.0);
        for (long k = blk.first; k <= blk.last; ++k) {
            for (const auto& tm : f.terms()) {
                // grid values at cell midpoints (2p+1)/2^{grid_depth+1}, so cell
                // averages converge to the exact integrals at second order
                Int nu = tm.j * seq.term(k);
                Int red = nu;
                mpz_fdiv_r_2exp(red.get_mpz_t(), red.get_mpz_t(),
                                static_cast<mp_bitcnt_t>(grid_depth + 1));
                uint64_t st = (2 * mpz_get_ui(red.get_mpz_t())) &
                              ((1ULL << (grid_depth + 1)) - 1);
                uint64_t mask = (1ULL << (grid_depth + 1)) - 1;
                uint64_t arg = mpz_get_ui(red.get_mpz_t()) & mask;  // nu * 1 mod 2^{G+1}
                double scale = std::ldexp(1.0, static_cast<int>(-grid_depth - 1));
                for (size_t p = 0; p < cells; ++p) {
                    block_sum[p] += tm.c * std::cos(kTwoPi * static_cast<double>(arg) * scale);
                    arg = (arg + st) & mask;
                }
            }
        }
        long r = plan.resolutions[static_cast<size_t>(i)];
        long rp = i == 0 ? 0 : plan.resolutions[static_cast<size_t>(i - 1)];
        std::vector<double> hi = cond_exp(block_sum, r, grid_depth);
        std::vector<double> lo = cond_exp(block_sum, rp, grid_depth);
        std::vector<double> xi(cells);
        for (size_t p = 0; p < cells; ++p) {
            xi[p] = (hi[p] - lo[p]) / out.norm;
            out.X[p] += xi[p];
        }
        out.xi.push_back(std::move(xi));
    }
    return out;
}

}  // namespace lacsum
