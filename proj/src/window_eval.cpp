#include "lacsum/window_eval.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

static_assert(GMP_LIMB_BITS == 64, "64-bit limbs assumed");

namespace lacsum {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInv2Pow64 = 1.0 / 18446744073709551616.0;
constexpr long kSmallBits = 48;
constexpr uint64_t kBandTol = 32;
}  // namespace

int WindowEvaluator::basis_index(const Int& u) {
    for (size_t q = 0; q < basis_mult_.size(); ++q)
        if (basis_mult_[q] == u) return static_cast<int>(q);
    basis_mult_.push_back(u);
    return static_cast<int>(basis_mult_.size() - 1);
}

WindowEvaluator::WindowEvaluator(const TrigPolynomial& f, const LacunarySequence& seq, long N,
                                 long depth, const std::vector<std::pair<long, long>>* ranges) {
    if (N < 1 || N > static_cast<long>(seq.size()))
        throw std::invalid_argument("WindowEvaluator: N out of range");
    if (depth < min_depth(f, seq, N))
        throw std::invalid_argument("WindowEvaluator: dyadic depth too shallow for d * n_N");
    depth_ = depth;
    basis_mult_.push_back(Int(1));

    std::vector<std::pair<long, long>> sel;
    if (ranges)
        sel = *ranges;
    else
        sel.push_back({1, N});

    for (auto [first, last] : sel) {
        if (first < 1 || last > N || first > last)
            throw std::invalid_argument("WindowEvaluator: bad index range");
        for (long k = first; k <= last; ++k) {
            const Int& nk = seq.term(k);
            for (const auto& t : f.terms()) {
                TermRow row;
                row.c = t.c;
                row.s = t.s;
                if (t.s != 0.0) any_sin_ = true;
                row.v = t.j * nk;
                row.nparts = 0;

                const Int& v = row.v;
                long s0 = val2(v);
                Int u = v >> s0;
                auto emit = [&](int basis, long shift, int sign) {
                    row.parts[row.nparts++] = Part{basis, shift, sign};
                };
                if (u == 1) {
                    emit(0, s0, 1);
                } else if (bit_length(u) <= kSmallBits) {
                    emit(basis_index(u), s0, 1);
                } else if (is_pow2(nk + 1) && t.j <= (1L << kSmallBits)) {
                    // v = j (2^e - 1) = (j << e) - j
                    long e = bit_length(nk + 1) - 1;
                    int q = basis_index(Int(t.j));
                    emit(q, e, 1);
                    emit(q, 0, -1);
                } else {
                    long a = bit_length(u) - 1;
                    Int r = u - pow2(a);
                    if (bit_length(r) <= kSmallBits) {
                        // v = 2^{s0+a} + r 2^{s0}
                        emit(0, s0 + a, 1);
                        emit(basis_index(r), s0, 1);
                    } else {
                        long sn = val2(nk);
                        Int un = nk >> sn;
                        long an = bit_length(un) - 1;
                        Int rn = un - pow2(an);
                        if (bit_length(rn) <= kSmallBits &&
                            mpz_popcount(Int(t.j).get_mpz_t()) <= 2) {
                            // n_k = 2^{sn} (2^{an} + rn); expand over the set bits of j
                            Int jj(t.j);
                            int q = basis_index(rn);
                            for (long b = 0; b < bit_length(jj); ++b) {
                                if (!mpz_tstbit(jj.get_mpz_t(), static_cast<mp_bitcnt_t>(b)))
                                    continue;
                                emit(0, sn + b + an, 1);
                                emit(q, sn + b, 1);
                            }
                        }
                    }
                }

                if (row.nparts > 0) {
                    Int check = 0;
                    for (int pi = 0; pi < row.nparts; ++pi) {
                        const Part& part = row.parts[pi];
                        Int contrib = basis_mult_[static_cast<size_t>(part.basis)]
                                      << part.shift;
                        check += part.sign > 0 ? contrib : -contrib;
                    }
                    if (check != v) row.nparts = 0;  // decomposition failed; generic path
                }
                terms_.push_back(std::move(row));
            }
        }
    }
}

WindowEvaluator::Workspace WindowEvaluator::make_workspace() const {
    Workspace ws;
    ws.basis.resize(basis_mult_.size());
    ws.have.assign(basis_mult_.size(), 0);
    return ws;
}

namespace {
// bits [pos, pos+64) of the little-endian limb array w, zero-padded
inline uint64_t window64_of(const mp_limb_t* w, size_t wn, long pos) {
    if (pos <= -64) return 0;
    long idx = pos >= 0 ? pos / 64 : -((-pos + 63) / 64);
    long off = pos - idx * 64;
    uint64_t lo = (idx >= 0 && idx < static_cast<long>(wn)) ? w[idx] : 0;
    uint64_t hi = (idx + 1 >= 0 && idx + 1 < static_cast<long>(wn)) ? w[idx + 1] : 0;
    if (off == 0) return lo;
    return (lo >> off) | (hi << (64 - off));
}
}  // namespace

uint64_t WindowEvaluator::window64(const mp_limb_t* w, size_t wn, long pos) const {
    return window64_of(w, wn, pos);
}

double WindowEvaluator::frac_of_row(const TermRow& row, const mp_limb_t* p, size_t pn,
                                    Workspace& ws) const {
    if (row.nparts == 1 && row.parts[0].sign > 0) {
        // single-part rows have no carry ambiguity: the top window is exact
        const Part& part = row.parts[0];
        const mp_limb_t* w = p;
        size_t wn = pn;
        if (part.basis != 0) {
            if (!ws.have[static_cast<size_t>(part.basis)]) {
                Int& dst = ws.basis[static_cast<size_t>(part.basis)];
                dst = basis_mult_[static_cast<size_t>(part.basis)] * ws.p;
                mpz_fdiv_r_2exp(dst.get_mpz_t(), dst.get_mpz_t(),
                                static_cast<mp_bitcnt_t>(depth_));
                ws.have[static_cast<size_t>(part.basis)] = 1;
            }
            const Int& bz = ws.basis[static_cast<size_t>(part.basis)];
            w = mpz_limbs_read(bz.get_mpz_t());
            wn = static_cast<size_t>(mpz_size(bz.get_mpz_t()));
        }
        return static_cast<double>(window64_of(w, wn, depth_ - part.shift - 64)) * kInv2Pow64;
    }
    if (row.nparts > 0) {
        uint64_t top = 0;               // bits [depth-64, depth)
        unsigned __int128 low = 0;      // bits [depth-192, depth-64)
        for (int pi = 0; pi < row.nparts; ++pi) {
            const Part& part = row.parts[pi];
            const mp_limb_t* w = p;
            size_t wn = pn;
            if (part.basis != 0) {
                if (!ws.have[static_cast<size_t>(part.basis)]) {
                    Int& dst = ws.basis[static_cast<size_t>(part.basis)];
                    dst = basis_mult_[static_cast<size_t>(part.basis)] * ws.p;
                    mpz_fdiv_r_2exp(dst.get_mpz_t(), dst.get_mpz_t(),
                                    static_cast<mp_bitcnt_t>(depth_));
                    ws.have[static_cast<size_t>(part.basis)] = 1;
                }
                const Int& bz = ws.basis[static_cast<size_t>(part.basis)];
                w = mpz_limbs_read(bz.get_mpz_t());
                wn = static_cast<size_t>(mpz_size(bz.get_mpz_t()));
            }
            long base = depth_ - part.shift;
            uint64_t a2 = window64(w, wn, base - 64);
            unsigned __int128 alow =
                (static_cast<unsigned __int128>(window64(w, wn, base - 128)) << 64) |
                window64(w, wn, base - 192);
            if (part.sign > 0) {
                unsigned __int128 nl = low + alow;
                top += a2 + (nl < low ? 1 : 0);
                low = nl;
            } else {
                uint64_t borrow = low < alow ? 1 : 0;
                low -= alow;
                top -= a2 + borrow;
            }
        }
        // carry/borrow from below the 192-bit window is unresolved only when
        // the low 128 bits sit at the wrap boundary
        const unsigned __int128 kMax = ~static_cast<unsigned __int128>(0);
        bool in_band = low < kBandTol || low > kMax - kBandTol;
        if (!in_band) return static_cast<double>(top) * kInv2Pow64;
    }
    // exact fallback / generic path
    ws.scratch = row.v * ws.p;
    mpz_fdiv_r_2exp(ws.scratch.get_mpz_t(), ws.scratch.get_mpz_t(),
                    static_cast<mp_bitcnt_t>(depth_));
    if (depth_ >= 64) {
        mpz_tdiv_q_2exp(ws.scratch.get_mpz_t(), ws.scratch.get_mpz_t(),
                        static_cast<mp_bitcnt_t>(depth_ - 64));
        return static_cast<double>(mpz_get_ui(ws.scratch.get_mpz_t())) * kInv2Pow64;
    }
    uint64_t top = mpz_get_ui(ws.scratch.get_mpz_t()) << (64 - depth_);
    return static_cast<double>(top) * kInv2Pow64;
}

namespace {
void load_point(Int& dst, const mp_limb_t* p, size_t pn) {
    mpz_ptr zp = dst.get_mpz_t();
    if (pn == 0) {
        mpz_set_ui(zp, 0);
        return;
    }
    mp_limb_t* d = mpz_limbs_write(zp, static_cast<mp_size_t>(pn));
    for (size_t i = 0; i < pn; ++i) d[i] = p[i];
    mpz_limbs_finish(zp, static_cast<mp_size_t>(pn));
}
}  // namespace

void WindowEvaluator::fill_trig(const mp_limb_t* p, size_t pn, Workspace& ws) const {
    load_point(ws.p, p, pn);
    std::fill(ws.have.begin(), ws.have.end(), 0);
    size_t n = terms_.size();
    ws.theta.resize(n);
    ws.cosv.resize(n);
    for (size_t i = 0; i < n; ++i)
        ws.theta[i] = kTwoPi * frac_of_row(terms_[i], p, pn, ws);
    vec_cos(ws.theta.data(), ws.cosv.data(), n);
    if (any_sin_) {
        ws.sinv.resize(n);
        vec_sin(ws.theta.data(), ws.sinv.data(), n);
    }
}

double WindowEvaluator::eval(const mp_limb_t* p, size_t pn, Workspace& ws) const {
    fill_trig(p, pn, ws);
    double sum = 0.0, comp = 0.0;
    for (size_t i = 0; i < terms_.size(); ++i) {
        const TermRow& row = terms_[i];
        double term = row.c * ws.cosv[i];
        if (row.s != 0.0) term += row.s * ws.sinv[i];
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

void WindowEvaluator::eval_terms(const mp_limb_t* p, size_t pn, Workspace& ws,
                                 std::vector<double>& out) const {
    fill_trig(p, pn, ws);
    out.resize(terms_.size());
    for (size_t i = 0; i < terms_.size(); ++i) {
        const TermRow& row = terms_[i];
        out[i] = row.c * ws.cosv[i];
        if (row.s != 0.0) out[i] += row.s * ws.sinv[i];
    }
}

double WindowEvaluator::eval(const DyadicPoint& x, Workspace& ws) const {
    if (x.depth != depth_)
        throw std::invalid_argument("WindowEvaluator: point depth mismatch");
    return eval(mpz_limbs_read(x.num.get_mpz_t()),
                static_cast<size_t>(mpz_size(x.num.get_mpz_t())), ws);
}

}  // namespace lacsum
