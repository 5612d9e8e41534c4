#include "lacsum/dyadic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lacsum {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

DyadicPoint make_dyadic(Int num, long depth) {
    if (depth < 1) throw std::invalid_argument("DyadicPoint: depth must be >= 1");
    if (num < 0) throw std::invalid_argument("DyadicPoint: numerator must be >= 0");
    if (bit_length(num) > depth)
        throw std::invalid_argument("DyadicPoint: numerator must be < 2^depth");
    return DyadicPoint{std::move(num), depth};
}

DyadicPoint frac_mul(const Int& n, const DyadicPoint& x) {
    if (n < 1) throw std::invalid_argument("frac_mul: n must be >= 1");
    Int r = n * x.num;
    mpz_fdiv_r_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(x.depth));
    return DyadicPoint{std::move(r), x.depth};
}

double eval_f(const TrigPolynomial& f, const DyadicPoint& x) {
    double sum = 0.0;
    for (const auto& t : f.terms()) {
        DyadicPoint arg = frac_mul(Int(t.j), x);
        double theta = kTwoPi * unit_value(arg);
        if (t.c != 0.0) sum += t.c * std::cos(theta);
        if (t.s != 0.0) sum += t.s * std::sin(theta);
    }
    return sum;
}

long min_depth(const TrigPolynomial& f, const LacunarySequence& seq, long N) {
    if (N < 1 || N > static_cast<long>(seq.size()))
        throw std::invalid_argument("min_depth: N out of range");
    return bit_length(Int(f.degree()) * seq.term(N)) + 1;
}

long default_depth(const TrigPolynomial& f, const LacunarySequence& seq, long N) {
    return bit_length(Int(f.degree()) * seq.term(N)) + 24;
}

double eval_SN(const TrigPolynomial& f, const LacunarySequence& seq, long N,
               const DyadicPoint& x) {
    if (N < 1 || N > static_cast<long>(seq.size()))
        throw std::invalid_argument("eval_SN: N out of range");
    if (x.depth < min_depth(f, seq, N))
        throw std::invalid_argument("eval_SN: dyadic depth too shallow for d * n_N (need >= " +
                                    std::to_string(min_depth(f, seq, N)) + ", have " +
                                    std::to_string(x.depth) + ")");
    // Kahan summation: the spec budget for the sum is ~1e-10 * N
    double sum = 0.0, comp = 0.0;
    Int v, r;
    for (long k = 1; k <= N; ++k) {
        for (const auto& t : f.terms()) {
            v = t.j * seq.term(k);
            r = v * x.num;
            mpz_fdiv_r_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(x.depth));
            double theta = kTwoPi * dyadic_to_double(r, x.depth);
            double term = 0.0;
            if (t.c != 0.0) term += t.c * std::cos(theta);
            if (t.s != 0.0) term += t.s * std::sin(theta);
            double y = term - comp;
            double tt = sum + y;
            comp = (tt - sum) - y;
            sum = tt;
        }
    }
    return sum;
}

double grid_mean_SN_sq(const TrigPolynomial& f, const LacunarySequence& seq, long N, long depth) {
    if (N < 1 || N > static_cast<long>(seq.size()))
        throw std::invalid_argument("grid_mean_SN_sq: N out of range");
    if (depth < min_depth(f, seq, N))
        throw std::invalid_argument("grid_mean_SN_sq: depth too shallow");

    if (depth <= 24) {
        long cells = 1L << depth;
        double sum = 0.0, comp = 0.0;
        for (long p = 0; p < cells; ++p) {
            double s = eval_SN(f, seq, N, DyadicPoint{Int(p), depth});
            double y = s * s - comp;
            double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        return sum / static_cast<double>(cells);
    }

    // Closed form of the same grid mean. With S = sum_t A_t cos(2 pi v_t x)
    // + B_t sin(2 pi v_t x), the full-grid average of a product of two rows
    // is decided by the congruences v_t +- v_u = 0 mod 2^depth.
    struct Row {
        Int v;
        double A;
        double B;
    };
    std::vector<Row> rows;
    for (long k = 1; k <= N; ++k)
        for (const auto& t : f.terms()) rows.push_back({t.j * seq.term(k), t.c, t.s});

    Int modm = pow2(depth), tmp;
    auto divisible = [&](const Int& z) {
        mpz_fdiv_r_2exp(tmp.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(depth));
        return tmp == 0;
    };
    (void)modm;
    double mean = 0.0;
    for (size_t t = 0; t < rows.size(); ++t) {
        for (size_t u = 0; u < rows.size(); ++u) {
            Int diff = rows[t].v - rows[u].v;
            if (divisible(diff)) mean += 0.5 * (rows[t].A * rows[u].A + rows[t].B * rows[u].B);
            Int sumv = rows[t].v + rows[u].v;
            if (divisible(sumv)) mean += 0.5 * (rows[t].A * rows[u].A - rows[t].B * rows[u].B);
        }
    }
    return mean;
}

}  // namespace lacsum
