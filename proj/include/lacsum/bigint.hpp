#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lacsum {

using Int = mpz_class;
using Rat = mpq_class;

inline long bit_length(const Int& n) {
    if (n == 0) return 0;
    return static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2));
}

inline Int pow2(long e) {
    if (e < 0) throw std::invalid_argument("pow2: negative exponent");
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(e));
    return r;
}

inline bool is_pow2(const Int& n) {
    return n > 0 && mpz_popcount(n.get_mpz_t()) == 1;
}

// 2-adic valuation; n must be nonzero.
inline long val2(const Int& n) {
    if (n == 0) throw std::invalid_argument("val2: zero");
    return static_cast<long>(mpz_scan1(n.get_mpz_t(), 0));
}

inline Int ceil_div(const Int& a, const Int& b) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// Exact value of n / 2^depth rounded to nearest double; safe for any depth
// (plain mpz_get_d would overflow once n exceeds ~2^1024).
inline double dyadic_to_double(const Int& n, long depth) {
    if (n == 0) return 0.0;
    long e;
    double d = mpz_get_d_2exp(&e, n.get_mpz_t());
    long shift = e - depth;
    if (shift < -1070) return 0.0;
    return std::ldexp(d, static_cast<int>(shift));
}

inline Int int_from_decimal(const std::string& s) {
    Int r;
    if (mpz_set_str(r.get_mpz_t(), s.c_str(), 10) != 0)
        throw std::invalid_argument("bad decimal integer: " + s);
    return r;
}

// Parses "p", "p/q" or a plain decimal like "1.5" into an exact rational.
inline Rat rat_from_string(const std::string& s) {
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        long frac_len = static_cast<long>(s.size() - dot - 1);
        bool neg = false;
        if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
            neg = digits[0] == '-';
            digits = digits.substr(1);
        }
        if (digits.empty()) throw std::invalid_argument("bad rational: " + s);
        Int num = int_from_decimal(digits);
        Int den = 1;
        for (long i = 0; i < frac_len; ++i) den *= 10;
        Rat r(num, den);
        r.canonicalize();
        if (neg) r = -r;
        return r;
    }
    Rat r;
    if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
        throw std::invalid_argument("bad rational: " + s);
    r.canonicalize();
    return r;
}

}  // namespace lacsum
