#include "lacsum/normal.hpp"

#include <cmath>
#include <stdexcept>

namespace lacsum {

namespace {

const long double kSqrtPi = 1.7724538509055160272981674833411452L;

// erf(x) via the cancellation-free confluent series
//   erf(x) = (2/sqrt(pi)) e^{-x^2} sum_{n>=0} 2^n x^{2n+1} / (1*3*...*(2n+1)),
// accurate for 0 <= x < ~3.
long double erf_series(long double x) {
    long double x2 = x * x;
    long double term = x;
    long double sum = x;
    for (int n = 1; n < 400; ++n) {
        term *= 2.0L * x2 / static_cast<long double>(2 * n + 1);
        sum += term;
        if (term < sum * 1e-22L) break;
    }
    return 2.0L / kSqrtPi * expl(-x2) * sum;
}

// erfc(x) for x >= ~1 via the Laplace continued fraction
//   erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// evaluated with the modified Lentz algorithm.
long double erfc_cf(long double x) {
    const long double tiny = 1e-4930L;
    long double f = x;
    long double C = x;
    long double D = 0.0L;
    for (int n = 1; n < 400; ++n) {
        long double a = static_cast<long double>(n) / 2.0L;
        D = x + a * D;
        if (D == 0.0L) D = tiny;
        C = x + a / C;
        if (C == 0.0L) C = tiny;
        D = 1.0L / D;
        long double delta = C * D;
        f *= delta;
        if (fabsl(delta - 1.0L) < 1e-21L) break;
    }
    return expl(-x * x) / kSqrtPi / f;
}

long double erfc_ext(long double x) {
    if (x < 3.0L) return 1.0L - erf_series(x);
    return erfc_cf(x);
}

}  // namespace

double normal_tail(double t) {
    if (!(t >= -40.0 && t <= 40.0))
        throw std::invalid_argument("normal_tail: t outside [-40, 40]");
    const long double inv_sqrt2 = 0.70710678118654752440084436210484904L;
    if (t >= 0.0) return static_cast<double>(0.5L * erfc_ext(static_cast<long double>(t) * inv_sqrt2));
    return static_cast<double>(1.0L - 0.5L * erfc_ext(static_cast<long double>(-t) * inv_sqrt2));
}

double normal_cdf(double t) { return normal_tail(-t); }

}  // namespace lacsum
