#include "lacsum/binomial.hpp"

#include <cmath>
#include <stdexcept>

namespace lacsum {

namespace {

// Lentz evaluation of the incomplete beta continued fraction.
double beta_cf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double eps = 1e-15;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double lbt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                 b * std::log1p(-x);
    double bt = std::exp(lbt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

std::pair<double, double> clopper_pearson(long k, long n, double level) {
    if (n < 1 || k < 0 || k > n) throw std::invalid_argument("clopper_pearson: bad (k, n)");
    if (level <= 0.0 || level >= 1.0) throw std::invalid_argument("clopper_pearson: bad level");
    double alpha = 1.0 - level;

    // invert I_x(a, b) = target by bisection; I_x is increasing in x
    auto inv = [](double a, double b, double target) {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if (inc_beta(a, b, mid) < target)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    double lower = 0.0, upper = 1.0;
    if (k > 0) lower = inv(static_cast<double>(k), static_cast<double>(n - k + 1), alpha / 2.0);
    if (k < n)
        upper = inv(static_cast<double>(k + 1), static_cast<double>(n - k), 1.0 - alpha / 2.0);
    return {lower, upper};
}

}  // namespace lacsum
