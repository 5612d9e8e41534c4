#pragma once

#include <string>
#include <vector>

#include "lacsum/bigint.hpp"

namespace lacsum {

// Mean-zero 1-periodic trigonometric polynomial
//   f(x) = sum_j c_j cos(2 pi j x) + s_j sin(2 pi j x),  j >= 1.
// Coefficients are kept both as doubles (evaluation) and exact rationals
// (censuses that accumulate coefficient products exactly). Text form:
// "cos:1=1,cos:2=1" / "sin:3=0.25".
class TrigPolynomial {
  public:
    struct Term {
        long j = 0;
        double c = 0.0;
        double s = 0.0;
        Rat c_rat{0};
        Rat s_rat{0};
    };

    static TrigPolynomial parse(const std::string& text);
    std::string format() const;

    static TrigPolynomial cosine(long j = 1);        // cos(2 pi j x)
    static TrigPolynomial erdos_fortet();            // cos(2 pi x) + cos(4 pi x)
    static TrigPolynomial dyadic_cosines(int d);     // sum_{j=0}^{d-1} cos(2 pi 2^j x)

    TrigPolynomial& add(long j, const std::string& cos_coeff, const std::string& sin_coeff);
    void finalize();  // sorts by j, validates

    long degree() const { return terms_.empty() ? 0 : terms_.back().j; }
    const std::vector<Term>& terms() const { return terms_; }
    bool cosine_only() const;
    double l2_norm() const;  // sqrt(sum (c_j^2 + s_j^2) / 2)

  private:
    std::vector<Term> terms_;
};

}  // namespace lacsum
