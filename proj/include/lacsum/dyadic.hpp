#pragma once

#include "lacsum/sequence.hpp"
#include "lacsum/trigpoly.hpp"

namespace lacsum {

// Exact sample point p / 2^depth in [0, 1).
struct DyadicPoint {
    Int num;
    long depth = 1;
};

DyadicPoint make_dyadic(Int num, long depth);

// Exact fractional part of n * x at the same depth: ((n * p) mod 2^depth) / 2^depth.
DyadicPoint frac_mul(const Int& n, const DyadicPoint& x);

// num / 2^depth as a double (nearest after exact reduction)
inline double unit_value(const DyadicPoint& x) { return dyadic_to_double(x.num, x.depth); }

// f(x) with each frequency argument reduced exactly before any floating math
double eval_f(const TrigPolynomial& f, const DyadicPoint& x);

// minimal admissible depth for S_N evaluation: bitlen(degree * n_N) + 1
long min_depth(const TrigPolynomial& f, const LacunarySequence& seq, long N);
// default working depth: bitlen(degree * n_N) + 24 guard bits
long default_depth(const TrigPolynomial& f, const LacunarySequence& seq, long N);

// Unnormalized lacunary sum sum_{k<=N} f(n_k x); throws if x.depth < min_depth.
double eval_SN(const TrigPolynomial& f, const LacunarySequence& seq, long N, const DyadicPoint& x);

// Mean of eval_SN^2 over the full dyadic grid {p/2^depth}. Enumerates the grid
// when that is feasible; otherwise evaluates the same finite mean in closed
// form through exact frequency congruences mod 2^depth.
double grid_mean_SN_sq(const TrigPolynomial& f, const LacunarySequence& seq, long N, long depth);

}  // namespace lacsum
