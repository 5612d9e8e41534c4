#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lacsum/bigint.hpp"

namespace lacsum {

enum class Provenance { Geometric, Pow2, ErdosFortet, TheoremB, Custom };

std::string provenance_tag(Provenance p);
Provenance provenance_from_tag(const std::string& tag);

// Strictly increasing positive integer sequence n_1 < n_2 < ... with optional
// certified gap ratio q (n_{k+1}/n_k >= q from burn_in on).
class LacunarySequence {
  public:
    LacunarySequence(std::vector<Int> terms, std::optional<Rat> declared_gap_q,
                     Provenance provenance, long burn_in = 1);

    size_t size() const { return terms_.size(); }
    // 1-based, matching index conventions everywhere in this library
    const Int& term(long k) const { return terms_.at(static_cast<size_t>(k - 1)); }
    const std::vector<Int>& terms() const { return terms_; }

    const std::optional<Rat>& declared_gap_q() const { return declared_gap_q_; }
    Provenance provenance() const { return provenance_; }
    long burn_in() const { return burn_in_; }

  private:
    std::vector<Int> terms_;
    std::optional<Rat> declared_gap_q_;
    Provenance provenance_;
    long burn_in_;
};

// n_1 = 1, n_{k+1} = max(ceil(q n_k), n_k + 1). Requires q > 1.
LacunarySequence gen_geometric(const Rat& q, long N);

// n_k = 2^k - 1
LacunarySequence gen_erdos_fortet(long N);

// n_k = 2^k
LacunarySequence gen_pow2(long N);

struct GapReport {
    Rat min_ratio;
    long argmin_k = 0;  // index k achieving min of n_{k+1}/n_k
    Rat last_ratio;
};

// Exact rational minimum of n_{k+1}/n_k over k >= burn_in, plus the final ratio.
GapReport verify_gap(const LacunarySequence& seq, long burn_in);

}  // namespace lacsum
