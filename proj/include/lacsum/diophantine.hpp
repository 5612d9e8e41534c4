#pragma once

#include <utility>
#include <vector>

#include "lacsum/growth.hpp"
#include "lacsum/sequence.hpp"

namespace lacsum {

// Result of maximizing #{(k,l) <= N : a n_k - b n_l = c} over c.
// When a == b the value c = 0 is excluded from the supremum. Among maximizing
// c the witness is the one with smallest |c|, then smallest c. If every
// admissible c has count 0 (only possible for a == b, N == 1), max_count is 0
// and witness_c is 1.
struct SolutionCensus {
    long a = 1;
    long b = 1;
    long N = 0;
    long max_count = 0;
    Int witness_c;
    bool excluded_zero = false;
};

struct CensusOptions {
    // pairs processed per in-memory run; larger censuses stream the pair set
    // once per run with a bit-length window filter
    size_t run_pair_cap = 8'000'000;
};

SolutionCensus count_solutions(const LacunarySequence& seq, long N, long a, long b,
                               const CensusOptions& opt = {});

// Exact pair count for a single right-hand side c (independent of the census
// path: solves b n_l = a n_k - c by binary search per k).
long count_for_c(const LacunarySequence& seq, long N, long a, long b, const Int& c);

struct ScanRow {
    long N = 0;
    long a = 1;
    long b = 1;
    long L = 0;
    Int witness_c;
    double g_N = 1.0;
    double L_g_over_N = 0.0;
};

std::vector<ScanRow> scan_L(const LacunarySequence& seq, const std::vector<long>& Ns,
                            const std::vector<std::pair<long, long>>& pairs,
                            const GrowthFunction& g, const CensusOptions& opt = {});

// Max over c of the number of solutions with k and l in different blocks.
// Blocks are disjoint, contiguous, increasing index intervals [first, last].
long count_cross_block(const LacunarySequence& seq,
                       const std::vector<std::pair<long, long>>& blocks, long a, long b,
                       const CensusOptions& opt = {});

}  // namespace lacsum
