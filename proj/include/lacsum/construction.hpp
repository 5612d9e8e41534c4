#pragma once

#include <functional>
#include <vector>

#include "lacsum/growth.hpp"
#include "lacsum/sequence.hpp"

namespace lacsum {

// Blocked construction n_k = 2^{T(i)} (2^{k+im} + m) for k in sub-block m of
// block i, where block i covers indices {2^{e(i)}, ..., 2^{e(i+1)}-1} and is
// split into M(i) = ceil(g(#block_i)) sub-blocks of near-equal size.
struct ConstructionPlan {
    std::function<Int(int)> tower;          // separation exponent T(i); factor is 2^{T(i)}
    std::function<long(int)> block_exp;     // e(i); block i = {2^{e(i)}, ..., 2^{e(i+1)}-1}
    GrowthFunction growth;
    int block_index_bound = 0;              // max usable i
    long bit_budget = (1L << 28);           // total bits across all generated terms

    // exact tower T(i) = 2^{2^{2^i}}, exact blocks e(i) = 3^i - 1
    static ConstructionPlan paper(GrowthFunction g, int max_i = 2);
    // T(i) = 4^{i+2}; blocks follow e(i) = 3^i - 1 up to i = 2, then e(i) = 3i + 2
    static ConstructionPlan desk(GrowthFunction g, int max_i = 6);

    long block_first(int i) const;   // min index of block i
    long block_last(int i) const;    // max index of block i
    long block_size(int i) const;
    long subblock_count(int i) const;  // M(i)
    // sub-block m (1-based) of block i as an index interval [first, last]
    std::pair<long, long> subblock_range(int i, long m) const;
    // locate index k: returns (i, m); k must lie in some block with i <= block_index_bound
    std::pair<int, long> locate(long k) const;
};

// n_k evaluated directly from the construction formula (no materialization)
Int construction_term(const ConstructionPlan& plan, long k);

struct SubBlock {
    int i;
    long m;
    long k_first;
    long k_last;
};

struct ConstructedSequence {
    LacunarySequence seq;      // terms for k = 1 .. block_last(I)
    std::vector<SubBlock> layout;
    std::vector<long> M;       // M(i) for i = 0..I
    int max_block = 0;         // I
    long burn_in = 1;          // first k from which within-sub-block ratios are within 2*(1 +- 1e-2)
};

// Generates all terms through block I. Throws with the offending block index
// when the bit budget would be exceeded.
ConstructedSequence gen_theoremB(const ConstructionPlan& plan, int I);

}  // namespace lacsum
