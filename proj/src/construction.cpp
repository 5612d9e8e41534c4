#include "lacsum/construction.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lacsum {

namespace {

Int tower_paper(int i) {
    // T(i) = 2^{2^{2^i}}; the inner exponents stay machine-sized for all i
    // that could ever pass a bit budget, but T itself needs big integers.
    if (i < 0) throw std::invalid_argument("tower: negative block index");
    if (i > 6) throw std::invalid_argument("tower: block index too large");
    unsigned long inner = 1UL << static_cast<unsigned>(i);   // 2^i
    unsigned long mid = 1UL << inner;                        // 2^{2^i}, i <= 6 fits
    return pow2(static_cast<long>(mid));
}

Int tower_desk(int i) {
    if (i < 0) throw std::invalid_argument("tower: negative block index");
    Int r = 16;
    for (int j = 0; j < i; ++j) r *= 4;
    return r;
}

long block_exp_paper(int i) {
    long e = 1;
    for (int j = 0; j < i; ++j) {
        if (e > (1L << 40)) throw std::invalid_argument("block exponent overflow");
        e *= 3;
    }
    return e - 1;  // 3^i - 1
}

long block_exp_desk(int i) {
    if (i <= 2) return block_exp_paper(i);
    return 3L * i + 2;
}

}  // namespace

ConstructionPlan ConstructionPlan::paper(GrowthFunction g, int max_i) {
    ConstructionPlan p;
    p.tower = tower_paper;
    p.block_exp = block_exp_paper;
    p.growth = std::move(g);
    p.block_index_bound = max_i;
    return p;
}

ConstructionPlan ConstructionPlan::desk(GrowthFunction g, int max_i) {
    ConstructionPlan p;
    p.tower = tower_desk;
    p.block_exp = block_exp_desk;
    p.growth = std::move(g);
    p.block_index_bound = max_i;
    return p;
}

long ConstructionPlan::block_first(int i) const { return 1L << block_exp(i); }
long ConstructionPlan::block_last(int i) const { return (1L << block_exp(i + 1)) - 1; }
long ConstructionPlan::block_size(int i) const { return block_last(i) - block_first(i) + 1; }

long ConstructionPlan::subblock_count(int i) const {
    long sz = block_size(i);
    long M = static_cast<long>(std::ceil(growth(static_cast<double>(sz))));
    if (M < 1) M = 1;
    if (M > sz)
        throw std::invalid_argument("ConstructionPlan: M(i) > #block at i=" + std::to_string(i));
    return M;
}

std::pair<long, long> ConstructionPlan::subblock_range(int i, long m) const {
    long sz = block_size(i);
    long M = subblock_count(i);
    if (m < 1 || m > M) throw std::invalid_argument("subblock_range: m out of range");
    long base = sz / M;
    long extra = sz % M;  // first `extra` sub-blocks get one more element
    long first_off = (m - 1) * base + std::min(m - 1, extra);
    long len = base + (m <= extra ? 1 : 0);
    long first = block_first(i) + first_off;
    return {first, first + len - 1};
}

std::pair<int, long> ConstructionPlan::locate(long k) const {
    for (int i = 0; i <= block_index_bound; ++i) {
        if (k >= block_first(i) && k <= block_last(i)) {
            long M = subblock_count(i);
            for (long m = 1; m <= M; ++m) {
                auto [a, b] = subblock_range(i, m);
                if (k >= a && k <= b) return {i, m};
            }
        }
    }
    throw std::invalid_argument("locate: index " + std::to_string(k) + " outside planned blocks");
}

Int construction_term(const ConstructionPlan& plan, long k) {
    auto [i, m] = plan.locate(k);
    Int T = plan.tower(i);
    if (!T.fits_slong_p())
        throw std::invalid_argument(
            "construction_term: tower exponent at block i=" + std::to_string(i) +
            " does not fit any bit budget");
    long Tl = T.get_si();
    Int inner = pow2(k + static_cast<long>(i) * m) + m;
    return pow2(Tl) * inner;
}

ConstructedSequence gen_theoremB(const ConstructionPlan& plan, int I) {
    if (I < 0 || I > plan.block_index_bound)
        throw std::invalid_argument("gen_theoremB: block index out of plan range");

    // tower feasibility first: the exact tower factor outgrows any budget fast
    for (int i = 0; i <= I; ++i) {
        Int T = plan.tower(i);
        if (!T.fits_slong_p() || T > plan.bit_budget)
            throw std::invalid_argument(
                "gen_theoremB: bit budget exceeded at block i=" + std::to_string(i) +
                ": the separation exponent T(" + std::to_string(i) +
                ") alone outweighs the budget; the exact tower factor 2^{2^{2^{2^i}}} is "
                "infeasible for i >= 3 under any bit budget");
    }
    // size pass: the largest exponent in block i is T(i) + max(block) + i*M(i)
    long total_bits = 0;
    for (int i = 0; i <= I; ++i) {
        long M = plan.subblock_count(i);
        Int top_exp = plan.tower(i) + plan.block_last(i) + static_cast<long>(i) * M;
        // total bits of block i: sum over k of (T + k + i*m); bounded by size * top
        Int block_bits = Int(plan.block_size(i)) * top_exp;
        Int running = Int(total_bits) + block_bits;
        if (running > plan.bit_budget)
            throw std::invalid_argument("gen_theoremB: bit budget exceeded at block i=" +
                                        std::to_string(i) + " (~" + running.get_str() +
                                        " cumulative bits, budget " +
                                        std::to_string(plan.bit_budget) + ")");
        total_bits = running.get_si();
    }

    std::vector<SubBlock> layout;
    std::vector<long> Ms;
    std::vector<Int> terms;
    terms.reserve(static_cast<size_t>(plan.block_last(I)));
    for (int i = 0; i <= I; ++i) {
        long Tl = plan.tower(i).get_si();
        long M = plan.subblock_count(i);
        Ms.push_back(M);
        for (long m = 1; m <= M; ++m) {
            auto [a, b] = plan.subblock_range(i, m);
            layout.push_back({i, m, a, b});
            for (long k = a; k <= b; ++k)
                terms.push_back(pow2(Tl) * (pow2(k + static_cast<long>(i) * m) + m));
        }
    }

    // burn-in: last within-sub-block index where n_{k+1}/n_k leaves 2*(1 +- 1e-2)
    long burn = 1;
    {
        size_t sb = 0;
        for (long k = 1; k + 1 <= plan.block_last(I); ++k) {
            while (layout[sb].k_last < k) ++sb;
            if (k + 1 > layout[sb].k_last) continue;  // (k, k+1) crosses a sub-block edge
            const Int& a = terms[static_cast<size_t>(k - 1)];
            const Int& b = terms[static_cast<size_t>(k)];
            // |b/a - 2| <= 2/100  <=>  100*|b - 2a| <= 2a
            Int dev = b - 2 * a;
            if (100 * abs(dev) > 2 * a) burn = k + 1;
        }
    }
    return ConstructedSequence{
        LacunarySequence(std::move(terms), Rat(3, 2), Provenance::TheoremB, 1),
        std::move(layout), std::move(Ms), I, burn};
}

}  // namespace lacsum
