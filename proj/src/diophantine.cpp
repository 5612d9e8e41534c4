#include "lacsum/diophantine.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace lacsum {

namespace {

struct MpzHash {
    size_t operator()(const Int& v) const {
        const mpz_srcptr z = v.get_mpz_t();
        size_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<size_t>(mpz_sgn(z));
        long n = z->_mp_size;
        if (n < 0) n = -n;
        for (long i = 0; i < n; ++i) {
            h ^= static_cast<size_t>(z->_mp_d[i]);
            h *= 0x2545f4914f6cdd1dULL;
            h ^= h >> 29;
        }
        return h;
    }
};

using CountMap = std::unordered_map<Int, long, MpzHash>;

struct Best {
    long count = -1;
    Int c;

    void offer(long cnt, const Int& cand) {
        if (cnt > count) {
            count = cnt;
            c = cand;
            return;
        }
        if (cnt == count) {
            Int ac = abs(cand), ab = abs(c);
            if (ac < ab || (ac == ab && cand < c)) c = cand;
        }
    }
};

// The pair universe: indices (positions into a term subset) plus an optional
// block id used to keep only cross-block pairs.
struct PairUniverse {
    std::vector<const Int*> an;  // a * n_k
    std::vector<const Int*> bn;  // b * n_k
    std::vector<Int> an_store, bn_store;
    std::vector<long> an_bits, bn_bits;
    std::vector<int> block;  // empty = all pairs allowed
    bool exclude_zero = false;

    size_t size() const { return an_store.size(); }
    bool allowed(size_t i, size_t j) const {
        return block.empty() || block[i] != block[j];
    }
};

PairUniverse make_universe(const LacunarySequence& seq, const std::vector<long>& ks, long a,
                           long b, bool exclude_zero, const std::vector<int>& block_ids) {
    PairUniverse u;
    u.exclude_zero = exclude_zero;
    u.block = block_ids;
    u.an_store.reserve(ks.size());
    u.bn_store.reserve(ks.size());
    for (long k : ks) {
        u.an_store.push_back(a * seq.term(k));
        u.bn_store.push_back(b * seq.term(k));
    }
    for (size_t i = 0; i < ks.size(); ++i) {
        u.an_bits.push_back(bit_length(u.an_store[i]));
        u.bn_bits.push_back(bit_length(u.bn_store[i]));
    }
    return u;
}

// bucket id for a nonzero difference: positive c -> bitlen, negative -> -bitlen
long bucket_of(const Int& c) {
    long bits = bit_length(c);
    return mpz_sgn(c.get_mpz_t()) > 0 ? bits : -bits;
}

void count_into(CountMap& map, const PairUniverse& u, long lo_bucket, long hi_bucket,
                bool windowed) {
    size_t n = u.size();
    for (size_t i = 0; i < n; ++i) {
        long ub = u.an_bits[i];
        for (size_t j = 0; j < n; ++j) {
            if (!u.allowed(i, j)) continue;
            if (windowed) {
                long vb = u.bn_bits[j];
                // coarse bucket window for this pair; exact bucket checked below
                long wlo, whi;
                if (ub >= vb + 2) {
                    wlo = ub - 1;
                    whi = ub;
                } else if (vb >= ub + 2) {
                    wlo = -vb;
                    whi = -(vb - 1);
                } else {
                    wlo = -vb - 1;
                    whi = ub + 1;
                }
                if (whi < lo_bucket || wlo > hi_bucket) continue;
            }
            Int c = u.an_store[i] - u.bn_store[j];
            if (c == 0) {
                if (u.exclude_zero) continue;
            } else if (windowed) {
                long bk = bucket_of(c);
                if (bk < lo_bucket || bk > hi_bucket) continue;
            }
            ++map[c];
        }
    }
}

std::pair<long, Int> census_core(const PairUniverse& u, const CensusOptions& opt) {
    size_t n = u.size();
    Best best;
    if (n == 0) return {0, Int(1)};

    auto flush = [&best](CountMap& map) {
        for (const auto& [c, cnt] : map) best.offer(cnt, c);
        map.clear();
    };

    if (n * n <= opt.run_pair_cap) {
        CountMap map;
        // parallel over row chunks, per-thread maps merged by integer addition
        int nt = omp_get_max_threads();
        std::vector<CountMap> partial(static_cast<size_t>(nt));
#pragma omp parallel num_threads(nt)
        {
            CountMap& mine = partial[static_cast<size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
            for (long i = 0; i < static_cast<long>(n); ++i) {
                for (size_t j = 0; j < n; ++j) {
                    if (!u.allowed(static_cast<size_t>(i), j)) continue;
                    Int c = u.an_store[static_cast<size_t>(i)] - u.bn_store[j];
                    if (c == 0 && u.exclude_zero) continue;
                    ++mine[c];
                }
            }
        }
        for (auto& pm : partial)
            for (auto& [c, cnt] : pm) map[c] += cnt;
        flush(map);
        if (best.count < 0) return {0, Int(1)};
        return {best.count, best.c};
    }

    // Streamed mode: histogram over (sign, bitlen) buckets (estimated for
    // non-cancelling pairs, exact for near-cancelling ones), then one
    // windowed counting pass per bucket run.
    long max_bits = 0;
    for (size_t i = 0; i < n; ++i)
        max_bits = std::max({max_bits, u.an_bits[i], u.bn_bits[i]});
    max_bits += 2;
    std::vector<size_t> hist(static_cast<size_t>(2 * max_bits + 1), 0);
    auto hidx = [max_bits](long bucket) { return static_cast<size_t>(bucket + max_bits); };

    for (size_t i = 0; i < n; ++i) {
        long ub = u.an_bits[i];
        for (size_t j = 0; j < n; ++j) {
            if (!u.allowed(i, j)) continue;
            long vb = u.bn_bits[j];
            if (ub >= vb + 2) {
                ++hist[hidx(ub)];
            } else if (vb >= ub + 2) {
                ++hist[hidx(-vb)];
            } else {
                Int c = u.an_store[i] - u.bn_store[j];
                if (c == 0) {
                    if (!u.exclude_zero) ++hist[hidx(0)];
                } else {
                    ++hist[hidx(bucket_of(c))];
                }
            }
        }
    }

    CountMap map;
    long run_lo = -max_bits;
    size_t run_load = 0;
    for (long bkt = -max_bits; bkt <= max_bits; ++bkt) {
        size_t load = hist[hidx(bkt)];
        if (run_load > 0 && run_load + load > opt.run_pair_cap) {
            count_into(map, u, run_lo, bkt - 1, true);
            flush(map);
            run_lo = bkt;
            run_load = 0;
        }
        run_load += load;
    }
    count_into(map, u, run_lo, max_bits, true);
    flush(map);
    if (best.count < 0) return {0, Int(1)};
    return {best.count, best.c};
}

std::vector<long> iota_indices(long N) {
    std::vector<long> ks(static_cast<size_t>(N));
    for (long k = 1; k <= N; ++k) ks[static_cast<size_t>(k - 1)] = k;
    return ks;
}

}  // namespace

SolutionCensus count_solutions(const LacunarySequence& seq, long N, long a, long b,
                               const CensusOptions& opt) {
    if (N < 1 || N > static_cast<long>(seq.size()))
        throw std::invalid_argument("count_solutions: N out of range");
    if (a < 1 || b < 1) throw std::invalid_argument("count_solutions: a, b must be >= 1");
    SolutionCensus out;
    out.a = a;
    out.b = b;
    out.N = N;
    out.excluded_zero = (a == b);
    PairUniverse u = make_universe(seq, iota_indices(N), a, b, out.excluded_zero, {});
    auto [cnt, c] = census_core(u, opt);
    out.max_count = cnt;
    out.witness_c = c;
    return out;
}

long count_for_c(const LacunarySequence& seq, long N, long a, long b, const Int& c) {
    if (N < 1 || N > static_cast<long>(seq.size()))
        throw std::invalid_argument("count_for_c: N out of range");
    if (a < 1 || b < 1) throw std::invalid_argument("count_for_c: a, b must be >= 1");
    const auto& terms = seq.terms();
    auto begin = terms.begin();
    auto end = terms.begin() + N;
    long count = 0;
    for (long k = 1; k <= N; ++k) {
        Int t = a * seq.term(k) - c;
        if (t <= 0) continue;
        if (t % b != 0) continue;
        Int target = t / b;
        auto it = std::lower_bound(begin, end, target);
        if (it != end && *it == target) ++count;
    }
    return count;
}

std::vector<ScanRow> scan_L(const LacunarySequence& seq, const std::vector<long>& Ns,
                            const std::vector<std::pair<long, long>>& pairs,
                            const GrowthFunction& g, const CensusOptions& opt) {
    for (size_t i = 1; i < Ns.size(); ++i)
        if (Ns[i] <= Ns[i - 1]) throw std::invalid_argument("scan_L: Ns must be increasing");
    std::vector<ScanRow> rows;
    for (long N : Ns) {
        for (auto [a, b] : pairs) {
            SolutionCensus cs = count_solutions(seq, N, a, b, opt);
            ScanRow r;
            r.N = N;
            r.a = a;
            r.b = b;
            r.L = cs.max_count;
            r.witness_c = cs.witness_c;
            r.g_N = g(static_cast<double>(N));
            r.L_g_over_N = static_cast<double>(cs.max_count) * r.g_N / static_cast<double>(N);
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

long count_cross_block(const LacunarySequence& seq,
                       const std::vector<std::pair<long, long>>& blocks, long a, long b,
                       const CensusOptions& opt) {
    if (a < 1 || b < 1) throw std::invalid_argument("count_cross_block: a, b must be >= 1");
    if (blocks.empty()) return 0;
    std::vector<std::pair<long, long>> sorted = blocks;
    std::sort(sorted.begin(), sorted.end());
    std::vector<long> ks;
    std::vector<int> ids;
    for (size_t bi = 0; bi < sorted.size(); ++bi) {
        auto [first, last] = sorted[bi];
        if (first < 1 || last > static_cast<long>(seq.size()) || first > last)
            throw std::invalid_argument("count_cross_block: bad block interval");
        if (bi > 0 && first <= sorted[bi - 1].second)
            throw std::invalid_argument("count_cross_block: blocks overlap");
        for (long k = first; k <= last; ++k) {
            ks.push_back(k);
            ids.push_back(static_cast<int>(bi));
        }
    }
    if (sorted.size() < 2) return 0;
    PairUniverse u = make_universe(seq, ks, a, b, false, ids);
    auto [cnt, c] = census_core(u, opt);
    (void)c;
    return std::max(cnt, 0L);
}

}  // namespace lacsum
