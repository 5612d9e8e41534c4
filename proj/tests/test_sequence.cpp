#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "lacsum/construction.hpp"
#include "lacsum/rng.hpp"
#include "lacsum/seqio.hpp"
#include "lacsum/sequence.hpp"

using namespace lacsum;

TEST_CASE("geometric generator") {
    auto s = gen_geometric(Rat(2), 5);
    CHECK(s.terms() == std::vector<Int>{1, 2, 4, 8, 16});

    auto s2 = gen_geometric(Rat(3, 2), 4);
    CHECK(s2.terms() == std::vector<Int>{1, 2, 3, 5});

    CHECK_THROWS(gen_geometric(Rat(1), 3));
    CHECK_THROWS(gen_geometric(Rat(1, 2), 3));
}

TEST_CASE("geometric gap certified exactly") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        long num = 3 + static_cast<long>(rng.next() % 40);
        long den = 1 + static_cast<long>(rng.next() % (num - 1));
        Rat q(num, den);
        q.canonicalize();
        if (q <= 1) continue;
        long N = 2 + static_cast<long>(rng.next() % 40);
        auto s = gen_geometric(q, N);
        GapReport rep = verify_gap(s, 1);
        CHECK(rep.min_ratio >= q);
    }
}

TEST_CASE("erdos-fortet and pow2 generators") {
    auto ef = gen_erdos_fortet(5);
    CHECK(ef.terms() == std::vector<Int>{1, 3, 7, 15, 31});
    CHECK(gen_erdos_fortet(1).terms() == std::vector<Int>{1});
    CHECK(gen_erdos_fortet(20).term(20) == 1048575);

    auto p2 = gen_pow2(3);
    CHECK(p2.terms() == std::vector<Int>{2, 4, 8});
    CHECK(gen_pow2(1).terms() == std::vector<Int>{2});
    CHECK(gen_pow2(10).term(10) == 1024);
}

TEST_CASE("verify_gap reports exact rationals") {
    auto ef = gen_erdos_fortet(6);
    GapReport rep = verify_gap(ef, 1);
    CHECK(rep.min_ratio == Rat(63, 31));
    CHECK(rep.argmin_k == 5);

    auto p2 = gen_pow2(5);
    CHECK(verify_gap(p2, 1).min_ratio == Rat(2));
}

TEST_CASE("strict increase enforced") {
    CHECK_THROWS(LacunarySequence({Int(1), Int(1)}, std::nullopt, Provenance::Custom));
    CHECK_THROWS(LacunarySequence({Int(3), Int(2)}, std::nullopt, Provenance::Custom));
    CHECK_THROWS(LacunarySequence({Int(0), Int(2)}, std::nullopt, Provenance::Custom));
}

TEST_CASE("construction formula values match hand evaluation") {
    // paper tower, I=0, g = sqrt: blocks {1,2,3}, M(0)=2, terms 48, 80, 160
    ConstructionPlan plan = ConstructionPlan::paper(GrowthFunction::sqrt_n());
    ConstructedSequence cons = gen_theoremB(plan, 0);
    CHECK(cons.seq.terms() == std::vector<Int>{48, 80, 160});
    CHECK(cons.M == std::vector<long>{2});
    REQUIRE(cons.layout.size() == 2);
    CHECK(cons.layout[0].k_first == 1);
    CHECK(cons.layout[0].k_last == 2);
    CHECK(cons.layout[1].k_first == 3);
    CHECK(cons.layout[1].k_last == 3);

    // paper tower, I=1: first term of block 1 uses the factor 2^16
    ConstructedSequence cons1 = gen_theoremB(plan, 1);
    const Int& first_b1 = cons1.seq.term(4);  // first index of block 1
    CHECK(first_b1 % pow2(16) == 0);
    CHECK(first_b1 / pow2(16) % 2 == 1);  // factor is exactly 2^16: odd cofactor
    CHECK(first_b1 == pow2(16) * (pow2(4 + 1) + 1));

    // the exact tower is infeasible at I=3
    ConstructionPlan plan3 = ConstructionPlan::paper(GrowthFunction::sqrt_n(), 3);
    CHECK_THROWS_WITH_AS(gen_theoremB(plan3, 3),
                         doctest::Contains("infeasible"), std::invalid_argument);
}

TEST_CASE("construction term lookup agrees with generation") {
    ConstructionPlan plan = ConstructionPlan::desk(GrowthFunction::sqrt_n());
    ConstructedSequence cons = gen_theoremB(plan, 2);
    for (long k : {1L, 3L, 4L, 255L, 256L, 1000L, 2047L})
        CHECK(construction_term(plan, k) == cons.seq.term(k));
}

TEST_CASE("sub-blocks partition the index range with near-equal sizes") {
    ConstructionPlan plan = ConstructionPlan::desk(GrowthFunction::sqrt_n());
    ConstructedSequence cons = gen_theoremB(plan, 2);
    long expect = 1;
    for (size_t s = 0; s < cons.layout.size(); ++s) {
        CHECK(cons.layout[s].k_first == expect);
        expect = cons.layout[s].k_last + 1;
    }
    CHECK(expect == plan.block_last(2) + 1);

    // within each block, sub-block sizes differ by at most 1
    for (int i = 0; i <= 2; ++i) {
        long mn = 1L << 40, mx = 0;
        for (const auto& sb : cons.layout) {
            if (sb.i != i) continue;
            long sz = sb.k_last - sb.k_first + 1;
            mn = std::min(mn, sz);
            mx = std::max(mx, sz);
        }
        CHECK(mx - mn <= 1);
    }
}

TEST_CASE("cross-block jump ratio bound, paper tower, exact big-integer check") {
    ConstructionPlan plan = ConstructionPlan::paper(GrowthFunction::sqrt_n());
    for (int i : {0, 1}) {
        long k_last = plan.block_last(i);
        Int last = construction_term(plan, k_last);
        Int first_next = construction_term(plan, k_last + 1);
        long M = plan.subblock_count(i);
        Int Tdiff = plan.tower(i + 1) - plan.tower(i) - static_cast<long>(i) * M;
        REQUIRE(Tdiff.fits_slong_p());
        // n_{k+1} / n_k >= 2^{T(i+1) - T(i) - i M(i)}
        CHECK(first_next >= pow2(Tdiff.get_si()) * last);
    }
}

TEST_CASE("desk-scale ratios: within-sub-block near 2, cross-sub-block >= 0.9 * 2^{i+1}") {
    ConstructionPlan plan = ConstructionPlan::desk(GrowthFunction::sqrt_n());
    ConstructedSequence cons = gen_theoremB(plan, 2);
    long burn = cons.burn_in;
    CHECK(burn >= 1);
    size_t sb = 0;
    for (long k = 1; k + 1 <= static_cast<long>(cons.seq.size()); ++k) {
        while (cons.layout[sb].k_last < k) ++sb;
        const Int& a = cons.seq.term(k);
        const Int& b = cons.seq.term(k + 1);
        if (k + 1 <= cons.layout[sb].k_last) {
            if (k < burn) continue;
            // |b/a - 2| <= 2/100
            CHECK(100 * abs(b - 2 * a) <= 2 * a);
        } else {
            int i = cons.layout[sb].i;
            bool same_block = sb + 1 < cons.layout.size() && cons.layout[sb + 1].i == i;
            if (same_block) {
                // cross-sub-block: ratio >= 0.9 * 2^{i+1}
                CHECK(Rat(b, a) >= Rat(9, 10) * pow2(i + 1));
            } else {
                CHECK(Rat(b, a) >= pow2(i + 1));
            }
        }
    }
}

TEST_CASE("lacuseq round trip is bit-exact") {
    auto check_roundtrip = [](const LacunarySequence& s) {
        std::ostringstream os;
        write_lacuseq(os, s);
        std::istringstream is(os.str());
        LacunarySequence back = read_lacuseq(is);
        CHECK(back.terms() == s.terms());
        CHECK(back.provenance() == s.provenance());
        CHECK(back.declared_gap_q().has_value() == s.declared_gap_q().has_value());
        if (s.declared_gap_q()) CHECK(*back.declared_gap_q() == *s.declared_gap_q());
        std::ostringstream os2;
        write_lacuseq(os2, back);
        CHECK(os2.str() == os.str());
    };
    check_roundtrip(gen_pow2(40));
    check_roundtrip(gen_erdos_fortet(80));
    check_roundtrip(gen_geometric(Rat(7, 4), 30));
    ConstructionPlan plan = ConstructionPlan::desk(GrowthFunction::sqrt_n());
    check_roundtrip(gen_theoremB(plan, 1).seq);
}

TEST_CASE("growth function validation") {
    auto g = GrowthFunction::sqrt_n();
    CHECK(g(16.0) == doctest::Approx(4.0));
    CHECK(GrowthFunction::identity()(100.0) == doctest::Approx(100.0));
    CHECK(GrowthFunction::log_power(2.0)(100.0) == doctest::Approx(21.2075824).epsilon(1e-6));
    CHECK_THROWS(GrowthFunction::power(1.5));
    CHECK_THROWS(g(0.5));
}
