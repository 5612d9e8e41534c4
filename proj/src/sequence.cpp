#include "lacsum/sequence.hpp"

#include <stdexcept>

namespace lacsum {

std::string provenance_tag(Provenance p) {
    switch (p) {
        case Provenance::Geometric: return "geometric";
        case Provenance::Pow2: return "pow2";
        case Provenance::ErdosFortet: return "erdos-fortet";
        case Provenance::TheoremB: return "theoremB";
        case Provenance::Custom: return "custom";
    }
    return "custom";
}

Provenance provenance_from_tag(const std::string& tag) {
    if (tag == "geometric") return Provenance::Geometric;
    if (tag == "pow2") return Provenance::Pow2;
    if (tag == "erdos-fortet") return Provenance::ErdosFortet;
    if (tag == "theoremB") return Provenance::TheoremB;
    if (tag == "custom") return Provenance::Custom;
    throw std::invalid_argument("unknown provenance tag: " + tag);
}

LacunarySequence::LacunarySequence(std::vector<Int> terms, std::optional<Rat> declared_gap_q,
                                   Provenance provenance, long burn_in)
    : terms_(std::move(terms)), declared_gap_q_(std::move(declared_gap_q)),
      provenance_(provenance), burn_in_(burn_in) {
    if (terms_.empty()) throw std::invalid_argument("LacunarySequence: empty");
    if (terms_.front() < 1) throw std::invalid_argument("LacunarySequence: terms must be >= 1");
    for (size_t i = 1; i < terms_.size(); ++i) {
        if (terms_[i] <= terms_[i - 1])
            throw std::invalid_argument("LacunarySequence: terms must be strictly increasing (at index " +
                                        std::to_string(i + 1) + ")");
    }
    if (declared_gap_q_) {
        if (*declared_gap_q_ <= 1)
            throw std::invalid_argument("LacunarySequence: declared gap q must be > 1");
        // certify the declared ratio from burn_in on: n_{k+1} >= q n_k, exactly
        size_t start = burn_in_ >= 1 ? static_cast<size_t>(burn_in_ - 1) : 0;
        for (size_t i = start; i + 1 < terms_.size(); ++i) {
            if (Rat(terms_[i + 1]) < *declared_gap_q_ * Rat(terms_[i]))
                throw std::invalid_argument("LacunarySequence: declared gap q not satisfied at k=" +
                                            std::to_string(i + 1));
        }
    }
}

LacunarySequence gen_geometric(const Rat& q, long N) {
    if (q <= 1) throw std::invalid_argument("gen_geometric: q must be > 1");
    if (N < 1) throw std::invalid_argument("gen_geometric: N must be >= 1");
    std::vector<Int> terms;
    terms.reserve(static_cast<size_t>(N));
    Int n = 1;
    terms.push_back(n);
    for (long k = 1; k < N; ++k) {
        Int next = ceil_div(q.get_num() * n, q.get_den());
        if (next <= n) next = n + 1;
        terms.push_back(next);
        n = next;
    }
    return LacunarySequence(std::move(terms), q, Provenance::Geometric);
}

LacunarySequence gen_erdos_fortet(long N) {
    if (N < 1) throw std::invalid_argument("gen_erdos_fortet: N must be >= 1");
    std::vector<Int> terms;
    terms.reserve(static_cast<size_t>(N));
    for (long k = 1; k <= N; ++k) terms.push_back(pow2(k) - 1);
    return LacunarySequence(std::move(terms), std::nullopt, Provenance::ErdosFortet);
}

LacunarySequence gen_pow2(long N) {
    if (N < 1) throw std::invalid_argument("gen_pow2: N must be >= 1");
    std::vector<Int> terms;
    terms.reserve(static_cast<size_t>(N));
    for (long k = 1; k <= N; ++k) terms.push_back(pow2(k));
    return LacunarySequence(std::move(terms), Rat(2), Provenance::Pow2);
}

GapReport verify_gap(const LacunarySequence& seq, long burn_in) {
    if (seq.size() < 2) throw std::invalid_argument("verify_gap: need at least 2 terms");
    if (burn_in < 1) burn_in = 1;
    if (burn_in > static_cast<long>(seq.size()) - 1)
        throw std::invalid_argument("verify_gap: burn_in leaves no ratios");
    GapReport rep;
    bool first = true;
    for (long k = burn_in; k + 1 <= static_cast<long>(seq.size()); ++k) {
        Rat ratio(seq.term(k + 1), seq.term(k));
        ratio.canonicalize();
        if (first || ratio < rep.min_ratio) {
            rep.min_ratio = ratio;
            rep.argmin_k = k;
            first = false;
        }
        rep.last_ratio = ratio;
    }
    return rep;
}

}  // namespace lacsum
