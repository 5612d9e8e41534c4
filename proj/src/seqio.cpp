#include "lacsum/seqio.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lacsum {

void write_lacuseq(std::ostream& os, const LacunarySequence& seq) {
    os << "# lacuseq v1 provenance=" << provenance_tag(seq.provenance()) << " q=";
    if (seq.declared_gap_q()) {
        const Rat& q = *seq.declared_gap_q();
        os << q.get_num().get_str();
        if (q.get_den() != 1) os << "/" << q.get_den().get_str();
    } else {
        os << "none";
    }
    os << "\n";
    for (const Int& t : seq.terms()) os << t.get_str() << "\n";
}

LacunarySequence read_lacuseq(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw std::invalid_argument("lacuseq: empty input");
    std::istringstream hs(header);
    std::string hash, magic, version, prov_kv, q_kv;
    hs >> hash >> magic >> version >> prov_kv >> q_kv;
    if (hash != "#" || magic != "lacuseq" || version != "v1")
        throw std::invalid_argument("lacuseq: bad header: " + header);
    if (prov_kv.rfind("provenance=", 0) != 0 || q_kv.rfind("q=", 0) != 0)
        throw std::invalid_argument("lacuseq: bad header fields: " + header);
    Provenance prov = provenance_from_tag(prov_kv.substr(11));
    std::string q_str = q_kv.substr(2);
    std::optional<Rat> q;
    if (q_str != "none") q = rat_from_string(q_str);

    std::vector<Int> terms;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        terms.push_back(int_from_decimal(line));
    }
    return LacunarySequence(std::move(terms), q, prov);
}

void save_lacuseq(const std::string& path, const LacunarySequence& seq) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    write_lacuseq(f, seq);
}

LacunarySequence load_lacuseq(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    return read_lacuseq(f);
}

}  // namespace lacsum
