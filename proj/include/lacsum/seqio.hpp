#pragma once

#include <iosfwd>
#include <string>

#include "lacsum/sequence.hpp"

namespace lacsum {

// "lacuseq v1": header line `# lacuseq v1 provenance=<tag> q=<rational|none>`,
// then one decimal integer per line. Round-trips bit-exactly.
void write_lacuseq(std::ostream& os, const LacunarySequence& seq);
LacunarySequence read_lacuseq(std::istream& is);

void save_lacuseq(const std::string& path, const LacunarySequence& seq);
LacunarySequence load_lacuseq(const std::string& path);

}  // namespace lacsum
