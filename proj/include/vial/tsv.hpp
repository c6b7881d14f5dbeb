#pragma once

#include <string>
#include <vector>

#include "vial/sba_graph.hpp"

namespace vial {

// Tab-separated edge file: "id \t id [\t weight]". '#' lines and blank lines
// are skipped; a missing weight column defaults to 1.0. Parse failures raise
// ParseError naming the file and line.
std::vector<Edge> read_edges_tsv(const std::string& path);

// "attr_value \t attr_type" pairs.
std::vector<VocabEntry> read_vocab_tsv(const std::string& path);

struct TsvPaths {
  std::string social;
  std::string behavior;
  std::string attribute;
  std::string vocab;
};

SbaNetwork load_network_from_tsv(const TsvPaths& paths);

}  // namespace vial
