#include "vial/tsv.hpp"

#include <cstdlib>
#include <fstream>

namespace vial {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  // Tolerate trailing \r from CRLF files.
  if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
    fields.back().pop_back();
  return fields;
}

bool skippable(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;  // blank
}

double parse_weight(const std::string& text, const std::string& path, std::size_t lineno) {
  char* end = nullptr;
  double w = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw ParseError(path + ":" + std::to_string(lineno) + ": bad weight '" + text + "'");
  return w;
}

template <typename Fn>
void for_each_row(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    fn(split_tabs(line), lineno);
  }
}

}  // namespace

std::vector<Edge> read_edges_tsv(const std::string& path) {
  std::vector<Edge> edges;
  for_each_row(path, [&](const std::vector<std::string>& f, std::size_t lineno) {
    if (f.size() < 2 || f.size() > 3 || f[0].empty() || f[1].empty())
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected 'id\\tid[\\tweight]'");
    double w = f.size() == 3 ? parse_weight(f[2], path, lineno) : 1.0;
    edges.push_back({f[0], f[1], w});
  });
  return edges;
}

std::vector<VocabEntry> read_vocab_tsv(const std::string& path) {
  std::vector<VocabEntry> vocab;
  for_each_row(path, [&](const std::vector<std::string>& f, std::size_t lineno) {
    if (f.size() != 2 || f[0].empty() || f[1].empty())
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected 'attr_value\\tattr_type'");
    vocab.push_back({f[0], f[1]});
  });
  return vocab;
}

SbaNetwork load_network_from_tsv(const TsvPaths& paths) {
  return build_network(read_edges_tsv(paths.social), read_edges_tsv(paths.behavior),
                       read_edges_tsv(paths.attribute), read_vocab_tsv(paths.vocab));
}

}  // namespace vial
