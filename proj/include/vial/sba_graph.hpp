#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vial/errors.hpp"

namespace vial {

enum class NodeKind : std::uint8_t { Social, Behavior, Attribute };

const char* to_string(NodeKind k);

struct NodeRef {
  NodeKind kind;
  std::uint32_t index;

  friend bool operator==(const NodeRef&, const NodeRef&) = default;
  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

// Edge in external-id space, as read from input files.
struct Edge {
  std::string a;
  std::string b;
  double weight = 1.0;
};

struct VocabEntry {
  std::string value;
  std::string type;
};

// Attribute values grouped into attribute types (major, employer, city, ...).
// Value index doubles as the attribute node index in the network.
class AttributeVocabulary {
 public:
  AttributeVocabulary() = default;
  static AttributeVocabulary from_pairs(const std::vector<VocabEntry>& pairs);

  std::size_t value_count() const { return value_names_.size(); }
  std::size_t type_count() const { return type_names_.size(); }
  const std::string& value_name(std::uint32_t v) const { return value_names_.at(v); }
  const std::string& type_name(std::uint32_t t) const { return type_names_.at(t); }
  std::uint32_t type_of(std::uint32_t value) const { return value_type_.at(value); }
  const std::vector<std::uint32_t>& values_of(std::uint32_t type) const {
    return values_by_type_.at(type);
  }
  std::optional<std::uint32_t> value_index(std::string_view name) const;
  std::optional<std::uint32_t> type_index(std::string_view name) const;

 private:
  std::vector<std::string> value_names_;
  std::vector<std::string> type_names_;
  std::vector<std::uint32_t> value_type_;               // value -> type
  std::vector<std::vector<std::uint32_t>> values_by_type_;
  std::unordered_map<std::string, std::uint32_t> value_index_;
  std::unordered_map<std::string, std::uint32_t> type_index_;
};

// Weighted CSR adjacency. For the symmetric social graph every undirected
// link is stored in both rows; bipartite classes keep one CSR per direction.
struct Adjacency {
  std::vector<std::size_t> offsets;     // rows + 1
  std::vector<std::uint32_t> nbr;
  std::vector<double> wgt;

  std::size_t rows() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t entries() const { return nbr.size(); }
  std::size_t row_begin(std::uint32_t u) const { return offsets[u]; }
  std::size_t row_end(std::uint32_t u) const { return offsets[u + 1]; }
  std::size_t row_size(std::uint32_t u) const { return offsets[u + 1] - offsets[u]; }
};

// Immutable social-behavior-attribute network. Built once by build_network;
// all later phases only read it, so unsynchronized concurrent reads are safe.
struct SbaNetwork {
  AttributeVocabulary vocab;

  std::vector<std::string> social_ids;
  std::vector<std::string> behavior_ids;
  std::unordered_map<std::string, std::uint32_t> social_index_by_id;
  std::unordered_map<std::string, std::uint32_t> behavior_index_by_id;

  Adjacency social_adj;   // social x social, symmetric
  Adjacency s2b, b2s;     // behavior links, both directions
  Adjacency s2a, a2s;     // attribute links, both directions

  // Degree sums (sum of link weights). Index layout matches node indices.
  std::vector<double> deg_total;       // d_u, per social node
  std::vector<double> deg_social;      // d_{u,S}
  std::vector<double> deg_behavior;    // d_{u,B}
  std::vector<double> deg_attribute;   // d_{u,A}
  std::vector<double> deg_behavior_social;    // d_{y,S}, per behavior node
  std::vector<double> deg_attribute_social;   // d_{a,S}, per attribute node

  std::size_t n_social() const { return social_ids.size(); }
  std::size_t n_behavior() const { return behavior_ids.size(); }
  std::size_t n_attribute() const { return vocab.value_count(); }
  std::size_t n_social_links() const { return social_adj.entries() / 2; }
  std::size_t n_behavior_links() const { return s2b.entries(); }
  std::size_t n_attribute_links() const { return s2a.entries(); }
  std::size_t total_links() const {
    return n_social_links() + n_behavior_links() + n_attribute_links();
  }

  std::optional<std::uint32_t> social_index(std::string_view id) const;
  const std::string& node_id(NodeRef ref) const;
};

SbaNetwork build_network(const std::vector<Edge>& social_edges,
                         const std::vector<Edge>& behavior_edges,
                         const std::vector<Edge>& attribute_edges,
                         const std::vector<VocabEntry>& vocab);

// Strips all attribute links of the given users and returns the reduced
// network together with the removed links' attribute endpoints per user.
using GroundTruth = std::map<std::uint32_t, std::vector<std::uint32_t>>;
std::pair<SbaNetwork, GroundTruth> remove_attribute_links(const SbaNetwork& network,
                                                          const std::vector<NodeRef>& users);

// Social nodes sharing at least one common behavior (or attribute) neighbor
// with u; includes u itself whenever u has such a neighbor. Sorted by index.
std::vector<NodeRef> hop2_neighbors(const SbaNetwork& network, NodeRef u, NodeKind via);

}  // namespace vial
