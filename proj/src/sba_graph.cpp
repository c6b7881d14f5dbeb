#include "vial/sba_graph.hpp"

#include <algorithm>
#include <utility>

namespace vial {

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Social: return "social";
    case NodeKind::Behavior: return "behavior";
    case NodeKind::Attribute: return "attribute";
  }
  return "?";
}

AttributeVocabulary AttributeVocabulary::from_pairs(const std::vector<VocabEntry>& pairs) {
  AttributeVocabulary v;
  for (const auto& [value, type] : pairs) {
    if (value.empty() || type.empty())
      throw ValidationError("vocabulary entries need a non-empty value and type");
    if (v.value_index_.count(value))
      throw VocabularyError("duplicate attribute value in vocabulary: " + value);
    auto [it, fresh] = v.type_index_.try_emplace(type, static_cast<std::uint32_t>(v.type_names_.size()));
    if (fresh) {
      v.type_names_.push_back(type);
      v.values_by_type_.emplace_back();
    }
    const auto value_idx = static_cast<std::uint32_t>(v.value_names_.size());
    v.value_index_.emplace(value, value_idx);
    v.value_names_.push_back(value);
    v.value_type_.push_back(it->second);
    v.values_by_type_[it->second].push_back(value_idx);
  }
  return v;
}

std::optional<std::uint32_t> AttributeVocabulary::value_index(std::string_view name) const {
  auto it = value_index_.find(std::string(name));
  return it == value_index_.end() ? std::nullopt : std::optional(it->second);
}

std::optional<std::uint32_t> AttributeVocabulary::type_index(std::string_view name) const {
  auto it = type_index_.find(std::string(name));
  return it == type_index_.end() ? std::nullopt : std::optional(it->second);
}

std::optional<std::uint32_t> SbaNetwork::social_index(std::string_view id) const {
  auto it = social_index_by_id.find(std::string(id));
  return it == social_index_by_id.end() ? std::nullopt : std::optional(it->second);
}

const std::string& SbaNetwork::node_id(NodeRef ref) const {
  switch (ref.kind) {
    case NodeKind::Social: return social_ids.at(ref.index);
    case NodeKind::Behavior: return behavior_ids.at(ref.index);
    case NodeKind::Attribute: return vocab.value_name(ref.index);
  }
  throw KindError("bad node kind");
}

namespace {

struct IndexedEdge {
  std::uint32_t a, b;
  double w;
};

std::uint32_t intern(std::unordered_map<std::string, std::uint32_t>& index,
                     std::vector<std::string>& names, const std::string& id) {
  auto [it, fresh] = index.try_emplace(id, static_cast<std::uint32_t>(names.size()));
  if (fresh) names.push_back(id);
  return it->second;
}

void check_edge(const Edge& e, const char* what) {
  if (e.a.empty() || e.b.empty())
    throw ValidationError(std::string(what) + " edge with empty endpoint id");
  if (!(e.weight > 0.0))
    throw ValidationError(std::string(what) + " edge (" + e.a + ", " + e.b +
                          ") has non-positive weight");
}

// Collapses duplicate (a,b) pairs by summing weights. Input is modified.
void dedup_sum(std::vector<IndexedEdge>& edges) {
  std::sort(edges.begin(), edges.end(), [](const IndexedEdge& x, const IndexedEdge& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  std::size_t out = 0;
  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i + 1;
    double w = edges[i].w;
    while (j < edges.size() && edges[j].a == edges[i].a && edges[j].b == edges[i].b)
      w += edges[j++].w;
    edges[out] = {edges[i].a, edges[i].b, w};
    ++out;
    i = j;
  }
  edges.resize(out);
}

Adjacency csr_from_edges(std::size_t rows, const std::vector<IndexedEdge>& edges) {
  Adjacency adj;
  adj.offsets.assign(rows + 1, 0);
  for (const auto& e : edges) adj.offsets[e.a + 1]++;
  for (std::size_t i = 1; i <= rows; ++i) adj.offsets[i] += adj.offsets[i - 1];
  adj.nbr.resize(edges.size());
  adj.wgt.resize(edges.size());
  std::vector<std::size_t> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
  for (const auto& e : edges) {
    std::size_t slot = cursor[e.a]++;
    adj.nbr[slot] = e.b;
    adj.wgt[slot] = e.w;
  }
  return adj;
}

std::vector<IndexedEdge> reversed(const std::vector<IndexedEdge>& edges) {
  std::vector<IndexedEdge> rev;
  rev.reserve(edges.size());
  for (const auto& e : edges) rev.push_back({e.b, e.a, e.w});
  return rev;
}

std::vector<double> row_sums(const Adjacency& adj) {
  std::vector<double> sums(adj.rows(), 0.0);
  for (std::uint32_t u = 0; u < adj.rows(); ++u)
    for (std::size_t i = adj.row_begin(u); i < adj.row_end(u); ++i)
      sums[u] += adj.wgt[i];
  return sums;
}

void finalize_degrees(SbaNetwork& net) {
  net.deg_social = row_sums(net.social_adj);
  net.deg_behavior = row_sums(net.s2b);
  net.deg_attribute = row_sums(net.s2a);
  net.deg_behavior_social = row_sums(net.b2s);
  net.deg_attribute_social = row_sums(net.a2s);
  net.deg_total.resize(net.n_social());
  for (std::size_t u = 0; u < net.n_social(); ++u)
    net.deg_total[u] = net.deg_social[u] + net.deg_behavior[u] + net.deg_attribute[u];
}

}  // namespace

SbaNetwork build_network(const std::vector<Edge>& social_edges,
                         const std::vector<Edge>& behavior_edges,
                         const std::vector<Edge>& attribute_edges,
                         const std::vector<VocabEntry>& vocab) {
  SbaNetwork net;
  net.vocab = AttributeVocabulary::from_pairs(vocab);

  // Intern social ids in first-seen order across the three edge lists.
  std::vector<IndexedEdge> social, behavior, attribute;
  social.reserve(social_edges.size());
  for (const auto& e : social_edges) {
    check_edge(e, "social");
    std::uint32_t u = intern(net.social_index_by_id, net.social_ids, e.a);
    std::uint32_t v = intern(net.social_index_by_id, net.social_ids, e.b);
    if (u == v)
      throw ValidationError("social self-loop on id '" + e.a + "' is not allowed");
    // Canonical (min,max) so (u,v) and (v,u) collapse together.
    social.push_back({std::min(u, v), std::max(u, v), e.weight});
  }
  behavior.reserve(behavior_edges.size());
  for (const auto& e : behavior_edges) {
    check_edge(e, "behavior");
    std::uint32_t u = intern(net.social_index_by_id, net.social_ids, e.a);
    std::uint32_t y = intern(net.behavior_index_by_id, net.behavior_ids, e.b);
    behavior.push_back({u, y, e.weight});
  }
  attribute.reserve(attribute_edges.size());
  for (const auto& e : attribute_edges) {
    check_edge(e, "attribute");
    std::uint32_t u = intern(net.social_index_by_id, net.social_ids, e.a);
    auto a = net.vocab.value_index(e.b);
    if (!a)
      throw VocabularyError("attribute edge references value '" + e.b +
                            "' absent from vocabulary");
    attribute.push_back({u, *a, e.weight});
  }

  dedup_sum(social);
  dedup_sum(behavior);
  dedup_sum(attribute);

  const std::size_t ns = net.social_ids.size();
  std::vector<IndexedEdge> social_both;
  social_both.reserve(2 * social.size());
  for (const auto& e : social) {
    social_both.push_back(e);
    social_both.push_back({e.b, e.a, e.w});
  }
  net.social_adj = csr_from_edges(ns, social_both);
  net.s2b = csr_from_edges(ns, behavior);
  net.b2s = csr_from_edges(net.behavior_ids.size(), reversed(behavior));
  net.s2a = csr_from_edges(ns, attribute);
  net.a2s = csr_from_edges(net.vocab.value_count(), reversed(attribute));
  finalize_degrees(net);
  return net;
}

std::pair<SbaNetwork, GroundTruth> remove_attribute_links(const SbaNetwork& network,
                                                          const std::vector<NodeRef>& users) {
  std::vector<char> strip(network.n_social(), 0);
  for (const auto& u : users) {
    if (u.kind != NodeKind::Social)
      throw KindError("remove_attribute_links expects social nodes, got " +
                      std::string(to_string(u.kind)));
    if (u.index >= network.n_social())
      throw LookupError("social index out of range: " + std::to_string(u.index));
    strip[u.index] = 1;
  }

  GroundTruth truth;
  SbaNetwork out = network;
  std::vector<IndexedEdge> kept;
  kept.reserve(network.s2a.entries());
  for (std::uint32_t u = 0; u < network.n_social(); ++u) {
    for (std::size_t i = network.s2a.row_begin(u); i < network.s2a.row_end(u); ++i) {
      if (strip[u])
        truth[u].push_back(network.s2a.nbr[i]);
      else
        kept.push_back({u, network.s2a.nbr[i], network.s2a.wgt[i]});
    }
    if (strip[u] && !truth.count(u)) truth[u];  // user with no attribute links
  }
  for (auto& [u, values] : truth) std::sort(values.begin(), values.end());

  out.s2a = csr_from_edges(network.n_social(), kept);
  std::vector<IndexedEdge> rev = reversed(kept);
  std::sort(rev.begin(), rev.end(), [](const IndexedEdge& x, const IndexedEdge& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  out.a2s = csr_from_edges(network.vocab.value_count(), rev);
  finalize_degrees(out);
  return {std::move(out), std::move(truth)};
}

std::vector<NodeRef> hop2_neighbors(const SbaNetwork& network, NodeRef u, NodeKind via) {
  if (u.kind != NodeKind::Social)
    throw KindError("hop2_neighbors expects a social node, got " +
                    std::string(to_string(u.kind)));
  if (u.index >= network.n_social())
    throw LookupError("social index out of range: " + std::to_string(u.index));
  const Adjacency* fwd = nullptr;
  const Adjacency* back = nullptr;
  switch (via) {
    case NodeKind::Behavior: fwd = &network.s2b; back = &network.b2s; break;
    case NodeKind::Attribute: fwd = &network.s2a; back = &network.a2s; break;
    default: throw KindError("hop2_neighbors via must be behavior or attribute");
  }

  std::vector<std::uint32_t> found;
  for (std::size_t i = fwd->row_begin(u.index); i < fwd->row_end(u.index); ++i) {
    std::uint32_t mid = fwd->nbr[i];
    for (std::size_t j = back->row_begin(mid); j < back->row_end(mid); ++j)
      found.push_back(back->nbr[j]);
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());

  std::vector<NodeRef> result;
  result.reserve(found.size());
  for (auto idx : found) result.push_back({NodeKind::Social, idx});
  return result;
}

}  // namespace vial
