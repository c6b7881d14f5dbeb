#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vial/dividing_matrix.hpp"
#include "vial/sba_graph.hpp"

namespace vial {

struct VialParams {
  double alpha = 0.1;
  double epsilon = 1e-6;
  std::size_t max_iters = 0;  // 0 derives floor(log2 |V_s|), never below 1
};

// floor(log2 n_social), at least 1.
std::size_t default_max_iters(std::size_t n_social);
std::size_t resolve_max_iters(const VialParams& params, std::size_t n_social);

struct Phase1Result {
  VoteVector votes;  // per social node, sums to |V_s|
  std::size_t iterations_used = 0;
  double final_error = 0.0;  // L1 change per capita at the last sweep
};

// Capacity propagation: start with |V_s| at the target, repeat
// s <- alpha*e_v + (1-alpha)*M^T s until the per-capita L1 change drops
// to epsilon or the iteration cap is hit.
Phase1Result phase1(const TransitionOperator& op, NodeRef target, const VialParams& params);

// t_a = sum over attribute-holding users of s_u * w_ua / d_{u,A}.
std::vector<double> phase2(const SbaNetwork& network, const VoteVector& s);

struct RankedValue {
  std::uint32_t value = 0;  // attribute value index
  double score = 0.0;
};

// Ranking of one attribute type's values plus the tie structure at the
// top-K cutoff: ranking[0..full_count) are fully inside the top K,
// ranking[tie_begin..tie_end) are tied across the cutoff and share
// `slots` remaining prediction slots.
struct TopKSelection {
  std::vector<RankedValue> ranking;  // score descending, value index ascending
  std::size_t k = 0;
  std::size_t full_count = 0;
  std::size_t tie_begin = 0;
  std::size_t tie_end = 0;  // tie_begin == tie_end when no group straddles
  std::size_t slots = 0;

  std::vector<RankedValue> topk() const;  // first min(k, size) entries
};

TopKSelection predict_topk(const std::vector<double>& votes, const AttributeVocabulary& vocab,
                           const std::string& attr_type, std::size_t k);
TopKSelection predict_topk_type(const std::vector<double>& votes, const AttributeVocabulary& vocab,
                                std::uint32_t type_index, std::size_t k);

// Difference of the two cluster means under the optimal 1-D 2-means split
// (exhaustive boundary scan over the sorted votes; ties pick the smallest
// high cluster).
double clusterness(const std::vector<double>& votes);

// Top vote minus second vote.
double gap_statistic(const std::vector<double>& votes);

struct TypeOutcome {
  std::uint32_t type = 0;
  TopKSelection topk;
  bool confidence_defined = false;  // needs >= 2 candidate values
  double clusterness = 0.0;
  double gap = 0.0;
};

struct AttackResult {
  std::vector<double> votes;  // per attribute value
  std::vector<TypeOutcome> types;
  std::size_t iterations_used = 0;
  double final_error = 0.0;
};

// phase1 -> phase2 -> per-type ranking and confidence. `op` must have been
// built over `network`.
AttackResult attack(const SbaNetwork& network, const TransitionOperator& op, NodeRef target,
                    const VialParams& params, std::size_t k);

}  // namespace vial
