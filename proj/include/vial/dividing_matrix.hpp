#pragma once

#include <cstdint>
#include <vector>

#include "vial/sba_graph.hpp"

namespace vial {

// Shares controlling how a node's capacity splits across the social,
// behavior-sharing, and attribute-sharing channels. Global mode uses one
// (w_S, w_BS, w_AS) triple for every node; per-node mode scales each share
// with the node's own degree sums (tau * d_{u,S} and so on).
struct Shares {
  enum class Mode { Global, PerNode };
  Mode mode = Mode::Global;
  double w_s = 1.0 / 3.0;
  double w_bs = 1.0 / 3.0;
  double w_as = 1.0 / 3.0;
  double tau = 1.0;

  static Shares equal() { return {}; }
  static Shares global(double w_s, double w_bs, double w_as) {
    return {Mode::Global, w_s, w_bs, w_as, 1.0};
  }
  static Shares per_node(double tau) { return {Mode::PerNode, 0.0, 0.0, 0.0, tau}; }
};

using VoteVector = std::vector<double>;

// Row-major dense matrix over social nodes, oracle-scale only.
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<double> a;

  explicit DenseMatrix(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return a[r * n + c]; }
  double at(std::size_t r, std::size_t c) const { return a[r * n + c]; }
};

// Factored form of the dividing matrix M. Stores only per-node channel
// coefficients; one transpose application walks each link class twice, so a
// sweep is O(m) regardless of how dense the hop-2 structure would be.
class TransitionOperator {
 public:
  TransitionOperator(const SbaNetwork& network, const Shares& shares);

  const SbaNetwork& network() const { return *net_; }
  const Shares& shares() const { return shares_; }
  std::size_t size() const { return coef_social_.size(); }

  // coef_*[u] = (channel share of u) / w_T(u); zero when the channel is empty.
  double coef_social(std::uint32_t u) const { return coef_social_[u]; }
  double coef_behavior(std::uint32_t u) const { return coef_behavior_[u]; }
  double coef_attribute(std::uint32_t u) const { return coef_attribute_[u]; }
  bool self_loop(std::uint32_t u) const { return self_loop_[u] != 0; }

  // out = M^T s. Scratch buffers sized n_behavior / n_attribute; callers that
  // iterate (phase1) reuse them across sweeps. Thread safety: concurrent calls
  // are fine as long as each caller owns its vectors and scratch.
  void apply_transpose_into(const VoteVector& s, VoteVector& out,
                            std::vector<double>& behavior_scratch,
                            std::vector<double>& attribute_scratch) const;
  VoteVector apply_transpose(const VoteVector& s) const;

 private:
  const SbaNetwork* net_;
  Shares shares_;
  std::vector<double> coef_social_, coef_behavior_, coef_attribute_;
  std::vector<char> self_loop_;
};

TransitionOperator build_transition_operator(const SbaNetwork& network, const Shares& shares);

// Explicit M for oracle-scale verification; SizeError above the cap.
DenseMatrix materialize_dense(const SbaNetwork& network, const Shares& shares,
                              std::size_t cap = 2000);

}  // namespace vial
