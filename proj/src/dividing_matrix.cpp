#include "vial/dividing_matrix.hpp"

#include <algorithm>

namespace vial {

namespace {

void check_shares(const Shares& shares) {
  if (shares.mode == Shares::Mode::PerNode) {
    if (!(shares.tau > 0.0)) throw ValidationError("per-node shares require tau > 0");
    return;
  }
  if (shares.w_s < 0.0 || shares.w_bs < 0.0 || shares.w_as < 0.0)
    throw ValidationError("shares must be non-negative");
  if (!(shares.w_s > 0.0 || shares.w_bs > 0.0 || shares.w_as > 0.0))
    throw ValidationError("at least one share must be positive");
}

}  // namespace

TransitionOperator::TransitionOperator(const SbaNetwork& network, const Shares& shares)
    : net_(&network), shares_(shares) {
  check_shares(shares);
  const std::size_t n = network.n_social();
  coef_social_.assign(n, 0.0);
  coef_behavior_.assign(n, 0.0);
  coef_attribute_.assign(n, 0.0);
  self_loop_.assign(n, 0);

  for (std::uint32_t u = 0; u < n; ++u) {
    // I_{u,S}, I_{u,BS}, I_{u,AS}: a hop-2 neighbor set is non-empty exactly
    // when the corresponding link class at u is (every behavior/attribute
    // neighbor of u links back to u, making u its own hop-2 neighbor).
    const bool has_s = network.deg_social[u] > 0.0;
    const bool has_b = network.deg_behavior[u] > 0.0;
    const bool has_a = network.deg_attribute[u] > 0.0;
    double ws, wbs, was;
    if (shares.mode == Shares::Mode::PerNode) {
      ws = shares.tau * network.deg_social[u];
      wbs = shares.tau * network.deg_behavior[u];
      was = shares.tau * network.deg_attribute[u];
    } else {
      ws = shares.w_s;
      wbs = shares.w_bs;
      was = shares.w_as;
    }
    const double w_t = (has_s ? ws : 0.0) + (has_b ? wbs : 0.0) + (has_a ? was : 0.0);
    if (w_t <= 0.0) {
      self_loop_[u] = 1;  // isolated node keeps its capacity
      continue;
    }
    if (has_s) coef_social_[u] = ws / w_t;
    if (has_b) coef_behavior_[u] = wbs / w_t;
    if (has_a) coef_attribute_[u] = was / w_t;
  }
}

void TransitionOperator::apply_transpose_into(const VoteVector& s, VoteVector& out,
                                              std::vector<double>& behavior_scratch,
                                              std::vector<double>& attribute_scratch) const {
  const SbaNetwork& net = *net_;
  const std::size_t n = net.n_social();
  if (s.size() != n)
    throw ValidationError("vote vector has " + std::to_string(s.size()) +
                          " entries, network has " + std::to_string(n) + " social nodes");
  out.assign(n, 0.0);
  behavior_scratch.assign(net.n_behavior(), 0.0);
  attribute_scratch.assign(net.n_attribute(), 0.0);

  for (std::uint32_t u = 0; u < n; ++u) {
    const double su = s[u];
    if (su == 0.0) {
      continue;
    }
    if (self_loop_[u]) {
      out[u] += su;
      continue;
    }
    if (const double cs = coef_social_[u]; cs > 0.0) {
      const double scale = su * cs / net.deg_social[u];
      for (std::size_t i = net.social_adj.row_begin(u); i < net.social_adj.row_end(u); ++i)
        out[net.social_adj.nbr[i]] += scale * net.social_adj.wgt[i];
    }
    if (const double cb = coef_behavior_[u]; cb > 0.0) {
      const double scale = su * cb / net.deg_behavior[u];
      for (std::size_t i = net.s2b.row_begin(u); i < net.s2b.row_end(u); ++i)
        behavior_scratch[net.s2b.nbr[i]] += scale * net.s2b.wgt[i];
    }
    if (const double ca = coef_attribute_[u]; ca > 0.0) {
      const double scale = su * ca / net.deg_attribute[u];
      for (std::size_t i = net.s2a.row_begin(u); i < net.s2a.row_end(u); ++i)
        attribute_scratch[net.s2a.nbr[i]] += scale * net.s2a.wgt[i];
    }
  }
  for (std::uint32_t y = 0; y < net.n_behavior(); ++y) {
    const double mass = behavior_scratch[y];
    if (mass == 0.0 || net.deg_behavior_social[y] <= 0.0) continue;
    const double scale = mass / net.deg_behavior_social[y];
    for (std::size_t i = net.b2s.row_begin(y); i < net.b2s.row_end(y); ++i)
      out[net.b2s.nbr[i]] += scale * net.b2s.wgt[i];
  }
  for (std::uint32_t a = 0; a < net.n_attribute(); ++a) {
    const double mass = attribute_scratch[a];
    if (mass == 0.0 || net.deg_attribute_social[a] <= 0.0) continue;
    const double scale = mass / net.deg_attribute_social[a];
    for (std::size_t i = net.a2s.row_begin(a); i < net.a2s.row_end(a); ++i)
      out[net.a2s.nbr[i]] += scale * net.a2s.wgt[i];
  }
}

VoteVector TransitionOperator::apply_transpose(const VoteVector& s) const {
  VoteVector out;
  std::vector<double> bscratch, ascratch;
  apply_transpose_into(s, out, bscratch, ascratch);
  return out;
}

TransitionOperator build_transition_operator(const SbaNetwork& network, const Shares& shares) {
  return TransitionOperator(network, shares);
}

DenseMatrix materialize_dense(const SbaNetwork& network, const Shares& shares, std::size_t cap) {
  const std::size_t n = network.n_social();
  if (n > cap)
    throw SizeError("dense dividing matrix capped at " + std::to_string(cap) +
                    " social nodes, network has " + std::to_string(n));
  TransitionOperator op(network, shares);
  DenseMatrix m(n);
  for (std::uint32_t u = 0; u < n; ++u) {
    if (op.self_loop(u)) {
      m.at(u, u) = 1.0;
      continue;
    }
    if (const double cs = op.coef_social(u); cs > 0.0) {
      for (std::size_t i = network.social_adj.row_begin(u); i < network.social_adj.row_end(u); ++i)
        m.at(u, network.social_adj.nbr[i]) +=
            cs * network.social_adj.wgt[i] / network.deg_social[u];
    }
    if (const double cb = op.coef_behavior(u); cb > 0.0) {
      for (std::size_t i = network.s2b.row_begin(u); i < network.s2b.row_end(u); ++i) {
        const std::uint32_t y = network.s2b.nbr[i];
        const double via = cb * network.s2b.wgt[i] / network.deg_behavior[u];
        for (std::size_t j = network.b2s.row_begin(y); j < network.b2s.row_end(y); ++j)
          m.at(u, network.b2s.nbr[j]) +=
              via * network.b2s.wgt[j] / network.deg_behavior_social[y];
      }
    }
    if (const double ca = op.coef_attribute(u); ca > 0.0) {
      for (std::size_t i = network.s2a.row_begin(u); i < network.s2a.row_end(u); ++i) {
        const std::uint32_t a = network.s2a.nbr[i];
        const double via = ca * network.s2a.wgt[i] / network.deg_attribute[u];
        for (std::size_t j = network.a2s.row_begin(a); j < network.a2s.row_end(a); ++j)
          m.at(u, network.a2s.nbr[j]) +=
              via * network.a2s.wgt[j] / network.deg_attribute_social[a];
      }
    }
  }
  return m;
}

}  // namespace vial
