#include "vial/baselines.hpp"

#include <cmath>

#include "vial/errors.hpp"

namespace vial {

namespace {

std::uint32_t check_social(const SbaNetwork& net, NodeRef target) {
  if (target.kind != NodeKind::Social)
    throw KindError(std::string("baseline target must be a social node, got ") + to_string(target.kind));
  if (target.index >= net.n_social())
    throw LookupError("social index " + std::to_string(target.index) + " out of range");
  return target.index;
}

}  // namespace

std::vector<double> random_baseline(const SbaNetwork& network, std::size_t n_test_excluded) {
  if (n_test_excluded > network.n_social())
    throw ValidationError("excluded user count exceeds the social node count");
  const std::size_t pool = network.n_social() - n_test_excluded;
  std::vector<double> scores(network.n_attribute(), 0.0);
  if (pool == 0) return scores;
  for (std::uint32_t a = 0; a < network.n_attribute(); ++a)
    scores[a] = static_cast<double>(network.a2s.row_size(a)) / static_cast<double>(pool);
  return scores;
}

std::vector<double> cn_san(const SbaNetwork& network, NodeRef target) {
  const std::uint32_t v = check_social(network, target);
  std::vector<char> is_friend(network.n_social(), 0);
  for (std::size_t i = network.social_adj.row_begin(v); i < network.social_adj.row_end(v); ++i)
    is_friend[network.social_adj.nbr[i]] = 1;

  std::vector<double> scores(network.n_attribute(), 0.0);
  for (std::uint32_t a = 0; a < network.n_attribute(); ++a) {
    std::size_t common = 0;
    for (std::size_t i = network.a2s.row_begin(a); i < network.a2s.row_end(a); ++i)
      common += is_friend[network.a2s.nbr[i]];
    scores[a] = static_cast<double>(common);
  }
  return scores;
}

std::vector<double> aa_san(const SbaNetwork& network, NodeRef target) {
  const std::uint32_t v = check_social(network, target);
  std::vector<char> is_friend(network.n_social(), 0);
  for (std::size_t i = network.social_adj.row_begin(v); i < network.social_adj.row_end(v); ++i)
    is_friend[network.social_adj.nbr[i]] = 1;

  std::vector<double> scores(network.n_attribute(), 0.0);
  for (std::uint32_t a = 0; a < network.n_attribute(); ++a) {
    double sum = 0.0;
    for (std::size_t i = network.a2s.row_begin(a); i < network.a2s.row_end(a); ++i) {
      const std::uint32_t u = network.a2s.nbr[i];
      if (!is_friend[u]) continue;
      const std::size_t nbrs = network.social_adj.row_size(u) + network.s2b.row_size(u) +
                               network.s2a.row_size(u);
      if (nbrs <= 1) continue;
      sum += 1.0 / std::log(static_cast<double>(nbrs));
    }
    scores[a] = sum;
  }
  return scores;
}

std::vector<double> rwwr_san(const SbaNetwork& network, NodeRef target, const RwwrParams& params) {
  if (!(params.restart >= 0.0 && params.restart <= 1.0))
    throw ValidationError("restart probability must lie in [0, 1]");
  if (!(params.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (params.max_iters < 1) throw ValidationError("max_iters must be at least 1");
  const std::uint32_t v = check_social(network, target);

  const std::size_t ns = network.n_social();
  const std::size_t na = network.n_attribute();
  const std::size_t n = ns + na;
  const double r = params.restart;

  std::vector<double> x(n, 0.0), next(n, 0.0);
  x[v] = 1.0;
  for (std::size_t iter = 0; iter < params.max_iters; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    double dangling = 0.0;
    for (std::uint32_t u = 0; u < ns; ++u) {
      const double m = x[u];
      if (m == 0.0) continue;
      const double strength = network.deg_social[u] + network.deg_attribute[u];
      if (strength <= 0.0) {
        dangling += m;
        continue;
      }
      const double scale = m / strength;
      for (std::size_t i = network.social_adj.row_begin(u); i < network.social_adj.row_end(u); ++i)
        next[network.social_adj.nbr[i]] += scale * network.social_adj.wgt[i];
      for (std::size_t i = network.s2a.row_begin(u); i < network.s2a.row_end(u); ++i)
        next[ns + network.s2a.nbr[i]] += scale * network.s2a.wgt[i];
    }
    for (std::uint32_t a = 0; a < na; ++a) {
      const double m = x[ns + a];
      if (m == 0.0) continue;
      const double strength = network.deg_attribute_social[a];
      if (strength <= 0.0) {
        dangling += m;
        continue;
      }
      const double scale = m / strength;
      for (std::size_t i = network.a2s.row_begin(a); i < network.a2s.row_end(a); ++i)
        next[network.a2s.nbr[i]] += scale * network.a2s.wgt[i];
    }
    next[v] += dangling;
    for (double& e : next) e *= 1.0 - r;
    next[v] += r;

    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - x[i]);
    x.swap(next);
    if (change <= params.epsilon) break;
  }

  return std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(ns), x.end());
}

SbaNetwork strip_social_links(const SbaNetwork& network) {
  SbaNetwork out = network;
  out.social_adj.offsets.assign(network.n_social() + 1, 0);
  out.social_adj.nbr.clear();
  out.social_adj.wgt.clear();
  for (std::uint32_t u = 0; u < network.n_social(); ++u) {
    out.deg_social[u] = 0.0;
    out.deg_total[u] = out.deg_behavior[u] + out.deg_attribute[u];
  }
  return out;
}

AttackResult vial_b(const SbaNetwork& network, NodeRef target, const VialParams& params,
                    const Shares& shares, std::size_t k) {
  const SbaNetwork stripped = strip_social_links(network);
  const TransitionOperator op(stripped, shares);
  return attack(stripped, op, target, params, k);
}

}  // namespace vial
