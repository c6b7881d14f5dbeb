#include "vial/theory_oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "vial/errors.hpp"
#include "vial/fixtures.hpp"
#include "vial/rng.hpp"
#include "vial/vial_engine.hpp"

namespace vial::oracle {

namespace {

std::uint32_t check_social(const SbaNetwork& net, NodeRef target) {
  if (target.kind != NodeKind::Social)
    throw KindError(std::string("oracle target must be a social node, got ") + to_string(target.kind));
  if (target.index >= net.n_social())
    throw LookupError("social index " + std::to_string(target.index) + " out of range");
  return target.index;
}

// Dense dividing matrix assembled straight from the definition, with
// degree sums recomputed here so no propagation code is shared with the
// sweep path being verified.
Eigen::MatrixXd dense_walk_matrix(const SbaNetwork& net, const Shares& shares, std::size_t cap) {
  const std::size_t n = net.n_social();
  if (n > cap)
    throw SizeError("oracle dense matrix capped at " + std::to_string(cap) +
                    " social nodes, network has " + std::to_string(n));

  std::vector<double> d_s(n, 0.0), d_b(n, 0.0), d_a(n, 0.0);
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::size_t i = net.social_adj.row_begin(u); i < net.social_adj.row_end(u); ++i)
      d_s[u] += net.social_adj.wgt[i];
    for (std::size_t i = net.s2b.row_begin(u); i < net.s2b.row_end(u); ++i)
      d_b[u] += net.s2b.wgt[i];
    for (std::size_t i = net.s2a.row_begin(u); i < net.s2a.row_end(u); ++i)
      d_a[u] += net.s2a.wgt[i];
  }
  std::vector<double> d_ys(net.n_behavior(), 0.0), d_as(net.n_attribute(), 0.0);
  for (std::uint32_t y = 0; y < net.n_behavior(); ++y)
    for (std::size_t j = net.b2s.row_begin(y); j < net.b2s.row_end(y); ++j)
      d_ys[y] += net.b2s.wgt[j];
  for (std::uint32_t a = 0; a < net.n_attribute(); ++a)
    for (std::size_t j = net.a2s.row_begin(a); j < net.a2s.row_end(a); ++j)
      d_as[a] += net.a2s.wgt[j];

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  for (std::uint32_t u = 0; u < n; ++u) {
    double ws, wbs, was;
    if (shares.mode == Shares::Mode::PerNode) {
      ws = shares.tau * d_s[u];
      wbs = shares.tau * d_b[u];
      was = shares.tau * d_a[u];
    } else {
      ws = shares.w_s;
      wbs = shares.w_bs;
      was = shares.w_as;
    }
    const double wt = (d_s[u] > 0.0 ? ws : 0.0) + (d_b[u] > 0.0 ? wbs : 0.0) +
                      (d_a[u] > 0.0 ? was : 0.0);
    if (wt <= 0.0) {
      m(u, u) = 1.0;
      continue;
    }
    if (d_s[u] > 0.0 && ws > 0.0) {
      for (std::size_t i = net.social_adj.row_begin(u); i < net.social_adj.row_end(u); ++i)
        m(u, net.social_adj.nbr[i]) += (ws / wt) * net.social_adj.wgt[i] / d_s[u];
    }
    if (d_b[u] > 0.0 && wbs > 0.0) {
      for (std::size_t i = net.s2b.row_begin(u); i < net.s2b.row_end(u); ++i) {
        const std::uint32_t y = net.s2b.nbr[i];
        for (std::size_t j = net.b2s.row_begin(y); j < net.b2s.row_end(y); ++j)
          m(u, net.b2s.nbr[j]) +=
              (wbs / wt) * (net.s2b.wgt[i] / d_b[u]) * (net.b2s.wgt[j] / d_ys[y]);
      }
    }
    if (d_a[u] > 0.0 && was > 0.0) {
      for (std::size_t i = net.s2a.row_begin(u); i < net.s2a.row_end(u); ++i) {
        const std::uint32_t a = net.s2a.nbr[i];
        for (std::size_t j = net.a2s.row_begin(a); j < net.a2s.row_end(a); ++j)
          m(u, net.a2s.nbr[j]) +=
              (was / wt) * (net.s2a.wgt[i] / d_a[u]) * (net.a2s.wgt[j] / d_as[a]);
      }
    }
  }
  return m;
}

}  // namespace

bool is_connected(const SbaNetwork& network) {
  const std::size_t n = network.n_social();
  if (n == 0) return true;
  std::vector<char> vs(n, 0), vb(network.n_behavior(), 0), va(network.n_attribute(), 0);
  std::vector<std::uint32_t> stack{0};
  vs[0] = 1;
  std::size_t seen = 1;
  while (!stack.empty()) {
    const std::uint32_t u = stack.back();
    stack.pop_back();
    for (std::size_t i = network.social_adj.row_begin(u); i < network.social_adj.row_end(u); ++i) {
      const std::uint32_t x = network.social_adj.nbr[i];
      if (!vs[x]) {
        vs[x] = 1;
        ++seen;
        stack.push_back(x);
      }
    }
    for (std::size_t i = network.s2b.row_begin(u); i < network.s2b.row_end(u); ++i) {
      const std::uint32_t y = network.s2b.nbr[i];
      if (vb[y]) continue;
      vb[y] = 1;
      for (std::size_t j = network.b2s.row_begin(y); j < network.b2s.row_end(y); ++j) {
        const std::uint32_t x = network.b2s.nbr[j];
        if (!vs[x]) {
          vs[x] = 1;
          ++seen;
          stack.push_back(x);
        }
      }
    }
    for (std::size_t i = network.s2a.row_begin(u); i < network.s2a.row_end(u); ++i) {
      const std::uint32_t a = network.s2a.nbr[i];
      if (va[a]) continue;
      va[a] = 1;
      for (std::size_t j = network.a2s.row_begin(a); j < network.a2s.row_end(a); ++j) {
        const std::uint32_t x = network.a2s.nbr[j];
        if (!vs[x]) {
          vs[x] = 1;
          ++seen;
          stack.push_back(x);
        }
      }
    }
  }
  return seen == n;
}

VoteVector closed_form_votes(const SbaNetwork& network, const Shares& shares, NodeRef target,
                             double alpha, std::size_t cap) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ValidationError("closed form requires alpha in (0, 1]");
  const std::uint32_t v = check_social(network, target);
  const auto n = static_cast<Eigen::Index>(network.n_social());

  const Eigen::MatrixXd m = dense_walk_matrix(network, shares, cap);
  const Eigen::MatrixXd a =
      Eigen::MatrixXd::Identity(n, n) - (1.0 - alpha) * m.transpose();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(v) = alpha * static_cast<double>(n);
  const Eigen::VectorXd x = a.partialPivLu().solve(b);
  return VoteVector(x.data(), x.data() + n);
}

std::vector<double> stationary_distribution(const SbaNetwork& network, const Shares& shares,
                                            std::size_t cap) {
  if (!is_connected(network))
    throw ValidationError("stationary distribution requires a connected network");
  const auto n = static_cast<Eigen::Index>(network.n_social());
  if (n == 0) throw ValidationError("network has no social nodes");

  const Eigen::MatrixXd mt = dense_walk_matrix(network, shares, cap).transpose();
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (std::size_t iter = 0; iter < 500000; ++iter) {
    Eigen::VectorXd next = mt * x;
    next /= next.sum();
    const double change = (next - x).lpNorm<Eigen::Infinity>();
    x = next;
    if (change <= 1e-12) return std::vector<double>(x.data(), x.data() + n);
  }
  throw Error("stationary power iteration did not settle; chain may be periodic");
}

OracleReport corollary_check(const SbaNetwork& network, double tau, NodeRef target,
                             double tolerance) {
  if (!is_connected(network))
    throw ValidationError("degree-share check requires a connected network");
  check_social(network, target);
  const std::size_t n = network.n_social();

  TransitionOperator op(network, Shares::per_node(tau));
  VialParams params;
  params.alpha = 0.0;
  params.epsilon = 5e-14;
  params.max_iters = 500000;
  const Phase1Result run = phase1(op, target, params);

  // Independent degree sums for the prediction side.
  std::vector<double> degree(n, 0.0);
  double total = 0.0;
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::size_t i = network.social_adj.row_begin(u); i < network.social_adj.row_end(u); ++i)
      degree[u] += network.social_adj.wgt[i];
    for (std::size_t i = network.s2b.row_begin(u); i < network.s2b.row_end(u); ++i)
      degree[u] += network.s2b.wgt[i];
    for (std::size_t i = network.s2a.row_begin(u); i < network.s2a.row_end(u); ++i)
      degree[u] += network.s2a.wgt[i];
    total += degree[u];
  }

  double worst = 0.0;
  for (std::uint32_t u = 0; u < n; ++u) {
    const double expected = static_cast<double>(n) * degree[u] / total;
    const double scale = std::max(std::abs(expected), 1e-12);
    worst = std::max(worst, std::abs(run.votes[u] - expected) / scale);
  }
  return {"corollary-1", worst, tolerance, worst <= tolerance};
}

eval::PrMetrics brute_force_metrics(const std::vector<double>& scores,
                                    const std::vector<std::uint32_t>& truth, std::size_t k) {
  if (k < 1) throw ValidationError("top-K metrics require K >= 1");
  const std::size_t n = scores.size();
  if (n > 10) throw SizeError("brute-force metrics capped at 10 candidate values");
  std::vector<char> is_truth(n, 0);
  for (std::uint32_t t : truth) {
    if (t >= n) throw ValidationError("truth index " + std::to_string(t) + " out of range");
    is_truth[t] = 1;
  }

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  std::vector<std::vector<std::uint32_t>> groups;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                        order.begin() + static_cast<std::ptrdiff_t>(j));
    i = j;
  }

  unsigned long long total = 0, count = 0;
  for (;;) {
    std::size_t taken = 0;
    unsigned long long hits = 0;
    for (const auto& group : groups) {
      for (std::uint32_t idx : group) {
        if (taken >= k) break;
        hits += is_truth[idx];
        ++taken;
      }
      if (taken >= k) break;
    }
    total += hits;
    ++count;

    std::size_t gi = 0;
    while (gi < groups.size() && !std::next_permutation(groups[gi].begin(), groups[gi].end()))
      ++gi;
    if (gi == groups.size()) break;
  }

  eval::PrMetrics out;
  out.precision = static_cast<double>(total) / static_cast<double>(count * k);
  if (!truth.empty())
    out.recall = static_cast<double>(total) / static_cast<double>(count * truth.size());
  return out;
}

std::vector<OracleReport> run_verification_suite(std::uint64_t seed) {
  std::vector<OracleReport> reports;
  Rng rng(seed);

  {  // Damped fixed point vs direct solve.
    double worst = 0.0;
    for (int f = 0; f < 5; ++f) {
      const std::size_t n = 20 + rng.bounded(181);
      const SbaNetwork net = fixtures::random_connected(rng.next_u64(), n);
      const TransitionOperator op(net, Shares::equal());
      const NodeRef target{NodeKind::Social, static_cast<std::uint32_t>(rng.bounded(n))};
      for (double alpha : {0.05, 0.1, 0.5, 1.0}) {
        VialParams params;
        params.alpha = alpha;
        params.epsilon = 1e-13;
        params.max_iters = 20000;
        const Phase1Result run = phase1(op, target, params);
        const VoteVector exact = closed_form_votes(net, Shares::equal(), target, alpha);
        for (std::size_t u = 0; u < n; ++u)
          worst = std::max(worst, std::abs(run.votes[u] - exact[u]));
      }
    }
    reports.push_back({"theorem-1", worst, 1e-8, worst <= 1e-8});
  }

  {  // Undamped limit vs stationary distribution, plus target independence.
    double worst = 0.0, worst_pair = 0.0;
    for (int f = 0; f < 3; ++f) {
      const std::size_t n = 20 + rng.bounded(81);
      const SbaNetwork net = fixtures::random_connected(rng.next_u64(), n);
      const TransitionOperator op(net, Shares::equal());
      const std::vector<double> pi = stationary_distribution(net, Shares::equal());
      VialParams params;
      params.alpha = 0.0;
      params.epsilon = 5e-14;
      params.max_iters = 500000;
      std::vector<VoteVector> runs;
      for (int t = 0; t < 5; ++t) {
        const NodeRef target{NodeKind::Social, static_cast<std::uint32_t>(rng.bounded(n))};
        runs.push_back(phase1(op, target, params).votes);
        for (std::size_t u = 0; u < n; ++u)
          worst = std::max(worst,
                           std::abs(runs.back()[u] - static_cast<double>(n) * pi[u]));
      }
      for (std::size_t a = 0; a < runs.size(); ++a)
        for (std::size_t b = a + 1; b < runs.size(); ++b)
          for (std::size_t u = 0; u < n; ++u)
            worst_pair = std::max(worst_pair, std::abs(runs[a][u] - runs[b][u]));
    }
    reports.push_back({"theorem-2", worst, 1e-6, worst <= 1e-6});
    reports.push_back({"theorem-2-independence", worst_pair, 1e-6, worst_pair <= 1e-6});
  }

  {  // Degree-share limit under per-node shares.
    double worst = 0.0;
    for (int f = 0; f < 3; ++f) {
      const std::size_t n = 20 + rng.bounded(81);
      const SbaNetwork net = fixtures::random_connected(rng.next_u64(), n);
      const NodeRef target{NodeKind::Social, static_cast<std::uint32_t>(rng.bounded(n))};
      const double tau = f == 0 ? 1.0 : rng.uniform(0.5, 3.0);
      const OracleReport r = corollary_check(net, tau, target);
      worst = std::max(worst, r.max_deviation);
    }
    reports.push_back({"corollary-1", worst, 1e-8, worst <= 1e-8});
  }

  {  // Tie-aware metrics vs exhaustive enumeration; must agree to the bit.
    double worst = 0.0;
    bool shape_ok = true;
    for (int f = 0; f < 50; ++f) {
      const std::size_t n = 2 + rng.bounded(7);
      std::vector<double> scores(n);
      for (double& s : scores) s = 0.5 * static_cast<double>(rng.bounded(4));
      std::vector<std::uint32_t> truth;
      for (std::uint32_t i = 0; i < n; ++i)
        if (rng.unit() < 0.4) truth.push_back(i);
      const std::size_t k = 1 + rng.bounded(n);
      const eval::PrMetrics fast = eval::metrics_topk(scores, truth, k);
      const eval::PrMetrics slow = brute_force_metrics(scores, truth, k);
      worst = std::max(worst, std::abs(fast.precision - slow.precision));
      if (fast.recall.has_value() != slow.recall.has_value())
        shape_ok = false;
      else if (fast.recall)
        worst = std::max(worst, std::abs(*fast.recall - *slow.recall));
    }
    reports.push_back({"metrics-oracle", worst, 0.0, shape_ok && worst <= 0.0});
  }

  return reports;
}

}  // namespace vial::oracle
