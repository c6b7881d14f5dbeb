#include "vial/vial_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vial/errors.hpp"

namespace vial {

std::size_t default_max_iters(std::size_t n_social) {
  std::size_t d = 0;
  for (std::size_t n = n_social; n > 1; n >>= 1) ++d;
  return d < 1 ? 1 : d;
}

std::size_t resolve_max_iters(const VialParams& params, std::size_t n_social) {
  return params.max_iters > 0 ? params.max_iters : default_max_iters(n_social);
}

namespace {

void check_params(const VialParams& params) {
  if (!(params.alpha >= 0.0 && params.alpha <= 1.0))
    throw ValidationError("alpha must lie in [0, 1]");
  if (!(params.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
}

std::uint32_t check_social_target(const SbaNetwork& net, NodeRef target) {
  if (target.kind != NodeKind::Social)
    throw KindError(std::string("attack target must be a social node, got ") + to_string(target.kind));
  if (target.index >= net.n_social())
    throw LookupError("social index " + std::to_string(target.index) + " out of range");
  return target.index;
}

}  // namespace

Phase1Result phase1(const TransitionOperator& op, NodeRef target, const VialParams& params) {
  check_params(params);
  const SbaNetwork& net = op.network();
  const std::uint32_t v = check_social_target(net, target);
  const std::size_t n = net.n_social();
  const double capacity = static_cast<double>(n);
  const std::size_t iters = resolve_max_iters(params, n);

  Phase1Result result;
  result.votes.assign(n, 0.0);
  result.votes[v] = capacity;

  VoteVector next;
  std::vector<double> bscratch, ascratch;
  for (std::size_t i = 1; i <= iters; ++i) {
    op.apply_transpose_into(result.votes, next, bscratch, ascratch);
    const double keep = 1.0 - params.alpha;
    for (double& x : next) x *= keep;
    next[v] += params.alpha * capacity;

    double change = 0.0;
    for (std::size_t u = 0; u < n; ++u) change += std::abs(next[u] - result.votes[u]);
    result.final_error = change / capacity;
    result.iterations_used = i;
    result.votes.swap(next);
    if (result.final_error <= params.epsilon) break;
  }
  return result;
}

std::vector<double> phase2(const SbaNetwork& network, const VoteVector& s) {
  if (s.size() != network.n_social())
    throw ValidationError("vote vector size does not match the social node count");
  std::vector<double> votes(network.n_attribute(), 0.0);
  for (std::uint32_t u = 0; u < network.n_social(); ++u) {
    const double d = network.deg_attribute[u];
    if (d <= 0.0 || s[u] == 0.0) continue;
    const double scale = s[u] / d;
    for (std::size_t i = network.s2a.row_begin(u); i < network.s2a.row_end(u); ++i)
      votes[network.s2a.nbr[i]] += scale * network.s2a.wgt[i];
  }
  return votes;
}

std::vector<RankedValue> TopKSelection::topk() const {
  const std::size_t take = std::min(k, ranking.size());
  return std::vector<RankedValue>(ranking.begin(), ranking.begin() + take);
}

TopKSelection predict_topk_type(const std::vector<double>& votes, const AttributeVocabulary& vocab,
                                std::uint32_t type_index, std::size_t k) {
  if (k < 1) throw ValidationError("top-K requires K >= 1");
  if (type_index >= vocab.type_count())
    throw VocabularyError("attribute type index " + std::to_string(type_index) + " out of range");
  if (votes.size() != vocab.value_count())
    throw ValidationError("vote vector size does not match the vocabulary");

  TopKSelection sel;
  sel.k = k;
  for (std::uint32_t value : vocab.values_of(type_index))
    sel.ranking.push_back({value, votes[value]});
  std::sort(sel.ranking.begin(), sel.ranking.end(), [](const RankedValue& a, const RankedValue& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.value < b.value;
  });

  const std::size_t n = sel.ranking.size();
  if (n <= k) {
    sel.full_count = n;
    return sel;
  }
  if (sel.ranking[k - 1].score != sel.ranking[k].score) {
    sel.full_count = k;
    return sel;
  }
  const double cut = sel.ranking[k - 1].score;
  std::size_t lo = k - 1;
  while (lo > 0 && sel.ranking[lo - 1].score == cut) --lo;
  std::size_t hi = k + 1;
  while (hi < n && sel.ranking[hi].score == cut) ++hi;
  sel.full_count = lo;
  sel.tie_begin = lo;
  sel.tie_end = hi;
  sel.slots = k - lo;
  return sel;
}

TopKSelection predict_topk(const std::vector<double>& votes, const AttributeVocabulary& vocab,
                           const std::string& attr_type, std::size_t k) {
  const auto type_index = vocab.type_index(attr_type);
  if (!type_index) throw VocabularyError("unknown attribute type \"" + attr_type + "\"");
  return predict_topk_type(votes, vocab, *type_index, k);
}

double clusterness(const std::vector<double>& votes) {
  const std::size_t n = votes.size();
  if (n < 2) throw ConfidenceError("clusterness needs at least 2 candidate values");
  std::vector<double> sorted(votes);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());

  std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + sorted[i];
    prefix_sq[i + 1] = prefix_sq[i] + sorted[i] * sorted[i];
  }

  std::size_t best = 1;
  double best_wcss = std::numeric_limits<double>::infinity();
  for (std::size_t b = 1; b < n; ++b) {
    const double hi_n = static_cast<double>(b), lo_n = static_cast<double>(n - b);
    const double hi_sum = prefix[b], lo_sum = prefix[n] - prefix[b];
    const double wcss = (prefix_sq[b] - hi_sum * hi_sum / hi_n) +
                        (prefix_sq[n] - prefix_sq[b] - lo_sum * lo_sum / lo_n);
    if (wcss < best_wcss) {
      best_wcss = wcss;
      best = b;
    }
  }
  const double mean_hi = prefix[best] / static_cast<double>(best);
  const double mean_lo = (prefix[n] - prefix[best]) / static_cast<double>(n - best);
  return mean_hi - mean_lo;
}

double gap_statistic(const std::vector<double>& votes) {
  if (votes.size() < 2) throw ConfidenceError("gap statistic needs at least 2 candidate values");
  double top1 = -std::numeric_limits<double>::infinity();
  double top2 = -std::numeric_limits<double>::infinity();
  for (double v : votes) {
    if (v > top1) {
      top2 = top1;
      top1 = v;
    } else if (v > top2) {
      top2 = v;
    }
  }
  return top1 - top2;
}

AttackResult attack(const SbaNetwork& network, const TransitionOperator& op, NodeRef target,
                    const VialParams& params, std::size_t k) {
  if (&op.network() != &network)
    throw ValidationError("transition operator was built over a different network");
  Phase1Result p1 = phase1(op, target, params);
  AttackResult result;
  result.iterations_used = p1.iterations_used;
  result.final_error = p1.final_error;
  result.votes = phase2(network, p1.votes);

  const AttributeVocabulary& vocab = network.vocab;
  result.types.reserve(vocab.type_count());
  for (std::uint32_t t = 0; t < vocab.type_count(); ++t) {
    TypeOutcome out;
    out.type = t;
    out.topk = predict_topk_type(result.votes, vocab, t, k);
    if (out.topk.ranking.size() >= 2) {
      std::vector<double> scores;
      scores.reserve(out.topk.ranking.size());
      for (const RankedValue& rv : out.topk.ranking) scores.push_back(rv.score);
      out.confidence_defined = true;
      out.clusterness = vial::clusterness(scores);
      out.gap = gap_statistic(scores);
    }
    result.types.push_back(std::move(out));
  }
  return result;
}

}  // namespace vial
