#include "vial/synth.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include "vial/errors.hpp"
#include "vial/rng.hpp"

namespace vial::synth {

namespace {

std::string user_name(std::size_t u) { return "u" + std::to_string(u); }
std::string item_name(std::size_t i) { return "b" + std::to_string(i); }

void check_config(const SynthConfig& cfg) {
  if (cfg.n_users < 1) throw ValidationError("n_users must be at least 1");
  if (cfg.n_communities < 2) throw ValidationError("n_communities must be at least 2");
  if (cfg.n_communities > cfg.n_users)
    throw ValidationError("more communities than users");
  if (!(cfg.p_intra >= 0.0 && cfg.p_intra <= 1.0) ||
      !(cfg.p_inter >= 0.0 && cfg.p_inter <= 1.0))
    throw ValidationError("link probabilities must lie in [0, 1]");
  if (!(cfg.rho_a >= 0.0 && cfg.rho_a <= 1.0) || !(cfg.rho_b >= 0.0 && cfg.rho_b <= 1.0))
    throw ValidationError("correlations must lie in [0, 1]");
  if (cfg.n_types < 1) throw ValidationError("n_types must be at least 1");
  if (cfg.values_per_type < cfg.n_communities)
    throw ValidationError("each community needs its own dominant value: values_per_type >= n_communities");
  if (cfg.behaviors_per_user > 0 && cfg.n_items < cfg.behaviors_per_user)
    throw ValidationError("behaviors_per_user exceeds the item count");
  if (cfg.behaviors_per_user > 0 && cfg.n_items < cfg.n_communities)
    throw ValidationError("each community needs a non-empty item pool: n_items >= n_communities");
}

// Geometric skip over candidate pair indices: every index kept with
// probability p using O(#links) draws.
template <typename Emit>
void sample_bernoulli_indices(Rng& rng, std::uint64_t total, double p, Emit&& emit) {
  if (total == 0 || p <= 0.0) return;
  if (p >= 1.0) {
    for (std::uint64_t t = 0; t < total; ++t) emit(t);
    return;
  }
  const double log_q = std::log1p(-p);
  double cursor = -1.0;
  for (;;) {
    const double r = rng.unit();
    cursor += 1.0 + std::floor(std::log1p(-r) / log_q);
    if (cursor >= static_cast<double>(total)) break;
    emit(static_cast<std::uint64_t>(cursor));
  }
}

// Pair index over the lower triangle: t -> (i, j) with j < i.
std::pair<std::uint64_t, std::uint64_t> triangle_pair(std::uint64_t t) {
  auto i = static_cast<std::uint64_t>(
      (1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(t))) / 2.0);
  while (i * (i - 1) / 2 > t) --i;
  while ((i + 1) * i / 2 <= t) ++i;
  return {i, t - i * (i - 1) / 2};
}

}  // namespace

SynthData generate(const SynthConfig& cfg) {
  check_config(cfg);
  Rng rng(cfg.rng_seed);
  SynthData data;

  for (std::size_t t = 0; t < cfg.n_types; ++t)
    for (std::size_t v = 0; v < cfg.values_per_type; ++v)
      data.vocab.push_back({"t" + std::to_string(t) + "_v" + std::to_string(v),
                            "type" + std::to_string(t)});

  // Contiguous balanced communities.
  std::vector<std::size_t> start(cfg.n_communities + 1);
  for (std::size_t c = 0; c <= cfg.n_communities; ++c)
    start[c] = c * cfg.n_users / cfg.n_communities;
  data.community.resize(cfg.n_users);
  for (std::size_t c = 0; c < cfg.n_communities; ++c)
    for (std::size_t u = start[c]; u < start[c + 1]; ++u)
      data.community[u] = static_cast<std::uint32_t>(c);

  for (std::size_t c = 0; c < cfg.n_communities; ++c) {
    const std::uint64_t nc = start[c + 1] - start[c];
    const std::uint64_t pairs = nc < 2 ? 0 : nc * (nc - 1) / 2;
    sample_bernoulli_indices(rng, pairs, cfg.p_intra, [&](std::uint64_t t) {
      const auto [i, j] = triangle_pair(t);
      data.social.push_back({user_name(start[c] + i), user_name(start[c] + j), 1.0});
    });
  }
  for (std::size_t ca = 0; ca < cfg.n_communities; ++ca)
    for (std::size_t cb = ca + 1; cb < cfg.n_communities; ++cb) {
      const std::uint64_t na = start[ca + 1] - start[ca];
      const std::uint64_t nb = start[cb + 1] - start[cb];
      sample_bernoulli_indices(rng, na * nb, cfg.p_inter, [&](std::uint64_t t) {
        data.social.push_back(
            {user_name(start[ca] + t / nb), user_name(start[cb] + t % nb), 1.0});
      });
    }

  data.true_values.resize(cfg.n_users);
  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    const std::uint32_t c = data.community[u];
    for (std::size_t t = 0; t < cfg.n_types; ++t) {
      std::uint64_t v;
      if (rng.unit() < cfg.rho_a) {
        v = c;
      } else {
        v = rng.bounded(cfg.values_per_type - 1);
        if (v >= c) ++v;
      }
      const auto value = static_cast<std::uint32_t>(t * cfg.values_per_type + v);
      data.true_values[u].push_back(value);
      data.attribute.push_back({user_name(u), data.vocab[value].value, 1.0});
    }
  }

  if (cfg.behaviors_per_user > 0) {
    // Item pool of community c: items congruent to c mod n_communities.
    const auto pool_size = [&](std::uint32_t c) {
      return (cfg.n_items - 1 - c) / cfg.n_communities + 1;
    };
    std::unordered_set<std::uint64_t> used;
    for (std::size_t u = 0; u < cfg.n_users; ++u) {
      const std::uint32_t c = data.community[u];
      used.clear();
      std::size_t attempts = 0;
      while (used.size() < cfg.behaviors_per_user) {
        std::uint64_t item;
        if (++attempts > 100 * cfg.behaviors_per_user) {
          // Dense corner: fall back to the first unused items.
          for (item = 0; used.count(item); ++item) {
          }
        } else if (rng.unit() < cfg.rho_b) {
          item = c + cfg.n_communities * rng.bounded(pool_size(c));
        } else {
          item = rng.bounded(cfg.n_items);
        }
        if (used.insert(item).second)
          data.behavior.push_back({user_name(u), item_name(item), 1.0});
      }
    }
  }

  return data;
}

SbaNetwork build(const SynthData& data) {
  return build_network(data.social, data.behavior, data.attribute, data.vocab);
}

void write_dataset(const SynthData& data, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  const auto open = [&](const char* name) {
    std::ofstream out(fs::path(directory) / name, std::ios::binary);
    if (!out) throw ValidationError(std::string("cannot write ") + name + " in " + directory);
    return out;
  };

  {
    std::ofstream out = open("social.tsv");
    for (const Edge& e : data.social) out << e.a << '\t' << e.b << "\n";
  }
  {
    std::ofstream out = open("behavior.tsv");
    for (const Edge& e : data.behavior) out << e.a << '\t' << e.b << "\n";
  }
  {
    std::ofstream out = open("attribute.tsv");
    for (const Edge& e : data.attribute) out << e.a << '\t' << e.b << "\n";
  }
  {
    std::ofstream out = open("vocab.tsv");
    for (const VocabEntry& v : data.vocab) out << v.value << '\t' << v.type << "\n";
  }
  {
    std::ofstream out = open("manifest.tsv");
    out << "# user_id\tcommunity\ttrue_values\n";
    for (std::size_t u = 0; u < data.community.size(); ++u) {
      out << "u" << u << '\t' << data.community[u] << '\t';
      for (std::size_t i = 0; i < data.true_values[u].size(); ++i) {
        if (i) out << ',';
        out << data.vocab[data.true_values[u][i]].value;
      }
      out << "\n";
    }
  }
}

}  // namespace vial::synth
