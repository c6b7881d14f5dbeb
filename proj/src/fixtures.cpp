#include "vial/fixtures.hpp"

#include <string>

#include "vial/rng.hpp"

namespace vial::fixtures {

namespace {

std::string social_name(std::size_t i) { return "u" + std::to_string(i); }
std::string behavior_name(std::size_t i) { return "b" + std::to_string(i); }

}  // namespace

SbaNetwork random_network(const FixtureConfig& cfg) {
  Rng rng(cfg.seed);
  const auto weight = [&] { return cfg.random_weights ? rng.uniform(0.5, 2.0) : 1.0; };

  std::vector<VocabEntry> vocab;
  for (std::size_t t = 0; t < cfg.n_types; ++t)
    for (std::size_t v = 0; v < cfg.values_per_type; ++v)
      vocab.push_back({"t" + std::to_string(t) + "_v" + std::to_string(v),
                       "type" + std::to_string(t)});

  std::vector<Edge> social;
  if (cfg.connected) {
    for (std::size_t i = 1; i < cfg.n_social; ++i)
      social.push_back({social_name(i), social_name(rng.bounded(i)), weight()});
  }
  const std::size_t extras =
      static_cast<std::size_t>(cfg.extra_social_per_node * static_cast<double>(cfg.n_social));
  for (std::size_t e = 0; e < extras && cfg.n_social >= 2; ++e) {
    const std::uint64_t i = rng.bounded(cfg.n_social);
    std::uint64_t j = rng.bounded(cfg.n_social - 1);
    if (j >= i) ++j;
    social.push_back({social_name(i), social_name(j), weight()});
  }

  std::vector<Edge> behavior;
  if (cfg.n_behavior > 0) {
    for (std::size_t u = 0; u < cfg.n_social; ++u) {
      std::size_t links = static_cast<std::size_t>(cfg.behavior_links_per_user);
      const double frac = cfg.behavior_links_per_user - static_cast<double>(links);
      if (rng.unit() < frac) ++links;
      if (u == 0 && links == 0) links = 1;  // aperiodicity anchor
      for (std::size_t l = 0; l < links; ++l)
        behavior.push_back({social_name(u), behavior_name(rng.bounded(cfg.n_behavior)), weight()});
    }
  }

  std::vector<Edge> attribute;
  for (std::size_t u = 0; u < cfg.n_social; ++u)
    for (std::size_t t = 0; t < cfg.n_types; ++t)
      if (rng.unit() < cfg.attribute_prob) {
        const std::size_t v = rng.bounded(cfg.values_per_type);
        attribute.push_back({social_name(u), vocab[t * cfg.values_per_type + v].value, weight()});
      }

  return build_network(social, behavior, attribute, vocab);
}

SbaNetwork random_connected(std::uint64_t seed, std::size_t n_social) {
  FixtureConfig cfg;
  cfg.n_social = n_social;
  cfg.n_behavior = n_social / 3 + 1;
  cfg.seed = seed;
  return random_network(cfg);
}

}  // namespace vial::fixtures
