#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vial/sba_graph.hpp"

namespace vial::synth {

// Planted-community generator: block-model social graph, one dominant
// attribute value and one dominant item pool per community.
struct SynthConfig {
  std::size_t n_users = 10000;
  std::size_t n_communities = 2;
  double p_intra = 0.002;   // social link probability inside a community
  double p_inter = 0.0005;  // across communities
  std::size_t n_items = 500;
  std::size_t n_types = 2;
  std::size_t values_per_type = 20;
  double rho_a = 0.9;  // chance a user adopts the community's dominant value
  double rho_b = 0.9;  // chance a behavior lands in the community's item pool
  std::size_t behaviors_per_user = 10;
  std::uint64_t rng_seed = 1;
};

struct SynthData {
  std::vector<Edge> social;
  std::vector<Edge> behavior;
  std::vector<Edge> attribute;
  std::vector<VocabEntry> vocab;
  std::vector<std::uint32_t> community;                  // per user
  std::vector<std::vector<std::uint32_t>> true_values;   // per user, global value indices
};

// Deterministic given the seed; all link weights are 1.
SynthData generate(const SynthConfig& config);

SbaNetwork build(const SynthData& data);

// Writes social.tsv, behavior.tsv, attribute.tsv, vocab.tsv, manifest.tsv.
// Same seed produces byte-identical files.
void write_dataset(const SynthData& data, const std::string& directory);

}  // namespace vial::synth
