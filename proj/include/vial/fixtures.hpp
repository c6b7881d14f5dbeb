#pragma once

#include <cstdint>
#include <vector>

#include "vial/sba_graph.hpp"

namespace vial::fixtures {

// Knobs for seeded random SBA networks used by tests and the verify command.
struct FixtureConfig {
  std::size_t n_social = 50;
  std::size_t n_behavior = 15;
  std::size_t n_types = 2;
  std::size_t values_per_type = 4;
  double extra_social_per_node = 1.5;  // random links beyond the spanning tree
  double behavior_links_per_user = 2.0;
  double attribute_prob = 0.7;  // chance a user holds a value of each type
  bool random_weights = true;   // weights in [0.5, 2.0]; otherwise all 1
  bool connected = true;        // spanning tree over social nodes
  std::uint64_t seed = 1;
};

SbaNetwork random_network(const FixtureConfig& config);

// Connected mixed-class network with weights in [0.5, 2.0] and at least one
// behavior link (keeps the walk aperiodic).
SbaNetwork random_connected(std::uint64_t seed, std::size_t n_social);

}  // namespace vial::fixtures
