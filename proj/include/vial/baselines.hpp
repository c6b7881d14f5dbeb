#pragma once

#include <cstdint>
#include <vector>

#include "vial/sba_graph.hpp"
#include "vial/vial_engine.hpp"

namespace vial {

// Fraction of remaining (training) users holding each attribute value.
// `n_test_excluded` is subtracted from the social node count to form the
// denominator; pass 0 when scoring the full network.
std::vector<double> random_baseline(const SbaNetwork& network, std::size_t n_test_excluded = 0);

// Number of common social neighbors between the target and each value's
// holder set (unweighted).
std::vector<double> cn_san(const SbaNetwork& network, NodeRef target);

// Sum of 1/ln(neighbor count) over common social neighbors, where the
// neighbor count spans all three link classes. Common neighbors with at
// most one neighbor contribute nothing.
std::vector<double> aa_san(const SbaNetwork& network, NodeRef target);

struct RwwrParams {
  double restart = 0.1;
  double epsilon = 1e-10;  // L1 change between sweeps
  std::size_t max_iters = 100000;
};

// Random walk with restart on the social+attribute subgraph (behavior links
// ignored); returns the steady-state probability of each attribute node.
// Mass leaving a node with no social or attribute links restarts at the
// target.
std::vector<double> rwwr_san(const SbaNetwork& network, NodeRef target,
                             const RwwrParams& params = {});

// Copy of the network with all social links dropped; degree sums rebuilt.
SbaNetwork strip_social_links(const SbaNetwork& network);

// Full attack on the social-stripped network.
AttackResult vial_b(const SbaNetwork& network, NodeRef target, const VialParams& params,
                    const Shares& shares, std::size_t k);

}  // namespace vial
