#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vial/dividing_matrix.hpp"
#include "vial/eval.hpp"
#include "vial/sba_graph.hpp"

namespace vial::oracle {

struct OracleReport {
  std::string theorem_id;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// True when every social node is reachable from social node 0 across all
// three link classes. Attribute values nobody holds cannot affect the walk
// and are ignored.
bool is_connected(const SbaNetwork& network);

// Fixed point of the damped iteration, solved directly:
// (I - (1-alpha) M^T) x = alpha |V_s| e_target. Builds its own dense
// dividing matrix; shares nothing with the sweep implementation.
VoteVector closed_form_votes(const SbaNetwork& network, const Shares& shares, NodeRef target,
                             double alpha, std::size_t cap = 2000);

// Stationary distribution of the dividing-matrix walk via dense power
// iteration (to 1e-12). Throws when the network is disconnected or the
// iteration fails to settle.
std::vector<double> stationary_distribution(const SbaNetwork& network, const Shares& shares,
                                            std::size_t cap = 2000);

// Undamped limit against the degree-share prediction |V_s| d_u / D with
// D the summed degree over social nodes; reports the max relative gap.
OracleReport corollary_check(const SbaNetwork& network, double tau, NodeRef target,
                             double tolerance = 1e-8);

// Mean top-K precision/recall over every ordering consistent with the
// scores, enumerated tie group by tie group.
eval::PrMetrics brute_force_metrics(const std::vector<double>& scores,
                                    const std::vector<std::uint32_t>& truth, std::size_t k);

// Seeded end-to-end check of every analytical result; used by the verify
// command. All lines pass on a correct build.
std::vector<OracleReport> run_verification_suite(std::uint64_t seed);

}  // namespace vial::oracle
