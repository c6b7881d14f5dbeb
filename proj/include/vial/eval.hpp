#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vial/baselines.hpp"
#include "vial/sba_graph.hpp"
#include "vial/vial_engine.hpp"

namespace vial::eval {

struct PrMetrics {
  double precision = 0.0;
  std::optional<double> recall;  // absent when the truth set is empty
};

// Tie-aware top-K metrics: values tied across the cutoff share the
// remaining slots in expectation. `truth` holds indices into `scores`.
PrMetrics metrics_topk(const std::vector<double>& scores,
                       const std::vector<std::uint32_t>& truth, std::size_t k);

// 2PR/(P+R), or 0 when both are 0.
double fscore(double precision, double recall);

struct SplitSpec {
  std::size_t per_value = 5;     // users sampled per attribute value
  std::size_t min_behaviors = 5; // distinct items a test user must have
  std::size_t trials = 10;
  std::uint64_t rng_seed = 0;
};

struct SampleResult {
  std::vector<NodeRef> users;  // sorted, deduplicated
  std::size_t raw_draws = 0;   // before deduplication
  std::vector<std::string> warnings;
};

// Deterministic given (rng_seed, trial_index): per attribute value, up to
// per_value holders with enough behavior links, drawn uniformly.
SampleResult sample_test_users(const SbaNetwork& network, const SplitSpec& spec,
                               std::size_t trial_index);

enum class AttackKind { Vial, Random, CnSan, AaSan, RwwrSan, VialB };

const char* to_string(AttackKind kind);
std::optional<AttackKind> attack_from_name(std::string_view name);

struct EvalConfig {
  SplitSpec split;
  VialParams params;
  Shares shares = Shares::equal();
  std::vector<std::size_t> k_list{1, 2, 3};
  double rwwr_restart = 0.1;
  std::size_t threads = 1;
};

struct MetricCell {
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
  std::size_t n_targets = 0;  // participating target instances across trials
};

// Per (target, attribute type) outcome of the capacity attack, kept for
// confidence filtering.
struct TargetRecord {
  double precision_k1 = 0.0;
  double clusterness = 0.0;
  double gap = 0.0;
  bool confidence_defined = false;
};

struct EvalReport {
  std::vector<AttackKind> attacks;
  std::vector<std::string> type_names;
  std::vector<std::size_t> k_list;
  std::size_t trials = 0;
  std::vector<MetricCell> cells;  // [attack][type][k], row-major
  std::vector<TargetRecord> capacity_targets;
  std::size_t failures = 0;
  std::size_t raw_test_instances = 0;    // value-level draws, duplicates counted
  std::size_t distinct_test_users = 0;   // across trials
  std::vector<std::string> warnings;

  MetricCell& cell(std::size_t attack, std::size_t type, std::size_t k_pos);
  const MetricCell& cell(std::size_t attack, std::size_t type, std::size_t k_pos) const;
};

// Per trial: sample targets, strip their attribute links, run every attack
// on every target, average metrics over participating targets; then average
// the trial means.
EvalReport run_trials(const SbaNetwork& network, const std::vector<AttackKind>& attacks,
                      const EvalConfig& config);

struct Gain {
  double delta = 0.0;
  std::optional<double> delta_pct;  // absent when the reference metric is 0
};

Gain performance_gain(double metric_a, double metric_b);

enum class ConfidenceKind { Clusterness, Gap };

struct SweepPoint {
  double threshold = 0.0;
  double fraction = 0.0;  // kept targets / all targets
  double mean_precision = 0.0;
  std::size_t kept = 0;
};

// Precision among targets whose confidence clears each threshold; empty
// kept sets produce no point.
std::vector<SweepPoint> confidence_sweep(const std::vector<TargetRecord>& records,
                                         ConfidenceKind kind,
                                         const std::vector<double>& thresholds);

void write_report_tsv(std::ostream& out, const EvalReport& report);
void write_report_table(std::ostream& out, const EvalReport& report);
// Gains of `reference` over every other attack in the report.
void write_gain_tsv(std::ostream& out, const EvalReport& report, AttackKind reference);

}  // namespace vial::eval
