#include "vial/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <thread>

#include "vial/errors.hpp"
#include "vial/rng.hpp"

namespace vial::eval {

PrMetrics metrics_topk(const std::vector<double>& scores,
                       const std::vector<std::uint32_t>& truth, std::size_t k) {
  if (k < 1) throw ValidationError("top-K metrics require K >= 1");
  const std::size_t n = scores.size();
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

  // Expected hits as an exact integer ratio hit_num/hit_den so equal
  // rationals round identically everywhere they are recomputed.
  std::size_t hit_num = 0, hit_den = 1;
  if (n <= k || scores[order[k - 1]] != scores[order[k]]) {
    const std::size_t take = std::min(n, k);
    for (std::size_t i = 0; i < take; ++i) hit_num += is_truth[order[i]];
  } else {
    const double cut = scores[order[k - 1]];
    std::size_t lo = k - 1;
    while (lo > 0 && scores[order[lo - 1]] == cut) --lo;
    std::size_t hi = k + 1;
    while (hi < n && scores[order[hi]] == cut) ++hi;
    std::size_t full = 0, in_group = 0;
    for (std::size_t i = 0; i < lo; ++i) full += is_truth[order[i]];
    for (std::size_t i = lo; i < hi; ++i) in_group += is_truth[order[i]];
    const std::size_t g = hi - lo, s = k - lo;
    hit_num = full * g + s * in_group;
    hit_den = g;
  }

  PrMetrics out;
  out.precision = static_cast<double>(hit_num) / static_cast<double>(hit_den * k);
  if (!truth.empty())
    out.recall = static_cast<double>(hit_num) / static_cast<double>(hit_den * truth.size());
  return out;
}

double fscore(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

SampleResult sample_test_users(const SbaNetwork& network, const SplitSpec& spec,
                               std::size_t trial_index) {
  if (spec.per_value < 1) throw ValidationError("per_value must be at least 1");
  Rng rng(spec.rng_seed, trial_index);
  SampleResult result;
  std::vector<char> picked(network.n_social(), 0);
  std::vector<std::uint32_t> eligible;
  for (std::uint32_t a = 0; a < network.n_attribute(); ++a) {
    eligible.clear();
    for (std::size_t i = network.a2s.row_begin(a); i < network.a2s.row_end(a); ++i) {
      const std::uint32_t u = network.a2s.nbr[i];
      if (network.s2b.row_size(u) >= spec.min_behaviors) eligible.push_back(u);
    }
    if (eligible.empty()) {
      result.warnings.push_back("value \"" + network.vocab.value_name(a) +
                                "\" has no eligible users");
      continue;
    }
    const std::size_t take = std::min(spec.per_value, eligible.size());
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + rng.bounded(eligible.size() - i);
      std::swap(eligible[i], eligible[j]);
      picked[eligible[i]] = 1;
    }
    result.raw_draws += take;
  }
  for (std::uint32_t u = 0; u < network.n_social(); ++u)
    if (picked[u]) result.users.push_back({NodeKind::Social, u});
  return result;
}

const char* to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::Vial: return "vial";
    case AttackKind::Random: return "random";
    case AttackKind::CnSan: return "cn-san";
    case AttackKind::AaSan: return "aa-san";
    case AttackKind::RwwrSan: return "rwwr-san";
    case AttackKind::VialB: return "vial-b";
  }
  return "?";
}

std::optional<AttackKind> attack_from_name(std::string_view name) {
  if (name == "vial") return AttackKind::Vial;
  if (name == "random") return AttackKind::Random;
  if (name == "cn-san") return AttackKind::CnSan;
  if (name == "aa-san") return AttackKind::AaSan;
  if (name == "rwwr-san") return AttackKind::RwwrSan;
  if (name == "vial-b") return AttackKind::VialB;
  return std::nullopt;
}

MetricCell& EvalReport::cell(std::size_t attack, std::size_t type, std::size_t k_pos) {
  return cells[(attack * type_names.size() + type) * k_list.size() + k_pos];
}

const MetricCell& EvalReport::cell(std::size_t attack, std::size_t type,
                                   std::size_t k_pos) const {
  return cells[(attack * type_names.size() + type) * k_list.size() + k_pos];
}

namespace {

struct TargetOut {
  std::vector<PrMetrics> metrics;      // [attack][type][k]
  std::vector<char> participates;      // [attack][type]
  std::vector<TargetRecord> records;   // per type, capacity attack only
  std::vector<char> record_set;
  std::size_t failures = 0;
};

}  // namespace

EvalReport run_trials(const SbaNetwork& network, const std::vector<AttackKind>& attacks,
                      const EvalConfig& config) {
  if (attacks.empty()) throw ValidationError("at least one attack required");
  if (config.k_list.empty()) throw ValidationError("K list must not be empty");
  for (std::size_t k : config.k_list)
    if (k < 1) throw ValidationError("every K must be at least 1");
  if (config.split.trials < 1) throw ValidationError("trials must be at least 1");

  const AttributeVocabulary& vocab = network.vocab;
  const std::size_t n_types = vocab.type_count();
  const std::size_t n_k = config.k_list.size();
  const std::size_t n_attacks = attacks.size();
  const std::size_t max_k = *std::max_element(config.k_list.begin(), config.k_list.end());

  std::vector<std::pair<std::uint32_t, std::uint32_t>> value_pos(vocab.value_count());
  for (std::uint32_t t = 0; t < n_types; ++t) {
    const auto& values = vocab.values_of(t);
    for (std::uint32_t i = 0; i < values.size(); ++i) value_pos[values[i]] = {t, i};
  }

  EvalReport report;
  report.attacks = attacks;
  report.k_list = config.k_list;
  report.trials = config.split.trials;
  for (std::uint32_t t = 0; t < n_types; ++t) report.type_names.push_back(vocab.type_name(t));
  report.cells.assign(n_attacks * n_types * n_k, MetricCell{});

  struct CellAcc {
    double p = 0.0, r = 0.0, f = 0.0;
    std::size_t trials_with = 0, targets = 0;
  };
  std::vector<CellAcc> acc(n_attacks * n_types * n_k);

  std::size_t threads = config.threads;
  if (threads == 0) {
    threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
  }

  for (std::size_t trial = 0; trial < config.split.trials; ++trial) {
    SampleResult sample = sample_test_users(network, config.split, trial);
    for (const std::string& w : sample.warnings)
      report.warnings.push_back("trial " + std::to_string(trial) + ": " + w);
    report.raw_test_instances += sample.raw_draws;
    report.distinct_test_users += sample.users.size();
    if (sample.users.empty()) continue;

    auto [stripped, truth] = remove_attribute_links(network, sample.users);

    std::optional<TransitionOperator> op, op_b;
    std::optional<SbaNetwork> social_stripped;
    std::vector<double> random_scores;
    for (AttackKind kind : attacks) {
      switch (kind) {
        case AttackKind::Vial:
          if (!op) op.emplace(stripped, config.shares);
          break;
        case AttackKind::VialB:
          if (!op_b) {
            social_stripped = strip_social_links(stripped);
            op_b.emplace(*social_stripped, config.shares);
          }
          break;
        case AttackKind::Random:
          if (random_scores.empty())
            random_scores = random_baseline(stripped, sample.users.size());
          break;
        default:
          break;
      }
    }

    const std::size_t n_targets = sample.users.size();
    std::vector<TargetOut> outs(n_targets);

    auto process = [&](std::size_t slot) {
      TargetOut& out = outs[slot];
      out.metrics.assign(n_attacks * n_types * n_k, PrMetrics{});
      out.participates.assign(n_attacks * n_types, 0);
      out.records.assign(n_types, TargetRecord{});
      out.record_set.assign(n_types, 0);

      const NodeRef target = sample.users[slot];
      std::vector<std::vector<std::uint32_t>> truth_by_type(n_types);
      for (std::uint32_t v : truth.at(target.index))
        truth_by_type[value_pos[v].first].push_back(value_pos[v].second);

      std::vector<double> type_scores;
      for (std::size_t ai = 0; ai < n_attacks; ++ai) {
        const AttackKind kind = attacks[ai];
        try {
          std::vector<double> scores;
          AttackResult ar;
          switch (kind) {
            case AttackKind::Vial:
              ar = attack(stripped, *op, target, config.params, max_k);
              scores = ar.votes;
              break;
            case AttackKind::Random:
              scores = random_scores;
              break;
            case AttackKind::CnSan:
              scores = cn_san(stripped, target);
              break;
            case AttackKind::AaSan:
              scores = aa_san(stripped, target);
              break;
            case AttackKind::RwwrSan: {
              RwwrParams rp;
              rp.restart = config.rwwr_restart;
              scores = rwwr_san(stripped, target, rp);
              break;
            }
            case AttackKind::VialB:
              ar = attack(*social_stripped, *op_b, target, config.params, max_k);
              scores = ar.votes;
              break;
          }
          for (std::uint32_t t = 0; t < n_types; ++t) {
            if (truth_by_type[t].empty()) continue;
            out.participates[ai * n_types + t] = 1;
            const auto& values = vocab.values_of(t);
            type_scores.resize(values.size());
            for (std::size_t i = 0; i < values.size(); ++i) type_scores[i] = scores[values[i]];
            for (std::size_t kp = 0; kp < n_k; ++kp)
              out.metrics[(ai * n_types + t) * n_k + kp] =
                  metrics_topk(type_scores, truth_by_type[t], config.k_list[kp]);
            if (kind == AttackKind::Vial) {
              TargetRecord rec;
              rec.precision_k1 = metrics_topk(type_scores, truth_by_type[t], 1).precision;
              rec.confidence_defined = ar.types[t].confidence_defined;
              rec.clusterness = ar.types[t].clusterness;
              rec.gap = ar.types[t].gap;
              out.records[t] = rec;
              out.record_set[t] = 1;
            }
          }
        } catch (const Error&) {
          ++out.failures;
          for (std::uint32_t t = 0; t < n_types; ++t) out.participates[ai * n_types + t] = 0;
        }
      }
    };

    const std::size_t workers = std::min(threads, n_targets);
    if (workers <= 1) {
      for (std::size_t i = 0; i < n_targets; ++i) process(i);
    } else {
      std::atomic<std::size_t> cursor{0};
      auto loop = [&] {
        for (;;) {
          const std::size_t i = cursor.fetch_add(1);
          if (i >= n_targets) break;
          process(i);
        }
      };
      std::vector<std::thread> pool;
      for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(loop);
      loop();
      for (std::thread& th : pool) th.join();
    }

    for (std::size_t ai = 0; ai < n_attacks; ++ai)
      for (std::uint32_t t = 0; t < n_types; ++t)
        for (std::size_t kp = 0; kp < n_k; ++kp) {
          double sum_p = 0.0, sum_r = 0.0, sum_f = 0.0;
          std::size_t count = 0;
          for (const TargetOut& out : outs) {
            if (!out.participates[ai * n_types + t]) continue;
            const PrMetrics& pr = out.metrics[(ai * n_types + t) * n_k + kp];
            const double r = pr.recall.value_or(0.0);
            sum_p += pr.precision;
            sum_r += r;
            sum_f += fscore(pr.precision, r);
            ++count;
          }
          if (count == 0) continue;
          CellAcc& c = acc[(ai * n_types + t) * n_k + kp];
          c.p += sum_p / static_cast<double>(count);
          c.r += sum_r / static_cast<double>(count);
          c.f += sum_f / static_cast<double>(count);
          c.trials_with += 1;
          c.targets += count;
        }
    for (const TargetOut& out : outs) {
      report.failures += out.failures;
      for (std::uint32_t t = 0; t < n_types; ++t)
        if (out.record_set[t]) report.capacity_targets.push_back(out.records[t]);
    }
  }

  for (std::size_t i = 0; i < acc.size(); ++i) {
    if (acc[i].trials_with == 0) continue;
    report.cells[i].precision = acc[i].p / static_cast<double>(acc[i].trials_with);
    report.cells[i].recall = acc[i].r / static_cast<double>(acc[i].trials_with);
    report.cells[i].fscore = acc[i].f / static_cast<double>(acc[i].trials_with);
    report.cells[i].n_targets = acc[i].targets;
  }
  return report;
}

Gain performance_gain(double metric_a, double metric_b) {
  Gain g;
  g.delta = metric_a - metric_b;
  if (metric_b > 0.0) g.delta_pct = (metric_a - metric_b) / metric_b * 100.0;
  return g;
}

std::vector<SweepPoint> confidence_sweep(const std::vector<TargetRecord>& records,
                                         ConfidenceKind kind,
                                         const std::vector<double>& thresholds) {
  std::vector<const TargetRecord*> defined;
  for (const TargetRecord& r : records)
    if (r.confidence_defined) defined.push_back(&r);

  std::vector<SweepPoint> curve;
  if (defined.empty()) return curve;
  for (double threshold : thresholds) {
    double sum = 0.0;
    std::size_t kept = 0;
    for (const TargetRecord* r : defined) {
      const double conf = kind == ConfidenceKind::Clusterness ? r->clusterness : r->gap;
      if (conf >= threshold) {
        sum += r->precision_k1;
        ++kept;
      }
    }
    if (kept == 0) continue;
    curve.push_back({threshold, static_cast<double>(kept) / static_cast<double>(defined.size()),
                     sum / static_cast<double>(kept), kept});
  }
  return curve;
}

void write_report_tsv(std::ostream& out, const EvalReport& report) {
  out << "attack\tattribute_type\tK\tprecision\trecall\tfscore\tn_targets\ttrials\n";
  for (std::size_t ai = 0; ai < report.attacks.size(); ++ai)
    for (std::size_t t = 0; t < report.type_names.size(); ++t)
      for (std::size_t kp = 0; kp < report.k_list.size(); ++kp) {
        const MetricCell& c = report.cell(ai, t, kp);
        out << to_string(report.attacks[ai]) << '\t' << report.type_names[t] << '\t'
            << report.k_list[kp] << '\t' << std::fixed << std::setprecision(6) << c.precision
            << '\t' << c.recall << '\t' << c.fscore;
        out.unsetf(std::ios_base::fixed);
        out << '\t' << c.n_targets << '\t' << report.trials << "\n";
      }
}

void write_report_table(std::ostream& out, const EvalReport& report) {
  out << "attack       attribute_type K precision recall   fscore   n_targets trials\n";
  for (std::size_t ai = 0; ai < report.attacks.size(); ++ai)
    for (std::size_t t = 0; t < report.type_names.size(); ++t)
      for (std::size_t kp = 0; kp < report.k_list.size(); ++kp) {
        const MetricCell& c = report.cell(ai, t, kp);
        out << std::left << std::setw(12) << to_string(report.attacks[ai]) << ' '
            << std::setw(14) << report.type_names[t] << ' ' << std::right << std::setw(1)
            << report.k_list[kp] << ' ' << std::fixed << std::setprecision(6) << std::setw(9)
            << c.precision << ' ' << std::setw(8) << c.recall << ' ' << std::setw(8) << c.fscore
            << ' ' << std::setw(9) << c.n_targets << ' ' << std::setw(6) << report.trials
            << "\n";
        out.unsetf(std::ios_base::fixed);
      }
}

void write_gain_tsv(std::ostream& out, const EvalReport& report, AttackKind reference) {
  std::size_t ref_index = report.attacks.size();
  for (std::size_t ai = 0; ai < report.attacks.size(); ++ai)
    if (report.attacks[ai] == reference) ref_index = ai;
  if (ref_index == report.attacks.size())
    throw ValidationError("reference attack is not part of the report");

  out << "attack\tattribute_type\tK\tdelta_precision\tdelta_precision_pct\tdelta_recall\t"
         "delta_recall_pct\tdelta_fscore\tdelta_fscore_pct\n";
  const auto emit = [&out](const Gain& g) {
    out << std::fixed << std::setprecision(6) << g.delta;
    out.unsetf(std::ios_base::fixed);
    out << '\t';
    if (g.delta_pct)
      out << std::fixed << std::setprecision(2) << *g.delta_pct;
    else
      out << '-';
    out.unsetf(std::ios_base::fixed);
  };
  for (std::size_t ai = 0; ai < report.attacks.size(); ++ai) {
    if (ai == ref_index) continue;
    for (std::size_t t = 0; t < report.type_names.size(); ++t)
      for (std::size_t kp = 0; kp < report.k_list.size(); ++kp) {
        const MetricCell& ref = report.cell(ref_index, t, kp);
        const MetricCell& c = report.cell(ai, t, kp);
        out << to_string(report.attacks[ai]) << '\t' << report.type_names[t] << '\t'
            << report.k_list[kp] << '\t';
        emit(performance_gain(ref.precision, c.precision));
        out << '\t';
        emit(performance_gain(ref.recall, c.recall));
        out << '\t';
        emit(performance_gain(ref.fscore, c.fscore));
        out << "\n";
      }
  }
}

}  // namespace vial::eval
