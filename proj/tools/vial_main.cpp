#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "vial/baselines.hpp"
#include "vial/errors.hpp"
#include "vial/eval.hpp"
#include "vial/snapshot.hpp"
#include "vial/synth.hpp"
#include "vial/theory_oracle.hpp"
#include "vial/tsv.hpp"
#include "vial/vial_engine.hpp"

namespace {

std::string format_count(std::size_t n) {
  std::string digits = std::to_string(n);
  std::string out;
  const std::size_t first = digits.size() % 3 == 0 ? 3 : digits.size() % 3;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i != 0 && (i - first) % 3 == 0 && i >= first) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

vial::Shares parse_shares(const std::string& text) {
  if (text.empty()) return vial::Shares::equal();
  const std::string per_node_prefix = "per-node:";
  if (text.rfind(per_node_prefix, 0) == 0) {
    const std::string tail = text.substr(per_node_prefix.size());
    std::size_t used = 0;
    double tau = 0.0;
    try {
      tau = std::stod(tail, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tail.size() || tail.empty())
      throw vial::ValidationError("--shares per-node form expects \"per-node:TAU\"");
    return vial::Shares::per_node(tau);
  }
  std::vector<double> parts;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t comma = text.find(',', begin);
    const std::string piece =
        text.substr(begin, comma == std::string::npos ? std::string::npos : comma - begin);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(piece, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != piece.size() || piece.empty())
      throw vial::ValidationError("--shares expects \"WS,WBS,WAS\" or \"per-node:TAU\"");
    parts.push_back(v);
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  if (parts.size() != 3)
    throw vial::ValidationError("--shares expects exactly three comma-separated numbers");
  return vial::Shares::global(parts[0], parts[1], parts[2]);
}

std::size_t edit_distance_capped(const std::string& a, const std::string& b, std::size_t cap) {
  if (a.size() > b.size() + cap || b.size() > a.size() + cap) return cap + 1;
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    std::size_t row_min = cur[0];
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > cap) return cap + 1;
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<std::string> nearest_ids(const std::vector<std::string>& ids, const std::string& query) {
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const std::string& id : ids) {
    const std::size_t d = edit_distance_capped(id, query, 3);
    if (d <= 3) scored.push_back({d, id});
  }
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < 3; ++i) out.push_back(scored[i].second);
  return out;
}

vial::NodeRef resolve_target(const vial::SbaNetwork& net, const std::string& id) {
  const auto index = net.social_index(id);
  if (!index) {
    std::string msg = "unknown user id \"" + id + "\"";
    const std::vector<std::string> near = nearest_ids(net.social_ids, id);
    if (!near.empty()) {
      msg += "; nearest matches:";
      for (const std::string& n : near) msg += " " + n;
    }
    throw vial::LookupError(msg);
  }
  return {vial::NodeKind::Social, *index};
}

struct BuildArgs {
  std::string social, behavior, attribute, vocab, out;
};

int run_build(const BuildArgs& args) {
  const vial::SbaNetwork net = vial::load_network_from_tsv(
      {args.social, args.behavior, args.attribute, args.vocab});
  vial::save_snapshot(net, args.out);
  std::cout << "social nodes: " << format_count(net.n_social()) << "\n"
            << "behavior nodes: " << format_count(net.n_behavior()) << "\n"
            << "attribute nodes: " << format_count(net.n_attribute()) << "\n"
            << "social links: " << format_count(net.n_social_links()) << "\n"
            << "behavior links: " << format_count(net.n_behavior_links()) << "\n"
            << "attribute links: " << format_count(net.n_attribute_links()) << "\n"
            << "snapshot: " << args.out << "\n";
  if (net.n_behavior() == 0) std::cerr << "warning: the network has no behavior links\n";
  return 0;
}

struct AttackArgs {
  std::string snapshot, target, shares_text, out;
  double alpha = 0.1;
  double epsilon = 1e-6;
  std::size_t max_iters = 0;
  std::size_t k = 3;
  std::vector<std::string> attacks{};
};

void print_ranking(std::ostream& os, const vial::SbaNetwork& net,
                   const vial::TopKSelection& sel) {
  const auto top = sel.topk();
  for (std::size_t i = 0; i < top.size(); ++i)
    os << "  " << i + 1 << ". " << net.vocab.value_name(top[i].value) << "  "
       << std::setprecision(6) << top[i].score << "\n";
  if (sel.slots > 0)
    os << "  (" << sel.tie_end - sel.tie_begin << " values tie across the top-" << sel.k
       << " cutoff; " << sel.slots << " slot(s) shared)\n";
}

void print_confidence(std::ostream& os, const std::vector<double>& type_scores) {
  if (type_scores.size() < 2) {
    os << "  confidence: undefined (fewer than 2 candidate values)\n";
    return;
  }
  os << "  clusterness: " << std::setprecision(6) << vial::clusterness(type_scores)
     << "  gap: " << vial::gap_statistic(type_scores) << "\n";
}

int run_attack(const AttackArgs& args) {
  const vial::SbaNetwork full = vial::load_snapshot(args.snapshot);
  const vial::NodeRef target = resolve_target(full, args.target);
  auto [net, truth] = vial::remove_attribute_links(full, {target});
  const std::size_t removed = truth.at(target.index).size();
  if (removed > 0)
    std::cout << "removed " << removed << " attribute link(s) of " << args.target
              << " before the attack (held-out truth)\n";

  const vial::Shares shares = parse_shares(args.shares_text);
  vial::VialParams params;
  params.alpha = args.alpha;
  params.epsilon = args.epsilon;
  params.max_iters = args.max_iters;

  std::vector<std::string> attack_names = args.attacks;
  if (attack_names.empty()) attack_names.push_back("vial");

  std::ofstream tsv;
  if (!args.out.empty()) {
    tsv.open(args.out);
    if (!tsv) throw vial::ValidationError("cannot write " + args.out);
    tsv << "attack\tattribute_type\trank\tvalue\tscore\n";
  }

  for (const std::string& name : attack_names) {
    const auto kind = vial::eval::attack_from_name(name);
    if (!kind)
      throw vial::ValidationError(
          "unknown attack \"" + name +
          "\" (expected vial, random, cn-san, aa-san, rwwr-san, or vial-b)");

    std::vector<double> scores;
    std::size_t iterations = 0;
    double final_error = 0.0;
    bool iterative = false;
    switch (*kind) {
      case vial::eval::AttackKind::Vial: {
        const vial::TransitionOperator op(net, shares);
        const vial::AttackResult ar = vial::attack(net, op, target, params, args.k);
        scores = ar.votes;
        iterations = ar.iterations_used;
        final_error = ar.final_error;
        iterative = true;
        break;
      }
      case vial::eval::AttackKind::VialB: {
        const vial::AttackResult ar = vial::vial_b(net, target, params, shares, args.k);
        scores = ar.votes;
        iterations = ar.iterations_used;
        final_error = ar.final_error;
        iterative = true;
        break;
      }
      case vial::eval::AttackKind::Random:
        scores = vial::random_baseline(net, 1);
        break;
      case vial::eval::AttackKind::CnSan:
        scores = vial::cn_san(net, target);
        break;
      case vial::eval::AttackKind::AaSan:
        scores = vial::aa_san(net, target);
        break;
      case vial::eval::AttackKind::RwwrSan: {
        vial::RwwrParams rp;
        rp.restart = args.alpha;
        scores = vial::rwwr_san(net, target, rp);
        break;
      }
    }

    std::cout << "attack: " << name << "\n";
    const bool all_zero = std::all_of(scores.begin(), scores.end(),
                                      [](double s) { return s == 0.0; });
    if (all_zero)
      std::cout << "note: every value scored 0; no capacity reached any attribute "
                   "(alpha = 1 keeps everything at the target, whose links are removed)\n";
    std::vector<double> type_scores;
    for (std::uint32_t t = 0; t < net.vocab.type_count(); ++t) {
      const auto sel = vial::predict_topk_type(scores, net.vocab, t, args.k);
      std::cout << " " << net.vocab.type_name(t) << ":\n";
      print_ranking(std::cout, net, sel);
      type_scores.clear();
      for (const auto& rv : sel.ranking) type_scores.push_back(rv.score);
      print_confidence(std::cout, type_scores);
      if (tsv.is_open()) {
        const auto top = sel.topk();
        for (std::size_t i = 0; i < top.size(); ++i)
          tsv << name << '\t' << net.vocab.type_name(t) << '\t' << i + 1 << '\t'
              << net.vocab.value_name(top[i].value) << '\t' << std::setprecision(17)
              << top[i].score << "\n";
      }
    }
    if (iterative)
      std::cout << " iterations: " << iterations << "  final error: " << std::setprecision(6)
                << final_error << "\n";
  }
  return 0;
}

struct EvalArgs {
  std::string snapshot, shares_text, out;
  std::vector<std::string> attacks{};
  std::vector<std::size_t> k_list{};
  double alpha = 0.1;
  double epsilon = 1e-6;
  std::size_t max_iters = 0;
  std::size_t per_value = 5;
  std::size_t min_behaviors = 5;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

int run_eval(const EvalArgs& args) {
  const vial::SbaNetwork net = vial::load_snapshot(args.snapshot);

  std::vector<vial::eval::AttackKind> attacks;
  if (args.attacks.empty()) {
    attacks = {vial::eval::AttackKind::Vial,    vial::eval::AttackKind::Random,
               vial::eval::AttackKind::CnSan,   vial::eval::AttackKind::AaSan,
               vial::eval::AttackKind::RwwrSan, vial::eval::AttackKind::VialB};
  } else {
    for (const std::string& name : args.attacks) {
      const auto kind = vial::eval::attack_from_name(name);
      if (!kind) throw vial::ValidationError("unknown attack \"" + name + "\"");
      attacks.push_back(*kind);
    }
  }

  vial::eval::EvalConfig config;
  config.split.per_value = args.per_value;
  config.split.min_behaviors = args.min_behaviors;
  config.split.trials = args.trials;
  config.split.rng_seed = args.seed;
  config.params.alpha = args.alpha;
  config.params.epsilon = args.epsilon;
  config.params.max_iters = args.max_iters;
  config.shares = parse_shares(args.shares_text);
  config.rwwr_restart = args.alpha;
  config.threads = args.threads;
  if (!args.k_list.empty()) config.k_list = args.k_list;

  const vial::eval::EvalReport report = vial::eval::run_trials(net, attacks, config);

  vial::eval::write_report_table(std::cout, report);
  std::cout << "test instances: " << report.raw_test_instances
            << " raw, " << report.distinct_test_users << " distinct target slots; failures: "
            << report.failures << "\n";
  for (const std::string& w : report.warnings) std::cerr << "warning: " << w << "\n";

  if (!args.out.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(args.out);
    {
      std::ofstream out(fs::path(args.out) / "report.tsv", std::ios::binary);
      vial::eval::write_report_tsv(out, report);
    }
    {
      std::ofstream out(fs::path(args.out) / "report.txt", std::ios::binary);
      vial::eval::write_report_table(out, report);
    }
    const bool has_vial =
        std::find(attacks.begin(), attacks.end(), vial::eval::AttackKind::Vial) != attacks.end();
    if (has_vial && attacks.size() > 1) {
      std::ofstream out(fs::path(args.out) / "gains_vs_vial.tsv", std::ios::binary);
      vial::eval::write_gain_tsv(out, report, vial::eval::AttackKind::Vial);
    }
    if (has_vial && !report.capacity_targets.empty()) {
      std::vector<double> cluster_values, gap_values;
      for (const auto& r : report.capacity_targets)
        if (r.confidence_defined) {
          cluster_values.push_back(r.clusterness);
          gap_values.push_back(r.gap);
        }
      std::sort(cluster_values.begin(), cluster_values.end());
      std::sort(gap_values.begin(), gap_values.end());
      const auto quantiles = [](const std::vector<double>& sorted) {
        std::vector<double> qs;
        for (int d = 0; d < 10 && !sorted.empty(); ++d)
          qs.push_back(sorted[sorted.size() * static_cast<std::size_t>(d) / 10]);
        qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
        return qs;
      };
      std::ofstream out(fs::path(args.out) / "confidence_sweep.tsv", std::ios::binary);
      out << "estimator\tthreshold\tfraction\tkept\tmean_precision\n";
      for (const auto& [label, kind, values] :
           {std::tuple{"clusterness", vial::eval::ConfidenceKind::Clusterness, &cluster_values},
            std::tuple{"gap", vial::eval::ConfidenceKind::Gap, &gap_values}}) {
        const auto curve =
            vial::eval::confidence_sweep(report.capacity_targets, kind, quantiles(*values));
        for (const auto& p : curve)
          out << label << '\t' << std::setprecision(10) << p.threshold << '\t'
              << std::setprecision(6) << p.fraction << '\t' << p.kept << '\t'
              << p.mean_precision << "\n";
      }
    }
    std::cout << "reports written to " << args.out << "\n";
  }
  return 0;
}

int run_verify(std::uint64_t seed) {
  const std::vector<vial::oracle::OracleReport> reports =
      vial::oracle::run_verification_suite(seed);
  bool all_pass = true;
  for (const auto& r : reports) {
    std::cout << r.theorem_id << '\t' << std::scientific << std::setprecision(3)
              << r.max_deviation << '\t' << r.tolerance << '\t'
              << (r.pass ? "PASS" : "FAIL") << "\n";
    std::cout.unsetf(std::ios_base::scientific);
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 1;
}

struct SynthArgs {
  std::string out;
  vial::synth::SynthConfig config;
};

int run_synth(const SynthArgs& args) {
  const vial::synth::SynthData data = vial::synth::generate(args.config);
  vial::synth::write_dataset(data, args.out);
  std::cout << "wrote " << args.out << ": " << format_count(args.config.n_users) << " users, "
            << format_count(data.social.size()) << " social links, "
            << format_count(data.behavior.size()) << " behavior links, "
            << format_count(data.attribute.size()) << " attribute links\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attribute inference attacks on social-behavior-attribute networks"};
  app.require_subcommand(1);

  BuildArgs build_args;
  CLI::App* build = app.add_subcommand("build", "Ingest TSV files into a binary snapshot");
  build->add_option("--social", build_args.social, "social links TSV")->required();
  build->add_option("--behavior", build_args.behavior, "behavior links TSV")->required();
  build->add_option("--attribute", build_args.attribute, "attribute links TSV")->required();
  build->add_option("--vocab", build_args.vocab, "attribute vocabulary TSV")->required();
  build->add_option("--out", build_args.out, "snapshot output path")->required();

  AttackArgs attack_args;
  CLI::App* attack = app.add_subcommand("attack", "Infer one user's attribute values");
  attack->add_option("--snapshot", attack_args.snapshot, "network snapshot")->required();
  attack->add_option("--target", attack_args.target, "user id to attack")->required();
  attack->add_option("--alpha", attack_args.alpha, "backtracking strength in [0,1]");
  attack->add_option("--epsilon", attack_args.epsilon, "convergence threshold");
  attack->add_option("--max-iters", attack_args.max_iters,
                     "iteration cap (0 = floor(log2 |V_s|))");
  attack->add_option("--k", attack_args.k, "ranked values per attribute type");
  attack->add_option("--shares", attack_args.shares_text,
                     "\"WS,WBS,WAS\" or \"per-node:TAU\" (default equal thirds)");
  attack->add_option("--attack", attack_args.attacks,
                     "attack to run (repeatable): vial, random, cn-san, aa-san, rwwr-san, vial-b");
  attack->add_option("--out", attack_args.out, "optional TSV output path");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Multi-trial evaluation with held-out users");
  eval->add_option("--snapshot", eval_args.snapshot, "network snapshot")->required();
  eval->add_option("--attack", eval_args.attacks, "attacks to evaluate (repeatable; default all)");
  eval->add_option("--k", eval_args.k_list, "top-K cutoffs (repeatable; default 1 2 3)");
  eval->add_option("--alpha", eval_args.alpha, "backtracking strength");
  eval->add_option("--epsilon", eval_args.epsilon, "convergence threshold");
  eval->add_option("--max-iters", eval_args.max_iters, "iteration cap (0 = auto)");
  eval->add_option("--shares", eval_args.shares_text, "capacity shares");
  eval->add_option("--per-value", eval_args.per_value, "test users sampled per attribute value");
  eval->add_option("--min-behaviors", eval_args.min_behaviors,
                   "minimum distinct items a test user must have");
  eval->add_option("--trials", eval_args.trials, "number of trials");
  eval->add_option("--seed", eval_args.seed, "sampling seed");
  eval->add_option("--threads", eval_args.threads, "worker threads (0 = all cores)");
  eval->add_option("--out", eval_args.out, "report directory");

  std::uint64_t verify_seed = 7;
  CLI::App* verify = app.add_subcommand("verify", "Check the analytical results on random fixtures");
  verify->add_option("--seed", verify_seed, "fixture seed");

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "Generate a planted-community dataset");
  synth->add_option("--out", synth_args.out, "output directory")->required();
  synth->add_option("--users", synth_args.config.n_users, "number of users");
  synth->add_option("--communities", synth_args.config.n_communities, "number of communities");
  synth->add_option("--p-intra", synth_args.config.p_intra, "social link probability inside a community");
  synth->add_option("--p-inter", synth_args.config.p_inter, "social link probability across communities");
  synth->add_option("--items", synth_args.config.n_items, "number of items");
  synth->add_option("--types", synth_args.config.n_types, "attribute types");
  synth->add_option("--values", synth_args.config.values_per_type, "values per attribute type");
  synth->add_option("--rho-a", synth_args.config.rho_a, "attribute-community correlation");
  synth->add_option("--rho-b", synth_args.config.rho_b, "behavior-community correlation");
  synth->add_option("--behaviors", synth_args.config.behaviors_per_user, "items per user");
  synth->add_option("--seed", synth_args.config.rng_seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return run_build(build_args);
    if (attack->parsed()) return run_attack(attack_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (verify->parsed()) return run_verify(verify_seed);
    if (synth->parsed()) return run_synth(synth_args);
  } catch (const vial::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
