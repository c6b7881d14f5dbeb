#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "vial/synth.hpp"
#include "vial/tsv.hpp"

using namespace vial;
using namespace vial::synth;

namespace {

bool edges_equal(const std::vector<Edge>& a, const std::vector<Edge>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].a != b[i].a || a[i].b != b[i].b || a[i].weight != b[i].weight) return false;
  return true;
}

SynthConfig small_config() {
  SynthConfig cfg;
  cfg.n_users = 400;
  cfg.n_communities = 2;
  cfg.p_intra = 0.05;
  cfg.p_inter = 0.01;
  cfg.n_items = 50;
  cfg.n_types = 2;
  cfg.values_per_type = 4;
  cfg.behaviors_per_user = 5;
  cfg.rng_seed = 77;
  return cfg;
}

}  // namespace

TEST_CASE("generation is deterministic given the seed") {
  auto a = generate(small_config());
  auto b = generate(small_config());
  CHECK(edges_equal(a.social, b.social));
  CHECK(edges_equal(a.behavior, b.behavior));
  CHECK(edges_equal(a.attribute, b.attribute));
  CHECK(a.community == b.community);
  CHECK(a.true_values == b.true_values);

  auto other = small_config();
  other.rng_seed = 78;
  CHECK_FALSE(edges_equal(generate(other).social, a.social));
}

TEST_CASE("communities are contiguous balanced blocks") {
  auto cfg = small_config();
  cfg.n_users = 10;
  cfg.n_communities = 3;
  auto data = generate(cfg);
  // Block starts at c*n/k: sizes 3, 3, 4.
  std::vector<std::uint32_t> expected{0, 0, 0, 1, 1, 1, 2, 2, 2, 2};
  CHECK(data.community == expected);
}

TEST_CASE("each user gets one value per type and the configured item count") {
  auto data = generate(small_config());
  auto net = build(data);
  CHECK(net.n_social() == 400);
  CHECK(net.n_attribute() == 8);
  CHECK(net.vocab.type_count() == 2);
  CHECK(data.attribute.size() == 400 * 2);
  CHECK(data.behavior.size() == 400 * 5);
  for (std::size_t u = 0; u < net.n_social(); ++u) {
    CHECK(net.s2a.row_size(static_cast<std::uint32_t>(u)) == 2);
    CHECK(net.s2b.row_size(static_cast<std::uint32_t>(u)) == 5);  // distinct items
  }
  for (const Edge& e : data.behavior) CHECK(e.weight == 1.0);
  for (const Edge& e : data.social) CHECK(e.weight == 1.0);
}

TEST_CASE("full correlation pins attributes and items to the community") {
  auto cfg = small_config();
  cfg.rho_a = 1.0;
  cfg.rho_b = 1.0;
  auto data = generate(cfg);
  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    const auto c = data.community[u];
    REQUIRE(data.true_values[u].size() == 2);
    // Dominant value of type t is ordinal c: global index t*values_per_type + c.
    CHECK(data.true_values[u][0] == c);
    CHECK(data.true_values[u][1] == cfg.values_per_type + c);
  }
  // Every behavior edge lands in the community pool: item index = c (mod 2).
  for (const Edge& e : data.behavior) {
    const auto u = std::stoul(e.a.substr(1));
    const auto item = std::stoul(e.b.substr(1));
    CHECK(item % cfg.n_communities == data.community[u]);
  }
}

TEST_CASE("attribute frequency tracks the correlation parameter") {
  auto cfg = small_config();
  cfg.n_users = 10000;
  cfg.p_intra = 0.001;
  cfg.p_inter = 0.0002;
  cfg.rho_a = 0.7;
  cfg.behaviors_per_user = 0;
  auto data = generate(cfg);
  std::size_t dominant = 0, total = 0;
  for (std::size_t u = 0; u < cfg.n_users; ++u)
    for (std::size_t t = 0; t < cfg.n_types; ++t) {
      ++total;
      if (data.true_values[u][t] == t * cfg.values_per_type + data.community[u]) ++dominant;
    }
  // Adoption is Bernoulli(rho_a) per (user, type); allow 3 binomial sigma.
  const double n = static_cast<double>(total);
  const double sigma = std::sqrt(cfg.rho_a * (1 - cfg.rho_a) / n);
  CHECK(std::abs(static_cast<double>(dominant) / n - cfg.rho_a) <= 3 * sigma);
}

TEST_CASE("infeasible configurations are rejected") {
  auto cfg = small_config();
  cfg.values_per_type = 1;  // fewer values than communities
  CHECK_THROWS_AS(generate(cfg), ValidationError);
  cfg = small_config();
  cfg.behaviors_per_user = 100;  // more than n_items
  CHECK_THROWS_AS(generate(cfg), ValidationError);
  cfg = small_config();
  cfg.n_communities = 1;
  CHECK_THROWS_AS(generate(cfg), ValidationError);
  cfg = small_config();
  cfg.p_intra = 1.5;
  CHECK_THROWS_AS(generate(cfg), ValidationError);
  cfg = small_config();
  cfg.rho_a = -0.1;
  CHECK_THROWS_AS(generate(cfg), ValidationError);
}

TEST_CASE("saturated item demand still yields distinct items") {
  auto cfg = small_config();
  cfg.n_users = 20;
  cfg.n_items = 6;
  cfg.behaviors_per_user = 6;  // forces the fallback path
  cfg.rho_b = 1.0;             // pool has only 3 items, demand is 6
  auto data = generate(cfg);
  auto net = build(data);
  for (std::uint32_t u = 0; u < net.n_social(); ++u)
    CHECK(net.s2b.row_size(u) == 6);
}

TEST_CASE("written datasets reload identically") {
  namespace fs = std::filesystem;
  const std::string dir = "synth_test_out";
  auto cfg = small_config();
  cfg.n_users = 60;
  auto data = generate(cfg);
  write_dataset(data, dir);
  for (const char* name :
       {"social.tsv", "behavior.tsv", "attribute.tsv", "vocab.tsv", "manifest.tsv"})
    CHECK(fs::exists(fs::path(dir) / name));

  auto from_disk = load_network_from_tsv({dir + "/social.tsv", dir + "/behavior.tsv",
                                          dir + "/attribute.tsv", dir + "/vocab.tsv"});
  auto direct = build(data);
  CHECK(from_disk.n_social() == direct.n_social());
  CHECK(from_disk.n_behavior() == direct.n_behavior());
  CHECK(from_disk.n_social_links() == direct.n_social_links());
  CHECK(from_disk.n_behavior_links() == direct.n_behavior_links());
  CHECK(from_disk.n_attribute_links() == direct.n_attribute_links());
  CHECK(from_disk.deg_total == direct.deg_total);

  // Rewriting produces byte-identical files.
  std::stringstream first;
  first << std::ifstream((fs::path(dir) / "social.tsv")).rdbuf();
  write_dataset(data, dir);
  std::stringstream second;
  second << std::ifstream((fs::path(dir) / "social.tsv")).rdbuf();
  CHECK(first.str() == second.str());
  CHECK_FALSE(first.str().empty());
  fs::remove_all(dir);
}
