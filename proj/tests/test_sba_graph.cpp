#include <doctest.h>

#include <algorithm>
#include <set>

#include "vial/fixtures.hpp"
#include "vial/sba_graph.hpp"

using namespace vial;

namespace {

SbaNetwork fig_network() {
  // Six users; u1 shares item b1 with u2 and u4, u5/u6 hold attribute values.
  std::vector<Edge> social = {{"u1", "u2"}, {"u2", "u3"}, {"u3", "u5"},
                              {"u4", "u5"}, {"u5", "u6"}};
  std::vector<Edge> behavior = {{"u1", "b1"}, {"u2", "b1"}, {"u4", "b1"}, {"u3", "b2"}};
  std::vector<Edge> attribute = {{"u5", "a1"}, {"u6", "a2"}, {"u4", "a1"}};
  std::vector<VocabEntry> vocab = {{"a1", "city"}, {"a2", "city"}};
  return build_network(social, behavior, attribute, vocab);
}

std::set<std::uint32_t> hop2_brute(const SbaNetwork& net, std::uint32_t u, NodeKind via) {
  const Adjacency& fwd = via == NodeKind::Behavior ? net.s2b : net.s2a;
  std::set<std::uint32_t> mine(fwd.nbr.begin() + fwd.row_begin(u),
                               fwd.nbr.begin() + fwd.row_end(u));
  std::set<std::uint32_t> out;
  for (std::uint32_t x = 0; x < net.n_social(); ++x) {
    bool shares = false;
    for (std::size_t i = fwd.row_begin(x); i < fwd.row_end(x) && !shares; ++i)
      shares = mine.count(fwd.nbr[i]) > 0;
    if (shares) out.insert(x);
  }
  return out;
}

}  // namespace

TEST_CASE("triangle social graph has degree 2 everywhere") {
  auto net = build_network({{"a", "b"}, {"b", "c"}, {"c", "a"}}, {}, {}, {});
  REQUIRE(net.n_social() == 3);
  CHECK(net.n_social_links() == 3);
  for (std::uint32_t u = 0; u < 3; ++u) {
    CHECK(net.deg_social[u] == doctest::Approx(2.0));
    CHECK(net.deg_total[u] == doctest::Approx(2.0));
  }
}

TEST_CASE("duplicate social edges collapse by weight sum, both orientations") {
  auto net = build_network({{"a", "b", 1.0}, {"b", "a", 1.0}, {"a", "b", 0.5}}, {}, {}, {});
  CHECK(net.n_social_links() == 1);
  CHECK(net.deg_social[0] == doctest::Approx(2.5));
  CHECK(net.deg_social[1] == doctest::Approx(2.5));
}

TEST_CASE("ids are interned in first-seen order across edge lists") {
  auto net = build_network({{"x", "y"}}, {{"z", "item"}}, {}, {});
  REQUIRE(net.n_social() == 3);
  CHECK(net.social_ids[0] == "x");
  CHECK(net.social_ids[1] == "y");
  CHECK(net.social_ids[2] == "z");
  CHECK(net.social_index("z") == std::uint32_t{2});
  CHECK_FALSE(net.social_index("w").has_value());
  CHECK(net.node_id({NodeKind::Social, 1}) == "y");
  CHECK(net.node_id({NodeKind::Behavior, 0}) == "item");
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(build_network({{"a", "a"}}, {}, {}, {}), ValidationError);
  CHECK_THROWS_AS(build_network({{"a", "b", 0.0}}, {}, {}, {}), ValidationError);
  CHECK_THROWS_AS(build_network({{"a", "b", -1.0}}, {}, {}, {}), ValidationError);
  CHECK_THROWS_AS(build_network({{"", "b"}}, {}, {}, {}), ValidationError);
  CHECK_THROWS_AS(build_network({}, {}, {{"u", "nosuch"}}, {{"a1", "city"}}),
                  VocabularyError);
  CHECK_THROWS_AS(AttributeVocabulary::from_pairs({{"a1", "city"}, {"a1", "major"}}),
                  VocabularyError);
}

TEST_CASE("vocabulary groups values under types in first-seen order") {
  auto v = AttributeVocabulary::from_pairs(
      {{"CS", "major"}, {"NYC", "city"}, {"Bio", "major"}});
  REQUIRE(v.value_count() == 3);
  REQUIRE(v.type_count() == 2);
  CHECK(v.type_name(0) == "major");
  CHECK(v.type_name(1) == "city");
  CHECK(v.type_of(*v.value_index("Bio")) == 0);
  CHECK(v.values_of(0) == std::vector<std::uint32_t>{0, 2});
  CHECK_FALSE(v.value_index("Physics").has_value());
  CHECK_FALSE(v.type_index("employer").has_value());
}

TEST_CASE("behavior-sharing neighborhood includes the node itself") {
  auto net = fig_network();
  auto u1 = *net.social_index("u1");
  auto got = hop2_neighbors(net, {NodeKind::Social, u1}, NodeKind::Behavior);
  std::set<std::string> ids;
  for (auto ref : got) ids.insert(net.node_id(ref));
  CHECK(ids == std::set<std::string>{"u1", "u2", "u4"});
}

TEST_CASE("hop-2 neighborhood is empty without links of that kind") {
  auto net = fig_network();
  auto u6 = *net.social_index("u6");
  CHECK(hop2_neighbors(net, {NodeKind::Social, u6}, NodeKind::Behavior).empty());
  auto via_attr = hop2_neighbors(net, {NodeKind::Social, u6}, NodeKind::Attribute);
  CHECK(via_attr.size() == 1);  // a2 has no other holder
  CHECK(net.node_id(via_attr[0]) == "u6");
}

TEST_CASE("hop-2 neighborhood rejects non-social nodes") {
  auto net = fig_network();
  CHECK_THROWS_AS(hop2_neighbors(net, {NodeKind::Behavior, 0}, NodeKind::Behavior),
                  KindError);
  CHECK_THROWS_AS(hop2_neighbors(net, {NodeKind::Social, 99}, NodeKind::Behavior),
                  LookupError);
}

TEST_CASE("hop-2 neighborhoods match a brute-force pair scan") {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    auto net = fixtures::random_network({.n_social = 40,
                                         .n_behavior = 12,
                                         .values_per_type = 3,
                                         .extra_social_per_node = 2.0,
                                         .seed = seed});
    for (std::uint32_t u = 0; u < net.n_social(); ++u) {
      for (NodeKind via : {NodeKind::Behavior, NodeKind::Attribute}) {
        auto fast = hop2_neighbors(net, {NodeKind::Social, u}, via);
        std::set<std::uint32_t> fast_set;
        for (auto ref : fast) fast_set.insert(ref.index);
        CHECK(fast_set == hop2_brute(net, u, via));
      }
    }
  }
}

TEST_CASE("degree sums double-count each side of every link class") {
  auto net = fixtures::random_network({.n_social = 60, .seed = 11});
  auto total = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s;
  };
  double social_weight = 0;
  for (double w : net.social_adj.wgt) social_weight += w;
  CHECK(total(net.deg_social) == doctest::Approx(social_weight).epsilon(1e-12));
  CHECK(total(net.deg_behavior) ==
        doctest::Approx(total(net.deg_behavior_social)).epsilon(1e-12));
  CHECK(total(net.deg_attribute) ==
        doctest::Approx(total(net.deg_attribute_social)).epsilon(1e-12));
  for (std::size_t u = 0; u < net.n_social(); ++u)
    CHECK(net.deg_total[u] == doctest::Approx(net.deg_social[u] + net.deg_behavior[u] +
                                              net.deg_attribute[u]));
}

TEST_CASE("removing attribute links strips exactly the listed users") {
  auto net = fig_network();
  auto u5 = *net.social_index("u5");
  auto [reduced, truth] = remove_attribute_links(net, {{NodeKind::Social, u5}});
  CHECK(reduced.deg_attribute[u5] == 0.0);
  CHECK(reduced.n_attribute_links() == net.n_attribute_links() - 1);
  REQUIRE(truth.count(u5) == 1);
  REQUIRE(truth.at(u5).size() == 1);
  CHECK(net.vocab.value_name(truth.at(u5)[0]) == "a1");
  // Other users keep their links and degrees.
  auto u4 = *net.social_index("u4");
  CHECK(reduced.deg_attribute[u4] == doctest::Approx(net.deg_attribute[u4]));
  CHECK(reduced.deg_social == net.deg_social);
}

TEST_CASE("removing attribute links of nobody is the identity") {
  auto net = fig_network();
  auto [reduced, truth] = remove_attribute_links(net, {});
  CHECK(truth.empty());
  CHECK(reduced.s2a.nbr == net.s2a.nbr);
  CHECK(reduced.s2a.wgt == net.s2a.wgt);
  CHECK(reduced.a2s.nbr == net.a2s.nbr);
}

TEST_CASE("user without attribute links yields an empty truth entry") {
  auto net = fig_network();
  auto u1 = *net.social_index("u1");
  auto [reduced, truth] = remove_attribute_links(net, {{NodeKind::Social, u1}});
  REQUIRE(truth.count(u1) == 1);
  CHECK(truth.at(u1).empty());
  CHECK(reduced.n_attribute_links() == net.n_attribute_links());
  CHECK_THROWS_AS(remove_attribute_links(net, {{NodeKind::Behavior, 0}}), KindError);
}
