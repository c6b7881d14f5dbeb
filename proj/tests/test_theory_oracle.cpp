#include <doctest.h>

#include <cmath>

#include "vial/fixtures.hpp"
#include "vial/theory_oracle.hpp"

using namespace vial;
using namespace vial::oracle;

TEST_CASE("connectivity spans all three link classes") {
  auto joined = build_network({{"a", "b"}}, {{"b", "y1"}, {"c", "y1"}},
                              {{"c", "v1"}, {"d", "v1"}}, {{"v1", "city"}});
  CHECK(is_connected(joined));
  auto split = build_network({{"a", "b"}, {"c", "d"}}, {}, {}, {});
  CHECK_FALSE(is_connected(split));
  CHECK(is_connected(build_network({{"a", "b"}}, {}, {}, {})));
}

TEST_CASE("direct solve collapses to the seed vector at full backtracking") {
  auto net = fixtures::random_connected(41, 25);
  auto votes = closed_form_votes(net, Shares::equal(), {NodeKind::Social, 7}, 1.0);
  CHECK(votes[7] == doctest::Approx(25.0).epsilon(1e-12));
  for (std::size_t u = 0; u < votes.size(); ++u)
    if (u != 7) CHECK(std::abs(votes[u]) < 1e-12);
}

TEST_CASE("direct solve conserves the total capacity") {
  auto net = fixtures::random_connected(43, 60);
  for (double alpha : {0.05, 0.3, 0.9}) {
    auto votes = closed_form_votes(net, Shares::equal(), {NodeKind::Social, 3}, alpha);
    double sum = 0;
    for (double x : votes) sum += x;
    CHECK(sum == doctest::Approx(60.0).epsilon(1e-10));
  }
}

TEST_CASE("direct solve validates alpha and the target") {
  auto net = fixtures::random_connected(44, 10);
  CHECK_THROWS_AS(closed_form_votes(net, Shares::equal(), {NodeKind::Social, 0}, 0.0),
                  ValidationError);
  CHECK_THROWS_AS(closed_form_votes(net, Shares::equal(), {NodeKind::Social, 0}, 1.1),
                  ValidationError);
  CHECK_THROWS_AS(closed_form_votes(net, Shares::equal(), {NodeKind::Behavior, 0}, 0.5),
                  KindError);
  CHECK_THROWS_AS(closed_form_votes(net, Shares::equal(), {NodeKind::Social, 0}, 0.5, 5),
                  SizeError);
}

TEST_CASE("triangle walk settles on the uniform distribution") {
  auto net = build_network({{"a", "b"}, {"b", "c"}, {"c", "a"}}, {{"a", "y"}}, {}, {});
  auto pi = stationary_distribution(net, Shares::equal());
  // The behavior link at one corner perturbs uniformity only through that
  // node's split, so check the exact stationary property instead of 1/3.
  double sum = 0;
  for (double p : pi) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  auto sym = build_network({{"a", "b"}, {"b", "c"}, {"c", "a"}},
                           {{"a", "y"}, {"b", "y"}, {"c", "y"}}, {}, {});
  auto pi_sym = stationary_distribution(sym, Shares::equal());
  for (double p : pi_sym) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("stationary distribution refuses disconnected networks") {
  auto split = build_network({{"a", "b"}, {"c", "d"}}, {}, {}, {});
  CHECK_THROWS_AS(stationary_distribution(split, Shares::equal()), ValidationError);
}

TEST_CASE("degree shares predict the undamped limit on a symmetric triangle") {
  // All degrees equal, so every node ends at exactly one unit of capacity.
  auto net = build_network({{"a", "b"}, {"b", "c"}, {"c", "a"}},
                           {{"a", "y"}, {"b", "y"}, {"c", "y"}}, {}, {});
  auto report = corollary_check(net, 1.0, {NodeKind::Social, 0});
  CHECK(report.pass);
  CHECK(report.max_deviation <= 1e-8);
  CHECK(report.theorem_id == "corollary-1");
}

TEST_CASE("the degree-share limit does not depend on tau") {
  auto net = fixtures::random_connected(45, 30);
  auto a = corollary_check(net, 0.5, {NodeKind::Social, 2});
  auto b = corollary_check(net, 5.0, {NodeKind::Social, 2});
  CHECK(a.pass);
  CHECK(b.pass);
}

TEST_CASE("corollary check requires connectivity") {
  auto split = build_network({{"a", "b"}, {"c", "d"}}, {}, {}, {});
  CHECK_THROWS_AS(corollary_check(split, 1.0, {NodeKind::Social, 0}), ValidationError);
}

TEST_CASE("enumerated metrics handle the canonical tie cases") {
  // Two tied values, truth holds one: half credit.
  auto two_way = brute_force_metrics({1.0, 1.0}, {0}, 1);
  CHECK(two_way.precision == 0.5);
  CHECK(*two_way.recall == 0.5);
  // Five-way tie, one truth, K=1: one fifth.
  auto five = brute_force_metrics({2.0, 2.0, 2.0, 2.0, 2.0}, {3}, 1);
  CHECK(five.precision == doctest::Approx(0.2));
  // No ties: plain counting.
  auto plain = brute_force_metrics({5.0, 4.0, 3.0}, {1}, 2);
  CHECK(plain.precision == 0.5);
  CHECK(*plain.recall == 1.0);
  CHECK_THROWS_AS(brute_force_metrics(std::vector<double>(11, 0.0), {}, 1), SizeError);
  CHECK_THROWS_AS(brute_force_metrics({1.0}, {}, 0), ValidationError);
}

TEST_CASE("enumerated and analytic tie metrics agree bit for bit") {
  // Beyond the seeded suite: a handful of adversarial hand-built cases.
  struct Case {
    std::vector<double> scores;
    std::vector<std::uint32_t> truth;
    std::size_t k;
  };
  const Case cases[] = {
      {{1, 1, 1, 1}, {0, 2}, 2},
      {{2, 1, 1, 0}, {1}, 2},
      {{3, 3, 2, 2, 2}, {0, 4}, 3},
      {{0, 0, 0}, {}, 2},
      {{5, 4, 4, 4, 4, 1}, {2, 3}, 4},
  };
  for (const auto& c : cases) {
    auto fast = eval::metrics_topk(c.scores, c.truth, c.k);
    auto slow = brute_force_metrics(c.scores, c.truth, c.k);
    CHECK(fast.precision == slow.precision);
    REQUIRE(fast.recall.has_value() == slow.recall.has_value());
    if (fast.recall) CHECK(*fast.recall == *slow.recall);
  }
}

TEST_CASE("the full verification suite passes end to end") {
  auto reports = run_verification_suite(7);
  REQUIRE(reports.size() == 5);
  for (const auto& r : reports) {
    INFO(r.theorem_id, " deviation ", r.max_deviation, " tolerance ", r.tolerance);
    CHECK(r.pass);
  }
  // A different seed still passes: the results are analytic, not tuned.
  for (const auto& r : run_verification_suite(12345)) CHECK(r.pass);
}
