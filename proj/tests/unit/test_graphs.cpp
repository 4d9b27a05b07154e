#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "../support/generators.hpp"
#include "doctest.h"
#include "mpgen/graphs.hpp"

using namespace mpgen;

TEST_CASE("membership of codes") {
  const auto f = PartialGraph::cofinite_ones({2, 5});
  CHECK(f.contains(pair(3, 1)));
  CHECK_FALSE(f.contains(pair(2, 1)));
  CHECK_FALSE(f.contains(pair(3, 0)));
  const auto g = PartialGraph::explicit_map({{4, 0}});
  CHECK_FALSE(g.contains(pair(4, 1)));
  CHECK(g.contains(pair(4, 0)));
  CHECK(g.at(4) == Bit{0});
  CHECK_FALSE(g.at(5).has_value());
  CHECK_THROWS(PartialGraph::explicit_map({{1, 2}}));
}

TEST_CASE("extends on examples") {
  CHECK(extends(PartialGraph::cofinite_ones({2, 5, 9}), PartialGraph::cofinite_ones({2, 5})));
  CHECK_FALSE(extends(PartialGraph::cofinite_ones({2}), PartialGraph::cofinite_ones({3})));
  CHECK(extends(PartialGraph::explicit_map({{1, 1}}), PartialGraph::cofinite_ones({})));
  CHECK_FALSE(extends(PartialGraph::explicit_map({{1, 0}}), PartialGraph::cofinite_ones({})));
  CHECK_FALSE(extends(PartialGraph::cofinite_ones({}), PartialGraph::explicit_map({{1, 1}})));
  CHECK(extends(PartialGraph::explicit_map({}), PartialGraph::explicit_map({{0, 0}})));
}

TEST_CASE("extends is a partial order on random graphs") {
  gen::Rng rng(7);
  std::vector<PartialGraph> pool;
  for (int i = 0; i < 120; ++i) {
    auto [f, g] = gen::nested_graphs(rng);
    pool.push_back(std::move(f));
    pool.push_back(std::move(g));
  }
  for (const auto& a : pool) REQUIRE(extends(a, a));
  for (const auto& a : pool)
    for (const auto& b : pool) {
      if (extends(a, b) && extends(b, a)) {
        // Equal graphs may differ only in representation; compare pointwise.
        for (Natural n = 0; n < gen::kPoints + 8; ++n) REQUIRE(a.at(n) == b.at(n));
      }
      if (!extends(a, b)) continue;
      for (const auto& c : pool)
        if (extends(b, c)) REQUIRE(extends(a, c));
    }
}

TEST_CASE("extends agrees with pointwise inclusion") {
  gen::Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto a = gen::graph(rng);
    const auto b = gen::graph(rng);
    bool pointwise = true;
    // Cofinite graphs are total beyond their exceptions, so an explicit
    // graph never contains one; the window covers every explicit key.
    if (a.is_cofinite() && !b.is_cofinite()) pointwise = false;
    for (Natural n = 0; n < gen::kPoints + 4 && pointwise; ++n)
      if (a.at(n) && a.at(n) != b.at(n)) pointwise = false;
    REQUIRE(extends(a, b) == pointwise);
  }
}

TEST_CASE("check_description") {
  std::vector<Bit> ones(100, 1);
  auto clean = check_description(PartialGraph::cofinite_ones({}), ones, 100);
  CHECK(clean.clean());
  CHECK(clean.domain_partial_density == Rational(1, 1));

  auto bad = check_description(PartialGraph::explicit_map({{4, 0}}), ones, 10);
  CHECK(bad.error_points == std::vector<Natural>{4});
  CHECK(bad.domain_partial_density == Rational(1, 10));
  CHECK(bad.checked_bound == 10);
}

TEST_CASE("domain density") {
  CHECK(domain_density(PartialGraph::cofinite_ones({1, 3}), 10) == Rational(8, 10));
  CHECK(domain_density(PartialGraph::explicit_map({{0, 1}, {20, 0}}), 10) == Rational(1, 10));
}
