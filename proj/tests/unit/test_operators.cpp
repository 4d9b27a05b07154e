#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"
#include "doctest.h"
#include "mpgen/operators.hpp"

using namespace mpgen;

namespace {

EnumOperator at_stage_zero(std::vector<Axiom> axioms) {
  std::vector<StagedAxiom> staged;
  for (auto& a : axioms) staged.push_back({std::move(a), 0});
  return EnumOperator(std::move(staged));
}

}  // namespace

TEST_CASE("eval on examples") {
  const auto unconditional = at_stage_zero({Axiom({}, 4)});
  CHECK(eval(unconditional, PartialGraph::explicit_map({}), 0) == std::set<Natural>{4});
  CHECK(eval(unconditional, PartialGraph::cofinite_ones({}), 9) == std::set<Natural>{4});

  const auto guarded = at_stage_zero({Axiom({pair(3, 1)}, 9)});
  CHECK(eval(guarded, PartialGraph::explicit_map({{3, 1}}), 20) == std::set<Natural>{9});
  CHECK(eval(guarded, PartialGraph::explicit_map({}), 20).empty());

  const EnumOperator late({{Axiom({pair(1, 1)}, 42), 1}});
  for (Stage s = 0; s < 50; ++s) CHECK(eval(late, PartialGraph::cofinite_ones({1}), s).empty());
  CHECK(eval(late, PartialGraph::cofinite_ones({}), 0).empty());
  CHECK(eval(late, PartialGraph::cofinite_ones({}), 1) == std::set<Natural>{42});
}

TEST_CASE("use_of on examples") {
  const auto unconditional = at_stage_zero({Axiom({}, 4)});
  CHECK(use_of(unconditional, PartialGraph::explicit_map({}), 0, 4) == Natural{0});
  CHECK_FALSE(use_of(unconditional, PartialGraph::explicit_map({}), 0, 7).has_value());

  // The least n with pair(3,1) below n, found by scanning the coding.
  Natural expected_use = 0;
  while (oracle::diagonal_pair(3, 1) >= expected_use) ++expected_use;
  const auto guarded = at_stage_zero({Axiom({pair(3, 1)}, 9)});
  CHECK(use_of(guarded, PartialGraph::explicit_map({{3, 1}}), 12, 9) == expected_use);
  CHECK(expected_use == 12);
}

TEST_CASE("enumerate_outputs on examples") {
  CHECK(enumerate_outputs(at_stage_zero({Axiom({}, 4)}), PartialGraph::explicit_map({}), 0) ==
        std::map<Natural, Natural>{{4, 0}});
  const auto two = at_stage_zero({Axiom({}, 4), Axiom({pair(3, 1)}, 9)});
  const auto g = PartialGraph::explicit_map({{3, 1}});
  CHECK(eval(two, g, 0) == std::set<Natural>{4, 9});
  const auto only_guarded = at_stage_zero({Axiom({pair(3, 1)}, 9)});
  CHECK(enumerate_outputs(only_guarded, g, 0) == std::map<Natural, Natural>{{9, 12}});
  CHECK(enumerate_outputs(EnumOperator{}, g, 0).empty());
}

TEST_CASE("duplicate axioms keep their earliest stage") {
  const EnumOperator w({{Axiom({5, 2, 5}, 1), 9}, {Axiom({2, 5}, 1), 4}});
  REQUIRE(w.axioms().size() == 1);
  CHECK(w.axioms()[0].appears_at == 4);
  CHECK(w.axioms()[0].axiom.premise == std::vector<Code>{2, 5});
  CHECK(w.axioms()[0].axiom.use() == 6);
}

TEST_CASE("use_bound_violation") {
  CHECK_FALSE(EnumOperator({{Axiom({11}, 0), 12}}).use_bound_violation().has_value());
  CHECK(EnumOperator({{Axiom({11}, 0), 11}}).use_bound_violation().has_value());
}

TEST_CASE("eval is monotone in the oracle") {
  gen::Rng rng(101);
  for (int i = 0; i < 1000; ++i) {
    const auto w = gen::op(rng);
    const auto [f, g] = gen::nested_graphs(rng);
    const Stage s = rng.below(80);
    const auto ef = eval(w, f, s);
    const auto eg = eval(w, g, s);
    REQUIRE(std::includes(eg.begin(), eg.end(), ef.begin(), ef.end()));
  }
}

TEST_CASE("eval is monotone in the stage") {
  gen::Rng rng(202);
  for (int i = 0; i < 1000; ++i) {
    const auto w = gen::op(rng);
    const auto g = gen::graph(rng);
    const Stage s = rng.below(80);
    const Stage later = s + rng.below(80);
    const auto a = eval(w, g, s);
    const auto b = eval(w, g, later);
    REQUIRE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }
}

TEST_CASE("uses are sound") {
  gen::Rng rng(303);
  for (int i = 0; i < 1000; ++i) {
    const auto w = gen::op(rng);
    const auto g = gen::graph(rng);
    const Stage s = rng.below(80);
    for (const auto& [k, use] : enumerate_outputs(w, g, s)) {
      REQUIRE(use_of(w, g, s, k) == use);
      // Restricting the oracle to codes below the use keeps k enumerated.
      std::map<Natural, Bit> restricted;
      for (Natural n = 0; n < gen::kPoints + 4; ++n)
        if (auto b = g.at(n); b && pair(n, *b) < use) restricted[n] = *b;
      REQUIRE(eval(w, PartialGraph::explicit_map(restricted), s).contains(k));
    }
    for (Natural k = 0; k < 8; ++k) REQUIRE(use_of(w, g, s, k).has_value() == eval(w, g, s).contains(k));
  }
}
