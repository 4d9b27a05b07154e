#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "../support/oracles.hpp"
#include "doctest.h"
#include "mpgen/analysis.hpp"
#include "mpgen/config.hpp"
#include "mpgen/scenarios.hpp"

using namespace mpgen;

namespace {

FunctionalSuite functionals(std::vector<FunctionalSpec> specs, Stage horizon = 256) {
  return build_suite({std::move(specs), {}}, {horizon, 0, {}}).functionals;
}

FunctionalSuite constant_suite(Bit v) { return functionals({{spec::TotalConst{v}}}); }

EnumOperator op(std::vector<StagedAxiom> axioms) { return EnumOperator(std::move(axioms)); }

Trace scenario_trace(Stage horizon = 5) { return run(constant_suite(0), {horizon, {}}); }

Trace forged(std::vector<std::pair<Stage, Action>> actions, std::vector<std::pair<Stage, Removal>> removals,
             Stage horizon) {
  Trace t;
  for (Stage s = 0; s < horizon; ++s) t.events.push_back({s, std::nullopt, {}, std::nullopt});
  for (auto& [s, a] : actions) t.events[s].action = a;
  for (auto& [s, r] : removals) t.events[s].removals.push_back(r);
  // The summary is rebuilt the lenient way so only the targeted check fires.
  t.summary.horizon = horizon;
  t.summary = TraceReplay(t).summary();
  return t;
}

const CheckResult& get(const VerificationReport& r, const std::string& name) {
  const auto* c = r.find(name);
  REQUIRE(c != nullptr);
  return *c;
}

}  // namespace

TEST_CASE("derive_x on the constant-zero scenario") {
  const auto suite = constant_suite(0);
  const auto trace = scenario_trace();
  const auto x = derive_x(trace, suite, 0, 8);
  CHECK(x.bits == std::vector<Bit>(8, 1));
  CHECK(x.diagonal_witnesses == std::vector<Natural>{1});
  // Phi_0 converges on 1 and 3 by stage 5, both to 0, and X_0 is 1 there.
  CHECK(x.disagreements == std::vector<Natural>{1, 3});
  CHECK(phi_eval(suite, 0, 1, 5) == Bit{0});
}

TEST_CASE("derive_x on the constant-one scenario") {
  const auto suite = constant_suite(1);
  const auto trace = run(suite, {5, {}});
  const auto plain = oracle::construct(suite, 5);
  REQUIRE(plain.members[0] == std::set<Natural>{1});
  const auto x = derive_x(trace, suite, 0, 8);
  CHECK(x.bits[1] == 0);
  for (Natural n = 0; n < 8; ++n)
    if (n != 1) CHECK(x.bits[n] == 1);
}

TEST_CASE("derive_x on an empty suite") {
  const auto trace = run(FunctionalSuite{}, {50, {}});
  for (unsigned j = 0; j < 2; ++j) {
    const auto x = derive_x(trace, FunctionalSuite{}, j, 64);
    CHECK(x.bits == std::vector<Bit>(64, 1));
    CHECK(x.diagonal_witnesses.empty());
  }
}

TEST_CASE("the constructed description describes X on the scenario") {
  const auto trace = scenario_trace();
  const auto x = derive_x(trace, constant_suite(0), 0, 16);
  const auto rep = check_description(TraceReplay(trace).description(0, 5), x.bits, 16);
  CHECK(rep.clean());
  CHECK(rep.domain_partial_density == Rational(15, 16));
}

TEST_CASE("psi takes the least stage at which both sides agree") {
  const auto trace = run(FunctionalSuite{}, {20, {}});
  {
    const OperatorSuite ops({op({{Axiom({}, pair(5, 1)), 0}}), op({{Axiom({}, pair(5, 1)), 0}})});
    const auto psi = synthesize_psi(trace, ops, 0, 1);
    REQUIRE(psi.entries.size() == 1);
    CHECK(psi.entries.at(5) == PsiEntry{1, 0});
  }
  {
    const OperatorSuite ops(
        {op({{Axiom({}, pair(5, 0)), 3}}), op({{Axiom({}, pair(5, 1)), 3}, {Axiom({}, pair(5, 0)), 10}})});
    const auto psi = synthesize_psi(trace, ops, 0, 1);
    REQUIRE(psi.entries.size() == 1);
    CHECK(psi.entries.at(5) == PsiEntry{0, 10});
  }
  {
    // f_{j,s} never takes the value 0, so these premises are never met.
    const OperatorSuite ops({op({{Axiom({pair(0, 0)}, pair(5, 1)), 1}}), op({{Axiom({pair(0, 0)}, pair(5, 1)), 1}})});
    CHECK(synthesize_psi(trace, ops, 0, 1).entries.empty());
  }
}

TEST_CASE("psi is total below the horizon for unconditional all-ones operators") {
  constexpr Stage kT = 30;
  const auto trace = run(constant_suite(0), {kT, {}});
  const OperatorSpec ones{spec::Reduction{TargetRule::ones, kT, GuardRule::none, 1, 0}};
  const OperatorSuite ops({compile_operator(ones, kT), compile_operator(ones, kT)});
  const auto psi = synthesize_psi(trace, ops, 0, 1);
  for (Natural n = 0; n + 1 < kT; ++n) {
    REQUIRE(psi.entries.contains(n));
    CHECK(psi.entries.at(n).value == 1);
  }
}

TEST_CASE("a wrong value on one side leaves psi undefined there") {
  const auto trace = run(FunctionalSuite{}, {40, {}});
  std::vector<StagedAxiom> left, right;
  for (Natural n = 0; n < 20; ++n) {
    left.push_back({Axiom({}, pair(n, n % 2)), n + 1});
    right.push_back({Axiom({}, pair(n, n == 7 ? 1 - n % 2 : n % 2)), n + 1});
  }
  const auto psi = synthesize_psi(trace, OperatorSuite({op(left), op(right)}), 0, 1);
  CHECK_FALSE(psi.entries.contains(7));
  CHECK(psi.entries.size() == 19);
}

TEST_CASE("property 3 on hand-built operators") {
  const auto trace = scenario_trace();
  const OperatorSuite unconditional({op({{Axiom({}, 42), 0}}), op({{Axiom({}, 42), 0}})});
  CHECK(check_property3(trace, unconditional, 0, 1).verdict == Verdict::pass);

  // Side 0 loses its premise when 1 enters A_0 at stage 2; side 1 keeps 42.
  const OperatorSuite injured({op({{Axiom({pair(1, 1)}, 42), 0}}), op({{Axiom({}, 42), 0}})});
  CHECK(check_property3(trace, injured, 0, 1).verdict == Verdict::pass);
  const TraceReplay replay(trace);
  CHECK(eval(injured.at(0), replay.description(0, 2), 2).contains(42));
  CHECK_FALSE(eval(injured.at(0), replay.description(0, 3), 3).contains(42));

  // Both sides guarded by the point the construction takes for A_0.
  const OperatorSuite both({op({{Axiom({pair(1, 1)}, 42), 0}}), op({{Axiom({pair(3, 1)}, 42), 0}})});
  const auto res = check_property3(trace, both, 0, 1);
  CHECK(res.verdict == Verdict::fail);
  REQUIRE(res.counterexample.has_value());
  CHECK(res.counterexample->element == Natural{42});
}

TEST_CASE("the battery passes and skip-removals is caught") {
  const auto battery = scenarios::property3_battery();
  CHECK(battery.size() >= 10);
  bool caught = false;
  for (const auto& sc : battery) {
    const auto suites = build_suites(sc.config);
    const auto good = run(suites.functionals, {sc.config.horizon, {}});
    CHECK_MESSAGE(check_property3(good, suites.operators, sc.e0, sc.e1).verdict == Verdict::pass, sc.name);
    const auto bad = run(suites.functionals, {sc.config.horizon, {0, Mutation::skip_removals}});
    const auto res = check_property3(bad, suites.operators, sc.e0, sc.e1);
    if (res.verdict == Verdict::fail) {
      caught = true;
      REQUIRE(res.counterexample.has_value());
      CHECK(res.counterexample->stage.has_value());
      CHECK(res.counterexample->later_stage.has_value());
      CHECK(res.counterexample->element.has_value());
    }
  }
  CHECK(caught);
}

TEST_CASE("property 2") {
  const auto suite = constant_suite(0);
  const auto pass = check_property2(scenario_trace(), suite, 0, 0);
  CHECK(pass.verdict == Verdict::pass);
  CHECK(pass.detail.find("witness 1") != std::string::npos);

  const auto divergent = functionals({{spec::Empty{}}});
  CHECK(check_property2(run(divergent, {50, {}}), divergent, 0, 0).verdict == Verdict::inconclusive);
  CHECK(check_property2(scenario_trace(2), suite, 0, 0).verdict == Verdict::inconclusive);

  // A trace in which nothing ever acts, checked against a suite that demands action.
  const auto idle = run(FunctionalSuite{}, {5, {}});
  const auto fail = check_property2(idle, suite, 0, 0);
  CHECK(fail.verdict == Verdict::fail);
  CHECK(fail.counterexample.has_value());
}

TEST_CASE("structural checks pass on genuine runs") {
  for (std::uint64_t seed = 300; seed < 310; ++seed) {
    const auto cfg = scenarios::random_config(seed, 200);
    const auto suites = build_suites(cfg);
    const auto report =
        check_structural(run(suites.functionals, {cfg.horizon, {7, Mutation::none}}), &suites.functionals);
    for (const auto& c : report.checks) CHECK_MESSAGE(c.verdict == Verdict::pass, c.name << ": " << c.detail);
  }
}

TEST_CASE("a double insertion breaks the d.c.e. check") {
  const auto trace = forged({{2, {{0, 0}, 1, 2}}, {3, {{0, 0}, 1, 3}}}, {}, 5);
  const auto report = check_structural(trace);
  const auto& dce = get(report, "structural.dce");
  CHECK(dce.verdict == Verdict::fail);
  REQUIRE(dce.counterexample.has_value());
  CHECK(dce.counterexample->stage == Stage{3});
  CHECK(dce.counterexample->element == Natural{1});
}

TEST_CASE("removing a stronger pair's element breaks removal soundness") {
  const auto trace = forged({{2, {{0, 0}, 1, 2}}, {4, {{0, 1}, 3, 4}}}, {{4, {1, 0, {0, 0}, 2}}}, 5);
  const auto report = check_structural(trace);
  const auto& c = get(report, "structural.removal_soundness");
  CHECK(c.verdict == Verdict::fail);
  REQUIRE(c.counterexample.has_value());
  CHECK(c.counterexample->element == Natural{1});
}

TEST_CASE("engine mutations are caught by the structural checks") {
  const auto suite = functionals({delayed({spec::TotalConst{0}}, 0, 100), {spec::TotalConst{0}}});
  const auto expect_fail = [&](Mutation m, const std::string& name) {
    const auto report = check_structural(run(suite, {150, {0, m}}), &suite);
    CHECK_MESSAGE(get(report, name).verdict == Verdict::fail, name);
  };
  expect_fail(Mutation::skip_removals, "structural.removal_soundness");
  expect_fail(Mutation::wrong_removal_side, "structural.removal_soundness");
  expect_fail(Mutation::skip_restraints, "structural.restraint_discipline");
}

TEST_CASE("a tampered summary is reported") {
  auto trace = scenario_trace();
  trace.summary.members[1].push_back(5);
  CHECK(get(check_structural(trace), "structural.summary_replay").verdict == Verdict::fail);
}

TEST_CASE("reference_run matches run") {
  CHECK(reference_run(constant_suite(0), 0).events.empty());
  CHECK(reference_run(constant_suite(0), 5) == scenario_trace());
  for (std::uint64_t seed = 400; seed < 405; ++seed) {
    const auto cfg = scenarios::random_config(seed, 200);
    const auto suites = build_suites(cfg);
    CHECK(reference_run(suites.functionals, 200, 9) == run(suites.functionals, {200, {9, Mutation::none}}));
  }
}

TEST_CASE("end-to-end on the parity reduction") {
  const auto cfg = scenarios::parity_reduction();
  REQUIRE(cfg.end_to_end.has_value());
  const auto& e = *cfg.end_to_end;
  const auto suites = build_suites(cfg);
  const auto trace = run(suites.functionals, {cfg.horizon, {}});
  const auto res = end_to_end_check(trace, suites.operators, e.e0, e.e1, e.target, e.bound, e.threshold_rational());
  CHECK(res.check.verdict == Verdict::pass);
  CHECK(res.disagreements.empty());
  Natural below = 0;
  for (const auto& [n, entry] : res.psi.entries) {
    CHECK(entry.value == n % 2);
    if (n < e.bound) ++below;
  }
  CHECK(res.domain_density == Rational(below, e.bound));
  CHECK(res.domain_density >= Rational(9, 10));

  const auto strict = end_to_end_check(trace, suites.operators, e.e0, e.e1, e.target, e.bound, Rational(99, 100));
  CHECK(strict.check.verdict == Verdict::fail);
}

TEST_CASE("reports sort by check name") {
  VerificationReport r;
  r.checks.push_back({"b", Verdict::pass, "", std::nullopt});
  r.checks.push_back({"a", Verdict::inconclusive, "", std::nullopt});
  CHECK_FALSE(r.failed());
  r.append({{{"c", Verdict::fail, "", std::nullopt}}});
  r.sort();
  CHECK(r.checks[0].name == "a");
  CHECK(r.checks[2].name == "c");
  CHECK(r.failed());
}
