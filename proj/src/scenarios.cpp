#include "mpgen/scenarios.hpp"

#include <random>

namespace mpgen::scenarios {

namespace {

FunctionalSpec total_const(Bit v) { return {spec::TotalConst{v}}; }

FunctionalSpec staged(std::vector<std::pair<Natural, Stage>> converge_at, Bit value = 0) {
  spec::StagedTable t;
  for (const auto& [n, s] : converge_at) t.entries.push_back({n, value, s, std::nullopt});
  return {t};
}

FunctionalSpec machine(std::initializer_list<const char*> lines) {
  spec::Machine m;
  for (const auto* l : lines) m.program.push_back(parse_instruction(l));
  return {m};
}

spec::AxiomSpec guarded(std::vector<std::pair<Natural, Bit>> premise, Natural output,
                        std::optional<Stage> stage = std::nullopt) {
  return {std::move(premise), output, stage};
}

OperatorSpec axioms(std::vector<spec::AxiomSpec> list) { return {spec::AxiomList{std::move(list)}}; }

RunConfig with(std::vector<FunctionalSpec> fns, std::vector<OperatorSpec> ops, Stage horizon) {
  RunConfig c;
  c.horizon = horizon;
  c.suite.functionals = std::move(fns);
  c.suite.operators = std::move(ops);
  return c;
}

}  // namespace

RunConfig three_stage() { return with({total_const(0)}, {}, 5); }

RunConfig random_config(std::uint64_t seed, Stage horizon) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  RunConfig c;
  c.horizon = horizon;
  c.seed = seed;

  const auto n_fns = uniform(3, 6);
  for (std::uint64_t i = 0; i < n_fns; ++i) {
    FunctionalSpec fs;
    switch (uniform(0, 6)) {
      case 0:
        fs = total_const(static_cast<Bit>(uniform(0, 1)));
        break;
      case 1:
        fs = delayed(total_const(static_cast<Bit>(uniform(0, 1))), uniform(0, 2), uniform(0, 60));
        break;
      case 2:
        fs = {spec::RandomPartial{0.3 + 0.65 * std::uniform_real_distribution<double>(0, 1)(rng), ValueRule::random,
                                  rng(), uniform(0, 30)}};
        break;
      case 3:
        fs = {spec::UndefinedOnClass{static_cast<unsigned>(uniform(0, 3)), static_cast<Bit>(uniform(0, 1))}};
        break;
      case 4: {
        spec::TotalFn t;
        const auto len = uniform(1, 8);
        for (std::uint64_t k = 0; k < len; ++k) t.table.push_back(static_cast<Bit>(uniform(0, 1)));
        t.fill = FillRule::cycle;
        fs = delayed({t}, 0, uniform(0, 40));
        break;
      }
      case 5:
        switch (uniform(0, 2)) {
          case 0:
            fs = machine({"HALT"});
            break;
          case 1:  // drains the input into register 1, about 3n steps
            fs = machine({"DECJZ 0 3", "INC 1", "DECJZ 2 0", "HALT"});
            break;
          default:  // halts on even inputs, loops on odd ones
            fs = machine({"DECJZ 0 4", "DECJZ 0 3", "DECJZ 1 0", "DECJZ 1 3", "HALT"});
            break;
        }
        break;
      default:
        fs = coin(0.5) ? FunctionalSpec{spec::Empty{}} : delayed(total_const(0), 1, uniform(0, 20));
        break;
    }
    c.suite.functionals.push_back(std::move(fs));
  }

  const auto n_ops = uniform(2, 4);
  for (std::uint64_t i = 0; i < n_ops; ++i) {
    if (coin(0.25)) {
      c.suite.operators.push_back(
          {spec::Reduction{TargetRule::parity, 60, GuardRule::mod, uniform(4, 16), uniform(0, 5)}});
      continue;
    }
    std::vector<spec::AxiomSpec> list;
    const auto n_axioms = uniform(3, 10);
    for (std::uint64_t a = 0; a < n_axioms; ++a) {
      spec::AxiomSpec ax;
      const auto premise_size = uniform(0, 2);
      for (std::uint64_t p = 0; p < premise_size; ++p)
        ax.premise.emplace_back(uniform(0, 12), coin(0.9) ? Bit{1} : Bit{0});
      if (coin(0.5))
        ax.output = uniform(0, 5);
      else
        ax.output = std::pair<Natural, Natural>{uniform(0, 20), uniform(0, 1)};
      Natural use = 0;
      for (const auto& [n, v] : ax.premise) use = std::max<Natural>(use, pair(n, v) + 1);
      ax.stage = use + uniform(0, 40);
      list.push_back(std::move(ax));
    }
    c.suite.operators.push_back(axioms(std::move(list)));
  }
  return c;
}

std::vector<OperatorScenario> property3_battery() {
  std::vector<OperatorScenario> out;
  const Natural x = 42;

  // 1. Both sides enumerate unconditionally.
  out.push_back(
      {"unconditional",
       with({total_const(0)}, {axioms({guarded({}, pair(5, 1), 0)}), axioms({guarded({}, pair(5, 1), 0)})}, 20)});

  // 2. Side 0's premise (point 1) is destroyed when P(0,0) acts at stage 11; side 1 is unconditional.
  out.push_back({"premise_injury", with({delayed(total_const(0), 0, 10)},
                                        {axioms({guarded({{1, 1}}, x)}), axioms({guarded({}, x)})}, 40)});

  // 3. P(2,1) puts 12 into A_1 at stage 97, breaking side 1; P(0,0) later puts 1
  //    into A_0, breaking side 0, and must take 12 back out.
  out.push_back({"restoration",
                 with({delayed(total_const(0), 0, 150), FunctionalSpec{spec::Empty{}}, delayed(total_const(0), 8, 0)},
                      {axioms({guarded({{1, 1}}, x)}), axioms({guarded({{12, 1}}, x)})}, 200)});

  // 4. Mirror image: P(2,0) breaks side 0 at stage 97, P(0,1) breaks side 1 at
  //    stage 150 and restores side 0.
  out.push_back(
      {"restoration_mirrored", with({staged({{1, 2}, {3, 150}}), FunctionalSpec{spec::Empty{}}, staged({{12, 97}})},
                                    {axioms({guarded({{12, 1}}, x)}), axioms({guarded({{3, 1}}, x)})}, 200)});

  // 5. P(0,0) breaks side 0 at stage 101; only the restraint r(0,0) = 101 keeps
  //    P(2,0) and P(2,1) off the point 4 guarding side 1.
  out.push_back({"restraint_guard",
                 with({delayed(total_const(0), 0, 100), FunctionalSpec{spec::Empty{}}, delayed(total_const(0), 0, 120)},
                      {axioms({guarded({{1, 1}}, x)}), axioms({guarded({{4, 1}}, x)})}, 200)});

  // 6. Several outputs with premises spread over R_0, R_1 and R_2.
  out.push_back(
      {"mixed_premises",
       with({delayed(total_const(1), 0, 30), delayed(total_const(0), 1, 10), delayed(total_const(0), 6, 0)},
            {axioms({guarded({{1, 1}, {2, 1}}, 7), guarded({{4, 1}}, 8), guarded({{3, 1}}, 9), guarded({}, 10, 50)}),
             axioms({guarded({{2, 1}}, 7), guarded({{1, 1}, {4, 1}}, 8), guarded({{6, 1}}, 9), guarded({{5, 1}}, 10)})},
            200)});

  // 7. One side emits the wrong value for every n; nothing should ever be in the intersection.
  out.push_back(
      {"one_sided_wrong_values", with({total_const(0), total_const(1)},
                                      {OperatorSpec{spec::Reduction{TargetRule::parity, 40, GuardRule::none, 1, 0}},
                                       OperatorSpec{spec::Reduction{TargetRule::ones, 40, GuardRule::none, 1, 0}}},
                                      120)});

  // 8. Guarded parity reductions over a suite with repeated injuries.
  out.push_back(
      {"guarded_reductions",
       with({delayed(total_const(0), 0, 40), staged({{2, 60}, {6, 60}, {10, 130}}), delayed(total_const(1), 4, 0)},
            {OperatorSpec{spec::Reduction{TargetRule::parity, 80, GuardRule::mod, 8, 0}},
             OperatorSpec{spec::Reduction{TargetRule::parity, 80, GuardRule::mod, 6, 3}}},
            200)});

  // 9. Axioms that only appear after the construction has started injuring.
  out.push_back({"late_axioms",
                 with({delayed(total_const(0), 0, 20), delayed(total_const(0), 2, 0), delayed(total_const(0), 5, 0)},
                      {axioms({guarded({{1, 1}}, x, 90), guarded({{3, 1}}, x + 1, 120), guarded({{4, 1}}, x + 2, 30)}),
                       axioms({guarded({{2, 1}}, x, 60), guarded({{4, 1}}, x + 1, 20), guarded({{1, 1}}, x + 2, 150)})},
                      200)});

  // 10. A machine-enumerated operator (halts on every code) against a
  //     premise-guarded list.
  {
    auto c = with({delayed(total_const(0), 0, 12), machine({"HALT"}), delayed(total_const(1), 3, 0)},
                  {OperatorSpec{spec::MachineOperator{{parse_instruction("HALT")}}},
                   axioms({guarded({{0, 1}}, 3), guarded({{1, 1}}, 5), guarded({{2, 1}}, 11), guarded({}, 1)})},
                  150);
    out.push_back({"machine_operator", std::move(c)});
  }

  // 11. The same operator on both sides with a shared premise point.
  out.push_back({"shared_premise", with({delayed(total_const(0), 0, 50), delayed(total_const(0), 0, 20)},
                                        {axioms({guarded({{2, 1}}, x), guarded({{1, 1}}, x + 1)}),
                                         axioms({guarded({{2, 1}}, x), guarded({{1, 1}}, x + 1)})},
                                        150)});

  // 12. Dense random suite with random axiom lists.
  {
    auto c = random_config(7, 200);
    out.push_back({"random_seed7", std::move(c)});
  }
  return out;
}

RunConfig parity_reduction() {
  auto c = with({total_const(0)},
                {OperatorSpec{spec::Reduction{TargetRule::parity, 1000, GuardRule::mod, 32, 0}},
                 OperatorSpec{spec::Reduction{TargetRule::parity, 1000, GuardRule::mod, 32, 0}}},
                1000);
  c.end_to_end = EndToEndSpec{TargetRule::parity, 0, 1, 1000, 0.9};
  return c;
}

}  // namespace mpgen::scenarios
