#pragma once

// Ready-made configurations for tests and the sample config files.

#include <string>
#include <vector>

#include "mpgen/config.hpp"

namespace mpgen::scenarios {

/// [total_const 0] at horizon 5: P(0,0) acts at stage 2, P(0,1) at stage 4.
RunConfig three_stage();

/// A random suite of 3 to 6 functionals and 2 to 4 operators.
RunConfig random_config(std::uint64_t seed, Stage horizon);

struct OperatorScenario {
  std::string name;
  RunConfig config;
  Natural e0 = 0;
  Natural e1 = 1;
};

/// Operator pairs whose premises are injured by weak pairs and restored by
/// strong ones.
std::vector<OperatorScenario> property3_battery();

/// Y = parity, both operators guarded by the oracle at n mod 32, over the
/// three-stage suite; Psi is checked on [0, 1000) against threshold 0.9.
RunConfig parity_reduction();

}  // namespace mpgen::scenarios
