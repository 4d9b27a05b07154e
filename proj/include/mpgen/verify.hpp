#pragma once

// Runs a selection of checkers over a trace and merges their verdicts.

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mpgen/analysis.hpp"
#include "mpgen/config.hpp"

namespace mpgen {

/// Selectable checks; the structural suite always runs.
const std::vector<std::string>& check_names();

/// Comma-separated names, or "all"/empty for every check. Throws ConfigError on unknown names.
std::set<std::string> parse_check_list(std::string_view list);

/// property2 runs for every listed functional and both sides, property3 for
/// every ordered pair of listed operators, description for both sides at the
/// configured bound, end_to_end when the config carries that section, and
/// oracle_diff compares against reference_run(). Checks are sorted by name.
VerificationReport verify_trace(const Trace& trace, const RunConfig& config, const std::set<std::string>& checks);

/// check_description(f_{j,T}, X_j, N) with the exact-density expectation.
CheckResult check_description_quality(const Trace& trace, const FunctionalSuite& suite, unsigned side, Natural bound);

}  // namespace mpgen
