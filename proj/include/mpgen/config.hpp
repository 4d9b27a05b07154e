#pragma once

// Run configuration: strict JSON in, validated RunConfig out.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mpgen/engine.hpp"
#include "mpgen/suites.hpp"

namespace mpgen {

/// Carries the offending field path (e.g. "suite.functionals[1].kind") and,
/// for JSON syntax errors, the line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message, std::size_t line = 0);

  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

struct EndToEndSpec {
  TargetRule target = TargetRule::parity;
  Natural e0 = 0;
  Natural e1 = 1;
  Natural bound = 1000;
  double threshold = 0.9;

  /// threshold rounded to a multiple of 1e-9, as an exact rational
  Rational threshold_rational() const;
  bool operator==(const EndToEndSpec&) const = default;
};

struct RunConfig {
  Stage horizon = 0;
  Stage snapshot_every = 0;
  std::uint64_t seed = 0;
  std::string out;  // optional default output path
  Natural description_bound = 1000;
  std::optional<ProbeGrid> probe;
  SuiteSpec suite;
  std::optional<EndToEndSpec> end_to_end;

  /// The probe grid in effect: the configured one, or one sized from the horizon.
  ProbeGrid effective_probe() const;
  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

/// Compiles and validates the suite. Throws SuiteValidationError.
Suites build_suites(const RunConfig& config);

/// Builds the suite and runs the construction to the configured horizon.
Trace run_config(const RunConfig& config, const EngineOptions& engine = {},
                 const std::function<void(const TraceEvent&)>& sink = {});

}  // namespace mpgen
