#include "mpgen/verify.hpp"

#include <algorithm>
#include <future>

#include "mpgen/trace_io.hpp"

namespace mpgen {

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {"description", "end_to_end", "oracle_diff", "property2", "property3"};
  return names;
}

std::set<std::string> parse_check_list(std::string_view list) {
  const auto& known = check_names();
  if (list.empty() || list == "all") return {known.begin(), known.end()};
  std::set<std::string> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    auto end = list.find(',', pos);
    if (end == std::string_view::npos) end = list.size();
    std::string name(list.substr(pos, end - pos));
    pos = end + 1;
    if (name.empty()) continue;
    if (name == "structural") continue;  // always on
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw ConfigError("checks", "unknown check '" + name + "'");
    out.insert(name);
  }
  return out;
}

CheckResult check_description_quality(const Trace& trace, const FunctionalSuite& suite, unsigned side, Natural bound) {
  const std::string name = "description[" + std::to_string(side) + "]";
  const auto x = derive_x(trace, suite, side, bound);
  const TraceReplay replay(trace);
  const auto& members = replay.members(side, replay.horizon());
  const auto report = check_description(replay.description(side, replay.horizon()), x.bits, bound);

  const auto below = static_cast<std::uint64_t>(std::distance(members.begin(), members.lower_bound(bound)));
  const Rational expected(bound - below, bound);
  std::string detail = "domain density " + report.domain_partial_density.str() + " at N=" + std::to_string(bound);
  if (!report.clean())
    return {name, Verdict::fail, detail,
            Counterexample{replay.horizon(), {}, report.error_points.front(), {}, "f disagrees with X"}};
  if (report.domain_partial_density != expected)
    return {name, Verdict::fail, detail + ", expected " + expected.str(),
            Counterexample{replay.horizon(), {}, {}, {}, "domain density mismatch"}};
  return {name, Verdict::pass, detail, {}};
}

VerificationReport verify_trace(const Trace& trace, const RunConfig& config, const std::set<std::string>& checks) {
  const auto suites = build_suites(config);
  VerificationReport report = check_structural(trace, &suites.functionals);

  if (checks.contains("property2"))
    for (Natural e = 0; e < suites.functionals.size(); ++e)
      for (unsigned j = 0; j < 2; ++j) report.checks.push_back(check_property2(trace, suites.functionals, e, j));

  if (checks.contains("property3")) {
    std::vector<std::future<CheckResult>> pending;
    for (Natural e0 = 0; e0 < suites.operators.size(); ++e0)
      for (Natural e1 = 0; e1 < suites.operators.size(); ++e1)
        pending.push_back(
            std::async(std::launch::async, [&, e0, e1] { return check_property3(trace, suites.operators, e0, e1); }));
    for (auto& f : pending) report.checks.push_back(f.get());
  }

  if (checks.contains("description"))
    for (unsigned j = 0; j < 2; ++j)
      report.checks.push_back(check_description_quality(trace, suites.functionals, j, config.description_bound));

  if (checks.contains("end_to_end")) {
    if (config.end_to_end) {
      const auto& e = *config.end_to_end;
      report.checks.push_back(
          end_to_end_check(trace, suites.operators, e.e0, e.e1, e.target, e.bound, e.threshold_rational()).check);
    } else {
      report.checks.push_back({"end_to_end", Verdict::inconclusive, "config has no end_to_end section", {}});
    }
  }

  if (checks.contains("oracle_diff")) {
    if (trace.horizon() > 10'000) {
      report.checks.push_back(
          {"oracle_diff", Verdict::inconclusive, "horizon beyond the reference oracle's range", {}});
    } else {
      const auto reference = reference_run(suites.functionals, trace.horizon(), config.snapshot_every);
      const auto got = serialize_trace(trace);
      const auto want = serialize_trace(reference);
      if (got == want) {
        report.checks.push_back({"oracle_diff", Verdict::pass, "byte-identical to the reference run", {}});
      } else {
        Counterexample cex;
        cex.note = "first differing stage record";
        for (std::size_t i = 0; i < std::min(trace.events.size(), reference.events.size()); ++i)
          if (!(trace.events[i] == reference.events[i])) {
            cex.stage = i;
            break;
          }
        if (!cex.stage) cex.stage = std::min(trace.events.size(), reference.events.size());
        report.checks.push_back({"oracle_diff", Verdict::fail, "trace differs from the reference run", cex});
      }
    }
  }

  report.sort();
  return report;
}

}  // namespace mpgen
