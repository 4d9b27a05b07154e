#pragma once

// Line-delimited trace files and JSON verification reports.
//
// A trace file holds one record per stage followed by a summary record:
//
//   {"action":{"e":0,"j":0,"restraint":2,"witness":1},"removals":[],"stage":2}
//   {"summary":{"A0":[1],"A1":[3],"horizon":5,"restraints":[[0,0,2],[0,1,4]],"schema":"mpgen-trace/1"}}
//
// Keys are emitted in sorted order and every value is an integer, so equal
// traces serialize to identical bytes.

#include <string>
#include <string_view>

#include "mpgen/analysis.hpp"
#include "mpgen/engine.hpp"

namespace mpgen {

inline constexpr const char* kTraceSchema = "mpgen-trace/1";

std::string serialize_event(const TraceEvent& ev);
std::string serialize_summary(const TraceSummary& summary);
std::string serialize_trace(const Trace& trace);

/// Throws MalformedTrace, naming the offending line.
Trace parse_trace(std::string_view text);
Trace load_trace(const std::string& path);

/// Throws std::runtime_error when the file cannot be written.
void write_trace(const Trace& trace, const std::string& path);

struct ReportMeta {
  Stage horizon = 0;
  std::string config;  // where the run can be replayed from
};

std::string serialize_report(const VerificationReport& report, const ReportMeta& meta);

}  // namespace mpgen
