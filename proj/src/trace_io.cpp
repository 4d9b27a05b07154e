#include "mpgen/trace_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mpgen {

using nlohmann::json;

namespace {

json members_json(const std::vector<Natural>& v) { return json(v); }

[[noreturn]] void bad(std::size_t line, const std::string& what) {
  throw MalformedTrace("trace line " + std::to_string(line) + ": " + what);
}

void expect_keys(const json& j, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional, std::size_t line, const char* what) {
  if (!j.is_object()) bad(line, std::string(what) + " is not an object");
  std::set<std::string> allowed;
  for (const auto* k : required) {
    if (!j.contains(k)) bad(line, std::string(what) + " lacks '" + k + "'");
    allowed.insert(k);
  }
  for (const auto* k : optional) allowed.insert(k);
  for (const auto& [k, _] : j.items())
    if (!allowed.contains(k)) bad(line, std::string(what) + " has unknown key '" + k + "'");
}

std::uint64_t nat(const json& j, std::size_t line, const char* what) {
  if (!j.is_number_unsigned()) bad(line, std::string(what) + " is not a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::vector<Natural> nat_list(const json& j, std::size_t line, const char* what) {
  if (!j.is_array()) bad(line, std::string(what) + " is not an array");
  std::vector<Natural> out;
  for (const auto& v : j) out.push_back(nat(v, line, what));
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i - 1] >= out[i]) bad(line, std::string(what) + " is not strictly ascending");
  return out;
}

unsigned side_of(const json& j, std::size_t line, const char* what) {
  const auto v = nat(j, line, what);
  if (v > 1) bad(line, std::string(what) + " is not 0 or 1");
  return static_cast<unsigned>(v);
}

TraceEvent parse_event(const json& j, std::size_t line) {
  expect_keys(j, {"stage", "action", "removals"}, {"snapshot"}, line, "stage record");
  TraceEvent ev;
  ev.stage = nat(j["stage"], line, "stage");
  if (!j["action"].is_null()) {
    const auto& a = j["action"];
    expect_keys(a, {"e", "j", "witness", "restraint"}, {}, line, "action");
    ev.action = Action{{nat(a["e"], line, "e"), side_of(a["j"], line, "j")},
                       nat(a["witness"], line, "witness"),
                       nat(a["restraint"], line, "restraint")};
  }
  if (!j["removals"].is_array()) bad(line, "removals is not an array");
  for (const auto& r : j["removals"]) {
    expect_keys(r, {"n", "side", "e", "j", "inserted_at"}, {}, line, "removal");
    ev.removals.push_back({nat(r["n"], line, "n"),
                           side_of(r["side"], line, "side"),
                           {nat(r["e"], line, "e"), side_of(r["j"], line, "j")},
                           nat(r["inserted_at"], line, "inserted_at")});
  }
  if (j.contains("snapshot")) {
    const auto& s = j["snapshot"];
    expect_keys(s, {"A0", "A1"}, {}, line, "snapshot");
    ev.snapshot = Snapshot{{nat_list(s["A0"], line, "A0"), nat_list(s["A1"], line, "A1")}};
  }
  return ev;
}

TraceSummary parse_summary(const json& j, std::size_t line) {
  expect_keys(j, {"schema", "horizon", "A0", "A1", "restraints"}, {}, line, "summary");
  if (j["schema"] != kTraceSchema) bad(line, "unsupported schema tag");
  TraceSummary s;
  s.horizon = nat(j["horizon"], line, "horizon");
  s.members = {nat_list(j["A0"], line, "A0"), nat_list(j["A1"], line, "A1")};
  if (!j["restraints"].is_array()) bad(line, "restraints is not an array");
  for (const auto& r : j["restraints"]) {
    if (!r.is_array() || r.size() != 3) bad(line, "restraint entry is not [e, j, r]");
    s.restraints.emplace_back(PriorityIndex{nat(r[0], line, "e"), side_of(r[1], line, "j")}, nat(r[2], line, "r"));
  }
  return s;
}

}  // namespace

std::string serialize_event(const TraceEvent& ev) {
  json j;
  j["stage"] = ev.stage;
  if (ev.action)
    j["action"] = {{"e", ev.action->pair.e},
                   {"j", ev.action->pair.j},
                   {"witness", ev.action->witness},
                   {"restraint", ev.action->restraint}};
  else
    j["action"] = nullptr;
  j["removals"] = json::array();
  for (const auto& r : ev.removals)
    j["removals"].push_back(
        {{"n", r.n}, {"side", r.side}, {"e", r.inserted_by.e}, {"j", r.inserted_by.j}, {"inserted_at", r.inserted_at}});
  if (ev.snapshot)
    j["snapshot"] = {{"A0", members_json(ev.snapshot->members[0])}, {"A1", members_json(ev.snapshot->members[1])}};
  return j.dump();
}

std::string serialize_summary(const TraceSummary& summary) {
  json r = json::array();
  for (const auto& [p, v] : summary.restraints) r.push_back({p.e, p.j, v});
  json j = {{"summary",
             {{"schema", kTraceSchema},
              {"horizon", summary.horizon},
              {"A0", members_json(summary.members[0])},
              {"A1", members_json(summary.members[1])},
              {"restraints", r}}}};
  return j.dump();
}

std::string serialize_trace(const Trace& trace) {
  std::string out;
  for (const auto& ev : trace.events) {
    out += serialize_event(ev);
    out += '\n';
  }
  out += serialize_summary(trace.summary);
  out += '\n';
  return out;
}

Trace parse_trace(std::string_view text) {
  Trace trace;
  bool have_summary = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    if (have_summary) bad(line_no, "record after the summary line");
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& err) {
      bad(line_no, err.what());
    }
    if (j.is_object() && j.contains("summary")) {
      expect_keys(j, {"summary"}, {}, line_no, "summary record");
      trace.summary = parse_summary(j["summary"], line_no);
      have_summary = true;
    } else {
      trace.events.push_back(parse_event(j, line_no));
    }
  }
  if (!have_summary) bad(line_no, "missing summary line");
  validate_trace_schema(trace);
  return trace;
}

Trace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_trace(buf.str());
}

void write_trace(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << serialize_trace(trace);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string serialize_report(const VerificationReport& report, const ReportMeta& meta) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    json entry = {{"name", c.name}, {"verdict", to_string(c.verdict)}, {"detail", c.detail}};
    if (c.counterexample) {
      const auto& x = *c.counterexample;
      json cj = {{"note", x.note}};
      if (x.stage) cj["stage"] = *x.stage;
      if (x.later_stage) cj["later_stage"] = *x.later_stage;
      if (x.element) cj["element"] = *x.element;
      if (x.pair) cj["pair"] = {x.pair->e, x.pair->j};
      entry["counterexample"] = cj;
    } else {
      entry["counterexample"] = nullptr;
    }
    checks.push_back(entry);
  }
  json j = {{"checks", checks},
            {"failed", report.failed()},
            {"meta", {{"horizon", meta.horizon}, {"config", meta.config}, {"schema", "mpgen-report/1"}}}};
  return j.dump(2) + "\n";
}

}  // namespace mpgen
