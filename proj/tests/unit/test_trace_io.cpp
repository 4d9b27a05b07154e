#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "mpgen/scenarios.hpp"
#include "mpgen/trace_io.hpp"
#include "mpgen/verify.hpp"

using namespace mpgen;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool throws_malformed(const std::string& text) {
  try {
    (void)parse_trace(text);
  } catch (const MalformedTrace&) {
    return true;
  }
  return false;
}

const std::string kScenarioTrace =
    "{\"action\":null,\"removals\":[],\"stage\":0}\n"
    "{\"action\":null,\"removals\":[],\"stage\":1}\n"
    "{\"action\":{\"e\":0,\"j\":0,\"restraint\":2,\"witness\":1},\"removals\":[],\"stage\":2}\n"
    "{\"action\":null,\"removals\":[],\"stage\":3}\n"
    "{\"action\":{\"e\":0,\"j\":1,\"restraint\":4,\"witness\":3},\"removals\":[],\"stage\":4}\n"
    "{\"summary\":{\"A0\":[1],\"A1\":[3],\"horizon\":5,\"restraints\":[[0,0,2],[0,1,4]],\"schema\":\"mpgen-trace/"
    "1\"}}\n";

}  // namespace

TEST_CASE("the scenario trace, byte for byte") {
  CHECK(serialize_trace(run_config(scenarios::three_stage())) == kScenarioTrace);
}

TEST_CASE("horizon zero writes only the summary") {
  auto cfg = scenarios::three_stage();
  cfg.horizon = 0;
  CHECK(serialize_trace(run_config(cfg)) ==
        "{\"summary\":{\"A0\":[],\"A1\":[],\"horizon\":0,\"restraints\":[],\"schema\":\"mpgen-trace/1\"}}\n");
}

TEST_CASE("traces round-trip with removals and snapshots") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto cfg = scenarios::random_config(seed, 200);
    cfg.snapshot_every = 13;
    const auto trace = run_config(cfg);
    const auto text = serialize_trace(trace);
    const auto back = parse_trace(text);
    REQUIRE(back == trace);
    REQUIRE(serialize_trace(back) == text);
  }
}

TEST_CASE("malformed traces are rejected") {
  CHECK(throws_malformed(""));
  CHECK(throws_malformed("not json\n"));
  CHECK(throws_malformed(kScenarioTrace.substr(0, kScenarioTrace.rfind("{\"summary"))));
  std::string gap = kScenarioTrace;
  gap.replace(gap.find("\"stage\":3"), 9, "\"stage\":7");
  CHECK(throws_malformed(gap));
  std::string extra = kScenarioTrace;
  extra.replace(extra.find("\"stage\":0}"), 10, "\"stage\":0,\"colour\":1}");
  CHECK(throws_malformed(extra));
  std::string schema = kScenarioTrace;
  schema.replace(schema.find("mpgen-trace/1"), 13, "mpgen-trace/9");
  CHECK(throws_malformed(schema));
  CHECK(throws_malformed(kScenarioTrace + "{\"action\":null,\"removals\":[],\"stage\":5}\n"));
  std::string negative = kScenarioTrace;
  negative.replace(negative.find("\"witness\":1"), 11, "\"witness\":-1");
  CHECK(throws_malformed(negative));
  std::string side = kScenarioTrace;
  side.replace(side.find("\"removals\":[],\"stage\":4"), 22,
               "\"removals\":[{\"e\":0,\"inserted_at\":2,\"j\":0,\"n\":1,\"side\":2}],\"stage\":4");
  CHECK(throws_malformed(side));
}

TEST_CASE("malformed trace errors name the line") {
  std::string bad = kScenarioTrace;
  bad.replace(bad.find("\"stage\":3}"), 10, "\"stage\":3");
  try {
    (void)parse_trace(bad);
    FAIL("expected MalformedTrace");
  } catch (const MalformedTrace& err) {
    CHECK(std::string(err.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("trace files are byte-identical across runs") {
  const auto dir = std::filesystem::temp_directory_path() / "mpgen_trace_io_test";
  std::filesystem::create_directories(dir);
  const auto cfg = scenarios::random_config(3, 200);
  write_trace(run_config(cfg), (dir / "a").string());
  write_trace(run_config(cfg), (dir / "b").string());
  CHECK(slurp(dir / "a") == slurp(dir / "b"));
  CHECK(load_trace((dir / "a").string()) == run_config(cfg));
  CHECK_THROWS(write_trace(run_config(cfg), (dir / "missing" / "c").string()));
  CHECK_THROWS(load_trace((dir / "missing" / "c").string()));
  std::filesystem::remove_all(dir);
}

TEST_CASE("check lists") {
  CHECK(parse_check_list("all").size() == check_names().size());
  CHECK(parse_check_list("").size() == check_names().size());
  CHECK(parse_check_list("property2,oracle_diff") == std::set<std::string>{"property2", "oracle_diff"});
  CHECK(parse_check_list("structural").empty());
  CHECK_THROWS_AS(parse_check_list("property9"), ConfigError);
}

TEST_CASE("verify_trace on a genuine run") {
  const auto cfg = scenarios::parity_reduction();
  const auto trace = run_config(cfg);
  const auto report = verify_trace(trace, cfg, parse_check_list("all"));
  CHECK_FALSE(report.failed());
  for (std::size_t i = 1; i < report.checks.size(); ++i) CHECK(report.checks[i - 1].name < report.checks[i].name);
  for (const std::string name :
       {"end_to_end[0,1]", "oracle_diff", "description[0]", "description[1]", "structural.dce"}) {
    const auto* c = report.find(name);
    REQUIRE_MESSAGE(c != nullptr, name);
    CHECK_MESSAGE(c->verdict == Verdict::pass, name << ": " << c->detail);
  }
  CHECK(report.find("property3[0,1]") != nullptr);
}

TEST_CASE("verify_trace is deterministic") {
  const auto cfg = scenarios::random_config(8, 200);
  const auto trace = run_config(cfg);
  const auto checks = parse_check_list("all");
  const ReportMeta meta{cfg.horizon, "cfg.json"};
  CHECK(serialize_report(verify_trace(trace, cfg, checks), meta) ==
        serialize_report(verify_trace(trace, cfg, checks), meta));
}

TEST_CASE("verify_trace reports a forged double insertion") {
  std::string forged = kScenarioTrace;
  forged.replace(forged.find("{\"action\":null,\"removals\":[],\"stage\":3}"), 39,
                 "{\"action\":{\"e\":0,\"j\":0,\"restraint\":3,\"witness\":1},\"removals\":[],\"stage\":3}");
  forged.replace(forged.find("[[0,0,2]"), 8, "[[0,0,3]");
  const auto report = verify_trace(parse_trace(forged), scenarios::three_stage(), {});
  CHECK(report.failed());
  REQUIRE(report.find("structural.dce") != nullptr);
  CHECK(report.find("structural.dce")->verdict == Verdict::fail);
}

TEST_CASE("report json") {
  VerificationReport r;
  r.checks.push_back({"x", Verdict::fail, "bad", Counterexample{3, 9, 42, PriorityIndex{1, 0}, "note"}});
  const auto j = nlohmann::json::parse(serialize_report(r, {10, "c.json"}));
  CHECK(j["failed"] == true);
  CHECK(j["meta"]["schema"] == "mpgen-report/1");
  CHECK(j["checks"][0]["verdict"] == "fail");
  CHECK(j["checks"][0]["counterexample"]["element"] == 42);
}
